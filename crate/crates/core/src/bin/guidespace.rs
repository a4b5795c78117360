use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use guidespace::bench::{self, BenchError, ExperimentPlan};
use guidespace::environments::{
    all_scenarios, load_environment, save_environment, scenario_by_name,
};
use guidespace::metrics::MetricSettings;

#[derive(Parser)]
#[command(version, about = "Guided motion-planning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment plan.
    Run {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Render the sample distribution of one planner on one scenario.
    Render {
        #[arg(long)]
        scenario: String,
        /// Run output directory or its logs/ subdirectory.
        #[arg(long)]
        logs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "drrrt")]
        planner: String,
        /// Planner whose tree samples are overlaid in green; "none" disables.
        #[arg(long, default_value = "rrt")]
        baseline: String,
    },
    /// Build the planner × scenario table from a run directory.
    Table {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scenario utilities.
    Envs {
        #[command(subcommand)]
        command: EnvsCommand,
    },
}

#[derive(Subcommand)]
enum EnvsCommand {
    /// Write the canonical scenario files.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
}

fn plan_dir(plan: &Path) -> PathBuf {
    plan.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn run_dir_root(logs: &Path) -> PathBuf {
    if logs.join("logs").is_dir() {
        logs.to_path_buf()
    } else {
        logs.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run { plan, out, workers } => {
            let p = ExperimentPlan::load(&plan)?;
            let summary = bench::run(&p, &plan_dir(&plan), &out, workers)?;
            let ok = summary.runs.iter().filter(|r| r.success).count();
            println!(
                "{} runs, {} succeeded; results in {}",
                summary.runs.len(),
                ok,
                out.display()
            );
            for r in summary.runs.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "{} {} seed {}: {}",
                    r.planner,
                    r.scenario,
                    r.seed,
                    r.error.as_deref().unwrap_or("")
                );
            }
        }
        Command::Render {
            scenario,
            logs,
            out,
            planner,
            baseline,
        } => {
            let root = run_dir_root(&logs);
            let copy = root.join("scenarios").join(format!("{scenario}.json"));
            let s = if copy.is_file() {
                load_environment(&copy)?
            } else {
                scenario_by_name(&scenario)?
            };
            let metric = match ExperimentPlan::load(&root.join("manifest.toml")) {
                Ok(m) => m.metric,
                Err(_) => MetricSettings::default(),
            };
            let baseline = (baseline != "none" && baseline != planner).then_some(baseline.as_str());
            let stats = bench::render_from_dir(&s, &logs, &planner, baseline, &metric, &out)?;
            println!(
                "{} runs: {} tree, {} expansion, {} baseline samples -> {}",
                stats.runs,
                stats.tree,
                stats.expansion,
                stats.baseline,
                out.display()
            );
        }
        Command::Table { results, out } => {
            print!("{}", bench::table_from_dir(&results, &out)?);
        }
        Command::Envs {
            command: EnvsCommand::Export { out },
        } => {
            std::fs::create_dir_all(&out).map_err(|source| BenchError::Io {
                path: out.clone(),
                source,
            })?;
            for s in all_scenarios() {
                let path = out.join(format!("{}.json", s.name));
                save_environment(&s, &path)?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
