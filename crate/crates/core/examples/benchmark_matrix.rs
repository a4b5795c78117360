//! The full planner x scenario matrix through the library API.
//!
//! Usage: `cargo run --release --example benchmark_matrix [out_dir] [num_seeds]`

use std::path::{Path, PathBuf};

use guidespace::bench::{make_table, run, ExperimentPlan};

fn main() {
    let mut args = std::env::args().skip(1);
    let out: PathBuf = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("guidespace-matrix"));
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut plan = ExperimentPlan::load(&data.join("default_matrix.toml")).expect("plan");
    if let Some(n) = args.next().and_then(|s| s.parse().ok()) {
        plan.num_seeds = Some(n);
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let summary = run(&plan, &data, &out, workers).expect("run");
    let failures = summary.runs.iter().filter(|r| !r.success).count();
    println!(
        "{} runs ({failures} without a path), outputs in {}",
        summary.runs.len(),
        out.display()
    );
    print!("{}", make_table(&summary.rows));
}
