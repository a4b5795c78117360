//! Seeded experiment runner, result tables and SVG figures.
//!
//! An [`ExperimentPlan`] (TOML) names scenario files, planners with their
//! hyper-parameters, seeds and metric settings. [`run`] executes the full
//! planner × scenario × seed matrix, in parallel if asked, and writes:
//!
//! ```text
//! out/
//!   logs/<planner>__<scenario>__<seed>.csv   sample logs
//!   paths/<planner>__<scenario>__<seed>.json solution paths
//!   results.csv                              one row per run and sample kind
//!   aggregate.csv                            mean and sd over seeds
//!   table.csv                                planner × scenario grid
//!   manifest.toml                            resolved plan, reusable as a plan
//!   scenarios/<name>.json                    copies of the scenario files
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::environments::{load_environment, scenario_to_string, BenchmarkScenario, ScenarioError};
use crate::geometry::{Configuration, Path};
use crate::metrics::{
    aggregate_over_seeds, pooled_sampling_efficiency, Aggregate, GridSpec, MetricSettings,
};
use crate::planners::{
    drrrt_plan, irc_plan, lazyprm_plan, rrt_plan, LogRecord, PlanResult, PlannerError,
    PlannerParams, SampleKind, SampleLog, DEFAULT_ENHANCEMENT_NODES, DEFAULT_K_NEIGHBORS,
    DEFAULT_REGION_RADIUS, DEFAULT_ROADMAP_SIZE, DEFAULT_SHRINK_FACTOR, DEFAULT_UNIFORM_MIX,
};

pub const DEFAULT_NUM_SEEDS: usize = 15;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl BenchError {
    pub fn is_config(&self) -> bool {
        matches!(self, BenchError::Config(_) | BenchError::Scenario(_))
    }
}

fn io_err(path: &FsPath) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &FsPath, contents: &str) -> Result<(), BenchError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn read_file(path: &FsPath) -> Result<String, BenchError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn default_region_radius() -> f64 {
    DEFAULT_REGION_RADIUS
}
fn default_roadmap_size() -> usize {
    DEFAULT_ROADMAP_SIZE
}
fn default_k_neighbors() -> usize {
    DEFAULT_K_NEIGHBORS
}
fn default_enhancement_nodes() -> usize {
    DEFAULT_ENHANCEMENT_NODES
}
fn default_shrink_factor() -> f64 {
    DEFAULT_SHRINK_FACTOR
}
fn default_uniform_mix() -> f64 {
    DEFAULT_UNIFORM_MIX
}

/// A planner and its planner-specific hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PlannerSpec {
    Rrt,
    Drrrt {
        #[serde(default = "default_region_radius")]
        region_radius: f64,
    },
    Lazyprm {
        #[serde(default = "default_roadmap_size")]
        roadmap_size: usize,
        #[serde(default = "default_k_neighbors")]
        k_neighbors: usize,
        #[serde(default = "default_enhancement_nodes")]
        enhancement_nodes: usize,
    },
    Irc {
        #[serde(default = "default_shrink_factor")]
        shrink_factor: f64,
        #[serde(default = "default_uniform_mix")]
        uniform_mix: f64,
    },
}

impl PlannerSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PlannerSpec::Rrt => "rrt",
            PlannerSpec::Drrrt { .. } => "drrrt",
            PlannerSpec::Lazyprm { .. } => "lazyprm",
            PlannerSpec::Irc { .. } => "irc",
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            PlannerSpec::Rrt => "RRT",
            PlannerSpec::Drrrt { .. } => "DR-RRT",
            PlannerSpec::Lazyprm { .. } => "LazyPRM",
            PlannerSpec::Irc { .. } => "IRC",
        }
    }

    pub fn default_all() -> Vec<PlannerSpec> {
        vec![
            PlannerSpec::Rrt,
            PlannerSpec::Drrrt {
                region_radius: DEFAULT_REGION_RADIUS,
            },
            PlannerSpec::Lazyprm {
                roadmap_size: DEFAULT_ROADMAP_SIZE,
                k_neighbors: DEFAULT_K_NEIGHBORS,
                enhancement_nodes: DEFAULT_ENHANCEMENT_NODES,
            },
            PlannerSpec::Irc {
                shrink_factor: DEFAULT_SHRINK_FACTOR,
                uniform_mix: DEFAULT_UNIFORM_MIX,
            },
        ]
    }

    pub fn plan(
        &self,
        scenario: &BenchmarkScenario,
        params: &PlannerParams,
    ) -> Result<PlanResult, PlannerError> {
        match *self {
            PlannerSpec::Rrt => rrt_plan(scenario, params),
            PlannerSpec::Drrrt { region_radius } => drrrt_plan(scenario, params, region_radius),
            PlannerSpec::Lazyprm {
                roadmap_size,
                k_neighbors,
                enhancement_nodes,
            } => lazyprm_plan(
                scenario,
                params,
                roadmap_size,
                k_neighbors,
                enhancement_nodes,
            ),
            PlannerSpec::Irc {
                shrink_factor,
                uniform_mix,
            } => irc_plan(scenario, params, shrink_factor, uniform_mix),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerEntry {
    /// Name used in file names and tables; defaults to the planner kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub planner: PlannerSpec,
}

impl PlannerEntry {
    pub fn new(planner: PlannerSpec) -> Self {
        PlannerEntry {
            label: None,
            planner,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.planner.kind_name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    /// Scenario JSON files, relative to the plan file.
    pub scenarios: Vec<PathBuf>,
    /// Explicit seeds; if absent, `num_seeds` consecutive seeds from `base_seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_seeds: Option<usize>,
    /// Shared by all planners; the seed field is replaced per run.
    #[serde(default)]
    pub params: PlannerParams,
    #[serde(default)]
    pub metric: MetricSettings,
    pub planners: Vec<PlannerEntry>,
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plan serializes")
    }

    pub fn load(path: &FsPath) -> Result<Self, BenchError> {
        Self::from_toml(&read_file(path)?)
    }

    pub fn resolved_seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => {
                let base = self.base_seed.unwrap_or(0);
                (0..self.num_seeds.unwrap_or(DEFAULT_NUM_SEEDS) as u64)
                    .map(|i| base + i)
                    .collect()
            }
        }
    }

    /// Checks every axis and loads the scenarios, before any run starts.
    pub fn validate(&self, base_dir: &FsPath) -> Result<Vec<BenchmarkScenario>, BenchError> {
        let config = |m: String| Err(BenchError::Config(m));
        if self.scenarios.is_empty() {
            return config("plan lists no scenarios".into());
        }
        if self.planners.is_empty() {
            return config("plan lists no planners".into());
        }
        let seeds = self.resolved_seeds();
        if seeds.is_empty() {
            return config("plan has no seeds".into());
        }
        if seeds.iter().any(|s| *s > i64::MAX as u64) {
            return config("seeds must not exceed 2^63 - 1".into());
        }
        if seeds.iter().collect::<HashSet<_>>().len() != seeds.len() {
            return config("duplicate seed".into());
        }
        self.params
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))?;
        self.metric
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))?;
        let mut labels = HashSet::new();
        for p in &self.planners {
            if !labels.insert(p.label().to_string()) {
                return config(format!("duplicate planner label {:?}", p.label()));
            }
            if p.label().contains("__") || p.label().contains(['/', '\\', ',']) {
                return config(format!(
                    "planner label {:?} is not file-name safe",
                    p.label()
                ));
            }
        }
        let mut scenarios = Vec::new();
        let mut names = HashSet::new();
        for rel in &self.scenarios {
            let path = base_dir.join(rel);
            if !path.is_file() {
                return config(format!("scenario file {} does not exist", path.display()));
            }
            let s = load_environment(&path)?;
            if !names.insert(s.name.clone()) {
                return config(format!("duplicate scenario name {:?}", s.name));
            }
            scenarios.push(s);
        }
        Ok(scenarios)
    }
}

/// Outcome of one (planner, scenario, seed) run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub planner: String,
    pub scenario: String,
    pub seed: u64,
    pub success: bool,
    pub iterations: usize,
    pub fallback: bool,
    pub error: Option<String>,
    pub se_tree: Option<f64>,
    pub se_expansion: Option<f64>,
    pub params_digest: String,
    pub log: SampleLog,
    pub path: Option<Path>,
}

fn params_digest(
    entry: &PlannerEntry,
    params: &PlannerParams,
    metric: &MetricSettings,
    scenario: &str,
) -> String {
    let canonical = serde_json::json!({
        "planner": entry.planner,
        "params": params,
        "metric": metric,
        "scenario": scenario,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    hex::encode(digest)[..16].to_string()
}

/// Runs one planner on one scenario and evaluates both sample kinds against
/// the run's own path.
pub fn run_single(
    entry: &PlannerEntry,
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
    metric: &MetricSettings,
) -> RunOutput {
    let digest = params_digest(entry, params, metric, &scenario_to_string(scenario));
    let mut out = RunOutput {
        planner: entry.label().to_string(),
        scenario: scenario.name.clone(),
        seed: params.seed,
        success: false,
        iterations: 0,
        fallback: false,
        error: None,
        se_tree: None,
        se_expansion: None,
        params_digest: digest,
        log: SampleLog::default(),
        path: None,
    };
    let result = match entry.planner.plan(scenario, params) {
        Ok(r) => r,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.success = result.success;
    out.iterations = result.iterations_used;
    out.fallback = result.fallback;
    if let Some(path) = &result.path {
        let bounds = scenario.environment.bounds;
        let eval = |kind| {
            let samples: Vec<Configuration> = result.log.of_kind(kind).copied().collect();
            if samples.is_empty() {
                return Ok(None);
            }
            metric.efficiency(path, &samples, bounds).map(Some)
        };
        match (eval(SampleKind::Tree), eval(SampleKind::Expansion)) {
            (Ok(t), Ok(e)) => {
                out.se_tree = t;
                out.se_expansion = e;
            }
            (Err(e), _) | (_, Err(e)) => out.error = Some(e.to_string()),
        }
    }
    out.log = result.log;
    out.path = result.path;
    out
}

fn run_file_stem(planner: &str, scenario: &str, seed: u64) -> String {
    format!("{planner}__{scenario}__{seed}")
}

pub const RESULTS_HEADER: &str =
    "planner,scenario,seed,kind,SE_nats,success,iterations,params_digest";

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub planner: String,
    pub scenario: String,
    pub seed: u64,
    pub kind: SampleKind,
    pub se_nats: Option<f64>,
    pub success: bool,
    pub iterations: usize,
    pub params_digest: String,
}

impl ResultRow {
    fn to_line(&self) -> String {
        let se = self
            .se_nats
            .map_or_else(|| "NA".to_string(), |v| format!("{v}"));
        format!(
            "{},{},{},{},{},{},{},{}",
            self.planner,
            self.scenario,
            self.seed,
            self.kind.as_str(),
            se,
            self.success,
            self.iterations,
            self.params_digest
        )
    }
}

pub fn rows_of(run: &RunOutput) -> [ResultRow; 2] {
    [SampleKind::Tree, SampleKind::Expansion].map(|kind| ResultRow {
        planner: run.planner.clone(),
        scenario: run.scenario.clone(),
        seed: run.seed,
        kind,
        se_nats: match kind {
            SampleKind::Tree => run.se_tree,
            SampleKind::Expansion => run.se_expansion,
        },
        success: run.success,
        iterations: run.iterations,
        params_digest: run.params_digest.clone(),
    })
}

pub fn results_to_csv(rows: &[ResultRow]) -> String {
    let mut s = format!("{RESULTS_HEADER}\n");
    for r in rows {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

pub fn parse_results(text: &str) -> Result<Vec<ResultRow>, String> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line == RESULTS_HEADER {
            continue;
        }
        let bad = |what: &str| format!("line {}: bad {what}", n + 1);
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad("field count"));
        }
        rows.push(ResultRow {
            planner: f[0].to_string(),
            scenario: f[1].to_string(),
            seed: f[2].parse().map_err(|_| bad("seed"))?,
            kind: SampleKind::parse(f[3]).ok_or_else(|| bad("kind"))?,
            se_nats: match f[4] {
                "NA" => None,
                v => Some(v.parse().map_err(|_| bad("SE_nats"))?),
            },
            success: f[5].parse().map_err(|_| bad("success"))?,
            iterations: f[6].parse().map_err(|_| bad("iterations"))?,
            params_digest: f[7].to_string(),
        });
    }
    Ok(rows)
}

/// Mean and sd over seeds for one (planner, scenario, kind) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCell {
    pub planner: String,
    pub scenario: String,
    pub kind: SampleKind,
    pub runs: usize,
    pub successes: usize,
    /// `None` when no run produced a value (failures or no samples).
    pub se: Option<Aggregate>,
    pub pooled: Option<f64>,
}

/// Groups rows in order of first appearance.
pub fn aggregate_rows(rows: &[ResultRow]) -> Vec<AggregateCell> {
    let mut order: Vec<(String, String, SampleKind)> = Vec::new();
    let mut groups: BTreeMap<(String, String, SampleKind), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        let key = (r.planner.clone(), r.scenario.clone(), r.kind);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let values: Vec<f64> = g.iter().filter_map(|r| r.se_nats).collect();
            AggregateCell {
                planner: key.0,
                scenario: key.1,
                kind: key.2,
                runs: g.len(),
                successes: g.iter().filter(|r| r.success).count(),
                se: aggregate_over_seeds(&values),
                pooled: None,
            }
        })
        .collect()
}

pub fn aggregate_to_csv(cells: &[AggregateCell]) -> String {
    let pooled = cells.iter().any(|c| c.pooled.is_some());
    let mut s = String::from("planner,scenario,kind,n,mean,sd,runs,successes");
    if pooled {
        s.push_str(",pooled_SE");
    }
    s.push('\n');
    for c in cells {
        let (n, mean, sd) = match c.se {
            Some(a) => (a.n.to_string(), format!("{}", a.mean), format!("{}", a.sd)),
            None => ("0".into(), "NA".into(), "NA".into()),
        };
        let _ = write!(
            s,
            "{},{},{},{n},{mean},{sd},{},{}",
            c.planner,
            c.scenario,
            c.kind.as_str(),
            c.runs,
            c.successes
        );
        if pooled {
            let _ = write!(
                s,
                ",{}",
                c.pooled.map_or_else(|| "NA".into(), |v| format!("{v}"))
            );
        }
        s.push('\n');
    }
    s
}

fn fmt_cell(a: &Option<Aggregate>) -> String {
    match a {
        Some(a) => format!("{:.3} ± {:.3}", a.mean, a.sd),
        None => "NA".into(),
    }
}

/// Planner × scenario grid; each cell reads `tree mean ± sd / expansion mean ± sd`.
pub fn make_table(rows: &[ResultRow]) -> String {
    let cells = aggregate_rows(rows);
    let mut planners: Vec<&str> = Vec::new();
    let mut scenarios: Vec<&str> = Vec::new();
    for c in &cells {
        if !planners.contains(&c.planner.as_str()) {
            planners.push(&c.planner);
        }
        if !scenarios.contains(&c.scenario.as_str()) {
            scenarios.push(&c.scenario);
        }
    }
    let find = |p: &str, s: &str, k: SampleKind| {
        cells
            .iter()
            .find(|c| c.planner == p && c.scenario == s && c.kind == k)
            .and_then(|c| c.se)
    };
    let mut out = String::from("planner");
    for s in &scenarios {
        let _ = write!(out, ",{s}");
    }
    out.push('\n');
    for p in &planners {
        out.push_str(p);
        for s in &scenarios {
            let _ = write!(
                out,
                ",{} / {}",
                fmt_cell(&find(p, s, SampleKind::Tree)),
                fmt_cell(&find(p, s, SampleKind::Expansion))
            );
        }
        out.push('\n');
    }
    out
}

/// Everything [`run`] produced, in matrix order.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub runs: Vec<RunOutput>,
    pub rows: Vec<ResultRow>,
    pub aggregate: Vec<AggregateCell>,
}

pub fn run(
    plan: &ExperimentPlan,
    base_dir: &FsPath,
    out_dir: &FsPath,
    workers: usize,
) -> Result<RunSummary, BenchError> {
    let scenarios = plan.validate(base_dir)?;
    let seeds = plan.resolved_seeds();
    if workers == 0 {
        return Err(BenchError::Config("worker count must be positive".into()));
    }

    let mut jobs = Vec::new();
    for entry in &plan.planners {
        for s in &scenarios {
            for &seed in &seeds {
                jobs.push((entry, s, seed));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let runs: Vec<RunOutput> = pool.install(|| {
        jobs.par_iter()
            .map(|(entry, s, seed)| {
                run_single(entry, s, &plan.params.with_seed(*seed), &plan.metric)
            })
            .collect()
    });

    // single collector
    for dir in ["logs", "paths", "scenarios"] {
        let d = out_dir.join(dir);
        fs::create_dir_all(&d).map_err(io_err(&d))?;
    }
    let mut manifest = plan.clone();
    manifest.seeds = Some(seeds.clone());
    manifest.base_seed = None;
    manifest.num_seeds = None;
    manifest.scenarios = Vec::new();
    for s in &scenarios {
        let rel = PathBuf::from("scenarios").join(format!("{}.json", s.name));
        write_file(&out_dir.join(&rel), &scenario_to_string(s))?;
        manifest.scenarios.push(rel);
    }
    for r in &runs {
        let stem = run_file_stem(&r.planner, &r.scenario, r.seed);
        let mut buf = Vec::new();
        r.log
            .write_records(&mut buf, &r.planner, &r.scenario, r.seed)
            .expect("writing to memory");
        let log_path = out_dir.join("logs").join(format!("{stem}.csv"));
        fs::write(&log_path, buf).map_err(io_err(&log_path))?;
        if let Some(p) = &r.path {
            let json = serde_json::to_string(p).expect("path serializes");
            write_file(&out_dir.join("paths").join(format!("{stem}.json")), &json)?;
        }
    }
    let rows: Vec<ResultRow> = runs.iter().flat_map(rows_of).collect();
    write_file(&out_dir.join("results.csv"), &results_to_csv(&rows))?;

    let mut aggregate = aggregate_rows(&rows);
    if plan.metric.pooled {
        for cell in &mut aggregate {
            let group: Vec<(Path, Vec<Configuration>)> = runs
                .iter()
                .filter(|r| r.planner == cell.planner && r.scenario == cell.scenario)
                .filter_map(|r| {
                    Some((
                        r.path.clone()?,
                        r.log.of_kind(cell.kind).copied().collect::<Vec<_>>(),
                    ))
                })
                .filter(|(_, s)| !s.is_empty())
                .collect();
            let bounds = scenarios
                .iter()
                .find(|s| s.name == cell.scenario)
                .expect("scenario of a run")
                .environment
                .bounds;
            let m = &plan.metric;
            if !group.is_empty() {
                let grid = m.grid(bounds).expect("validated");
                cell.pooled = pooled_sampling_efficiency(
                    &group,
                    m.delta,
                    &grid,
                    m.lambda,
                    m.mc_samples,
                    m.seed,
                )
                .ok();
            }
        }
    }
    write_file(
        &out_dir.join("aggregate.csv"),
        &aggregate_to_csv(&aggregate),
    )?;
    write_file(&out_dir.join("table.csv"), &make_table(&rows))?;
    write_file(&out_dir.join("manifest.toml"), &manifest.to_toml())?;
    Ok(RunSummary {
        runs,
        rows,
        aggregate,
    })
}

/// Reads `results.csv` from a run directory and writes the table.
pub fn table_from_dir(results_dir: &FsPath, out: &FsPath) -> Result<String, BenchError> {
    let path = results_dir.join("results.csv");
    let rows = parse_results(&read_file(&path)?)
        .map_err(|message| BenchError::Format { path, message })?;
    let table = make_table(&rows);
    write_file(out, &table)?;
    Ok(table)
}

/// Samples and guide paths to draw over a scenario.
#[derive(Debug, Clone, Default)]
pub struct RenderLayers {
    pub tree: Vec<Configuration>,
    pub expansion: Vec<Configuration>,
    pub baseline: Vec<Configuration>,
    pub paths: Vec<Path>,
}

const SVG_SCALE: f64 = 60.0;

fn xy_counts(samples: &[Configuration], grid: &GridSpec) -> Vec<usize> {
    let mut c = vec![0; grid.x_bins * grid.y_bins];
    for q in samples {
        if let Some(i) = grid.cell_index(q) {
            c[i % (grid.x_bins * grid.y_bins)] += 1;
        }
    }
    c
}

/// Circle radius for a cell holding `count` of at most `max` samples.
pub fn circle_radius(count: usize, max: usize, cell_px: f64) -> f64 {
    if count == 0 || max == 0 {
        return 0.0;
    }
    0.5 * cell_px * (count as f64 / max as f64).sqrt()
}

/// Workspace render with θ marginalized: obstacles, tube cells (red), and one
/// circle per grid cell for tree (blue), expansion (purple) and baseline
/// (green) samples.
pub fn render_svg(
    scenario: &BenchmarkScenario,
    layers: &RenderLayers,
    grid: &GridSpec,
    delta: f64,
) -> String {
    let b = scenario.environment.bounds;
    let (w, h) = (b.width() * SVG_SCALE, b.height() * SVG_SCALE);
    let px = |x: f64, y: f64| ((x - b.min.x) * SVG_SCALE, (b.max.y - y) * SVG_SCALE);
    let cw = b.width() / grid.x_bins as f64;
    let ch = b.height() / grid.y_bins as f64;
    let cell_px = cw.min(ch) * SVG_SCALE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{w:.1}" height="{h:.1}" fill="white" stroke="black"/>"#
    );

    let _ = writeln!(s, r#"<g id="tube" fill="red" fill-opacity="0.25">"#);
    if !layers.paths.is_empty() {
        let points: Vec<Configuration> =
            layers.paths.iter().flat_map(|p| p.densify(0.05)).collect();
        for iy in 0..grid.y_bins {
            for ix in 0..grid.x_bins {
                let (cx, cy) = grid.xy_center(ix, iy);
                let c = crate::geometry::Vec2::new(cx, cy);
                if points.iter().any(|p| p.position().dist(c) < delta) {
                    let (x, y) = px(cx - cw / 2.0, cy + ch / 2.0);
                    let _ = writeln!(
                        s,
                        r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}"/>"#,
                        cw * SVG_SCALE,
                        ch * SVG_SCALE
                    );
                }
            }
        }
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, r#"<g id="obstacles" fill="dimgray">"#);
    for o in &scenario.environment.obstacles {
        let pts: Vec<String> = o
            .polygon
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = px(v.x, v.y);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n");

    for (id, color, samples) in [
        ("baseline", "green", &layers.baseline),
        ("expansion", "purple", &layers.expansion),
        ("tree", "blue", &layers.tree),
    ] {
        let counts = xy_counts(samples, grid);
        let max = counts.iter().copied().max().unwrap_or(0);
        let _ = writeln!(s, r#"<g id="{id}" fill="{color}" fill-opacity="0.6">"#);
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (cx, cy) = grid.xy_center(i % grid.x_bins, i / grid.x_bins);
            let (x, y) = px(cx, cy);
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.3}"/>"#,
                circle_radius(c, max, cell_px)
            );
        }
        s.push_str("</g>\n");
    }
    for (q, color) in [(&scenario.start, "black"), (&scenario.goal, "orange")] {
        let (x, y) = px(q.x, q.y);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="{color}" stroke-width="2"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Counts of what [`render_from_dir`] drew.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderStats {
    pub runs: usize,
    pub tree: usize,
    pub expansion: usize,
    pub baseline: usize,
}

fn read_logs(
    dir: &FsPath,
    planner: &str,
    scenario: &str,
) -> Result<Vec<Vec<LogRecord>>, BenchError> {
    let prefix = format!("{planner}__{scenario}__");
    let mut names: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with(&prefix) && n.ends_with(".csv"))
        })
        .collect();
    names.sort();
    names
        .iter()
        .map(|p| {
            let f = fs::File::open(p).map_err(io_err(p))?;
            SampleLog::read_records(&mut std::io::BufReader::new(f)).map_err(|e| {
                BenchError::Format {
                    path: p.clone(),
                    message: e.to_string(),
                }
            })
        })
        .collect()
}

/// Renders every seed of `planner` on `scenario` found under `run_dir`
/// (a run output directory or its `logs/` subdirectory), optionally with a
/// baseline planner's tree samples.
pub fn render_from_dir(
    scenario: &BenchmarkScenario,
    run_dir: &FsPath,
    planner: &str,
    baseline: Option<&str>,
    metric: &MetricSettings,
    out: &FsPath,
) -> Result<RenderStats, BenchError> {
    let logs_dir = if run_dir.join("logs").is_dir() {
        run_dir.join("logs")
    } else {
        run_dir.to_path_buf()
    };
    let paths_dir = logs_dir.parent().map(|p| p.join("paths"));
    let runs = read_logs(&logs_dir, planner, &scenario.name)?;
    if runs.is_empty() {
        return Err(BenchError::Config(format!(
            "no logs for planner {planner:?} on scenario {:?} in {}",
            scenario.name,
            logs_dir.display()
        )));
    }
    let mut layers = RenderLayers::default();
    for recs in &runs {
        for r in recs {
            match r.entry.kind {
                SampleKind::Tree => layers.tree.push(r.entry.config),
                SampleKind::Expansion => layers.expansion.push(r.entry.config),
            }
        }
    }
    if let Some(b) = baseline {
        for recs in read_logs(&logs_dir, b, &scenario.name)? {
            layers.baseline.extend(
                recs.iter()
                    .filter(|r| r.entry.kind == SampleKind::Tree)
                    .map(|r| r.entry.config),
            );
        }
    }
    if let Some(pd) = paths_dir.filter(|p| p.is_dir()) {
        let prefix = format!("{planner}__{}__", scenario.name);
        let mut files: Vec<PathBuf> = fs::read_dir(&pd)
            .map_err(io_err(&pd))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with(&prefix))
            })
            .collect();
        files.sort();
        for f in files {
            let path: Path =
                serde_json::from_str(&read_file(&f)?).map_err(|e| BenchError::Format {
                    path: f.clone(),
                    message: e.to_string(),
                })?;
            layers.paths.push(path);
        }
    }
    let grid = metric
        .grid(scenario.environment.bounds)
        .map_err(|e| BenchError::Config(e.to_string()))?;
    write_file(out, &render_svg(scenario, &layers, &grid, metric.delta))?;
    Ok(RenderStats {
        runs: runs.len(),
        tree: layers.tree.len(),
        expansion: layers.expansion.len(),
        baseline: layers.baseline.len(),
    })
}

/// The default plan: every planner on the three canonical scenarios over 15
/// seeds, with scenario paths relative to the plan's directory.
pub fn default_plan(scenario_files: Vec<PathBuf>) -> ExperimentPlan {
    ExperimentPlan {
        scenarios: scenario_files,
        seeds: None,
        base_seed: Some(0),
        num_seeds: Some(DEFAULT_NUM_SEEDS),
        params: PlannerParams::default(),
        metric: MetricSettings::default(),
        planners: PlannerSpec::default_all()
            .into_iter()
            .map(PlannerEntry::new)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{build_simple_passage, save_environment};

    #[test]
    fn planner_spec_toml() {
        let plan = ExperimentPlan::from_toml(
            r#"
            scenarios = ["a.json"]
            num_seeds = 3
            [[planners]]
            planner = { kind = "rrt" }
            [[planners]]
            label = "wide"
            planner = { kind = "drrrt", region_radius = 2.0 }
            [[planners]]
            planner = { kind = "lazyprm" }
            "#,
        )
        .unwrap();
        assert_eq!(plan.resolved_seeds(), vec![0, 1, 2]);
        assert_eq!(plan.planners[1].label(), "wide");
        assert_eq!(
            plan.planners[1].planner,
            PlannerSpec::Drrrt { region_radius: 2.0 }
        );
        assert_eq!(
            plan.planners[2].planner,
            PlannerSpec::Lazyprm {
                roadmap_size: DEFAULT_ROADMAP_SIZE,
                k_neighbors: DEFAULT_K_NEIGHBORS,
                enhancement_nodes: DEFAULT_ENHANCEMENT_NODES,
            }
        );
        let back = ExperimentPlan::from_toml(&plan.to_toml()).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn unknown_planner_is_config_error() {
        let err = ExperimentPlan::from_toml(
            r#"
            scenarios = ["a.json"]
            [[planners]]
            planner = { kind = "prm_star" }
            "#,
        )
        .unwrap_err();
        assert!(err.is_config());
    }

    #[test]
    fn validation_catches_bad_axes() {
        let dir = tempfile::tempdir().unwrap();
        save_environment(&build_simple_passage(), &dir.path().join("sp.json")).unwrap();
        let mut plan = default_plan(vec!["sp.json".into()]);
        assert!(plan.validate(dir.path()).is_ok());
        plan.scenarios.push("missing.json".into());
        assert!(plan.validate(dir.path()).unwrap_err().is_config());
        plan.scenarios = vec!["sp.json".into(), "sp.json".into()];
        assert!(plan.validate(dir.path()).unwrap_err().is_config());
        plan.scenarios = vec!["sp.json".into()];
        plan.seeds = Some(vec![]);
        assert!(plan.validate(dir.path()).unwrap_err().is_config());
        plan.seeds = Some(vec![1, 1]);
        assert!(plan.validate(dir.path()).unwrap_err().is_config());
        plan.seeds = None;
        plan.planners.push(PlannerEntry::new(PlannerSpec::Rrt));
        assert!(plan.validate(dir.path()).unwrap_err().is_config());
    }

    fn row(
        planner: &str,
        scenario: &str,
        seed: u64,
        kind: SampleKind,
        se: Option<f64>,
    ) -> ResultRow {
        ResultRow {
            planner: planner.into(),
            scenario: scenario.into(),
            seed,
            kind,
            se_nats: se,
            success: se.is_some() || kind == SampleKind::Expansion,
            iterations: 10,
            params_digest: "00".into(),
        }
    }

    #[test]
    fn table_layout_and_na() {
        let mut rows = Vec::new();
        for (p, exp) in [("rrt", true), ("lazyprm", false)] {
            for s in ["a", "b", "c"] {
                for seed in 0..3 {
                    rows.push(row(p, s, seed, SampleKind::Tree, Some(1.0 + seed as f64)));
                    rows.push(row(p, s, seed, SampleKind::Expansion, exp.then_some(2.0)));
                }
            }
        }
        let t = make_table(&rows);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "planner,a,b,c");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("rrt,2.000 ± 1.000 / 2.000 ± 0.000"));
        assert_eq!(
            lines[2]
                .split(',')
                .skip(1)
                .filter(|c| c.ends_with("/ NA"))
                .count(),
            3
        );
    }

    #[test]
    fn results_round_trip() {
        let rows = vec![
            row("rrt", "a", 1, SampleKind::Tree, Some(0.1 + 0.2)),
            row("rrt", "a", 1, SampleKind::Expansion, None),
        ];
        assert_eq!(parse_results(&results_to_csv(&rows)).unwrap(), rows);
        assert!(parse_results("rrt,a,1,tree").is_err());
    }

    #[test]
    fn aggregate_matches_direct_computation() {
        let rows: Vec<ResultRow> = [0.5, 1.5, 4.0]
            .iter()
            .enumerate()
            .map(|(i, v)| row("rrt", "a", i as u64, SampleKind::Tree, Some(*v)))
            .collect();
        let cells = aggregate_rows(&rows);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].se, aggregate_over_seeds(&[0.5, 1.5, 4.0]));
    }

    #[test]
    fn circle_radius_is_monotone() {
        let mut last = 0.0;
        for c in 0..50 {
            let r = circle_radius(c, 49, 12.0);
            assert!(r >= last);
            last = r;
        }
        assert_eq!(circle_radius(49, 49, 12.0), 6.0);
    }

    #[test]
    fn empty_layers_render_obstacles_only() {
        let s = build_simple_passage();
        let grid = GridSpec::with_defaults(s.environment.bounds);
        let svg = render_svg(&s, &RenderLayers::default(), &grid, 0.5);
        assert_eq!(
            svg.matches("<polygon").count(),
            s.environment.obstacles.len()
        );
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(!svg.contains("<rect x="));
    }

    #[test]
    fn digest_depends_on_parameters() {
        let e = PlannerEntry::new(PlannerSpec::Rrt);
        let m = MetricSettings::default();
        let a = params_digest(&e, &PlannerParams::default(), &m, "s");
        let b = params_digest(&e, &PlannerParams::default().with_seed(1), &m, "s");
        assert_eq!(a.len(), 16);
        assert_ne!(a, b);
        assert_eq!(a, params_digest(&e, &PlannerParams::default(), &m, "s"));
    }
}
