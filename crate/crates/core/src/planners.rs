//! RRT, DR-RRT, LazyPRM and IRC.
//!
//! Every planner returns a [`PlanResult`] whose [`SampleLog`] separates tree
//! samples (states added to the search structure) from expansion samples
//! (targets the tree is steered toward). All randomness comes from a
//! `ChaCha8Rng` seeded with [`PlannerParams::seed`], so a run is a pure
//! function of its inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::{BufRead, Write};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environments::BenchmarkScenario;
use crate::geometry::{
    config_distance, distance_sq, edge_points, is_edge_free, is_free, lerp, Configuration,
    Environment, Path, Robot, EDGE_RESOLUTION,
};
use crate::guidance::{
    compute_skeleton, null_guidance, shrink_robot, skeleton_region_guidance, tube_guidance,
    uniform_angle, GuidePoint, GuidingSpace, Sampler,
};

pub const DEFAULT_REGION_RADIUS: f64 = 1.0;
pub const DEFAULT_ROADMAP_SIZE: usize = 2000;
pub const DEFAULT_K_NEIGHBORS: usize = 10;
/// LazyPRM nodes added around broken edges each time the roadmap disconnects.
pub const DEFAULT_ENHANCEMENT_NODES: usize = 50;
pub const DEFAULT_SHRINK_FACTOR: f64 = 0.5;
pub const DEFAULT_UNIFORM_MIX: f64 = 0.1;
/// Raster cell of the workspace skeleton used by DR-RRT.
pub const SKELETON_CELL: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error("{0} configuration is in collision")]
    InvalidQuery(&'static str),
    #[error("invalid planner parameter: {0}")]
    InvalidParams(String),
    #[error("planner not applicable: {0}")]
    Inapplicable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerParams {
    pub step: f64,
    pub goal_bias: f64,
    pub max_iterations: usize,
    pub goal_tolerance: f64,
    pub edge_resolution: f64,
    pub seed: u64,
}

impl Default for PlannerParams {
    fn default() -> Self {
        PlannerParams {
            step: 0.5,
            goal_bias: 0.05,
            max_iterations: 50_000,
            goal_tolerance: 0.25,
            edge_resolution: EDGE_RESOLUTION,
            seed: 0,
        }
    }
}

impl PlannerParams {
    pub fn with_seed(self, seed: u64) -> Self {
        PlannerParams { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), PlannerError> {
        let bad = |what: &str| Err(PlannerError::InvalidParams(what.to_string()));
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad("step must be positive");
        }
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return bad("goal_bias must lie in [0, 1]");
        }
        if !(self.goal_tolerance >= 0.0) {
            return bad("goal_tolerance must be nonnegative");
        }
        if !(self.edge_resolution > 0.0) {
            return bad("edge_resolution must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Tree,
    Expansion,
}

impl SampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleKind::Tree => "tree",
            SampleKind::Expansion => "expansion",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tree" => Some(SampleKind::Tree),
            "expansion" => Some(SampleKind::Expansion),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEntry {
    pub config: Configuration,
    pub kind: SampleKind,
    pub iteration: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleLog {
    pub entries: Vec<LogEntry>,
}

pub const LOG_HEADER: &str = "planner,scenario,seed,iteration,kind,x,y,theta";

/// One parsed line of a serialized log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub planner: String,
    pub scenario: String,
    pub seed: u64,
    pub entry: LogEntry,
}

#[derive(Debug, Error)]
pub enum LogFormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl SampleLog {
    pub fn push(&mut self, config: Configuration, kind: SampleKind, iteration: usize) {
        self.entries.push(LogEntry {
            config,
            kind,
            iteration,
        });
    }

    pub fn of_kind(&self, kind: SampleKind) -> impl Iterator<Item = &Configuration> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.kind == kind)
            .map(|e| &e.config)
    }

    pub fn tree(&self) -> Vec<Configuration> {
        self.of_kind(SampleKind::Tree).copied().collect()
    }

    pub fn expansion(&self) -> Vec<Configuration> {
        self.of_kind(SampleKind::Expansion).copied().collect()
    }

    pub fn count(&self, kind: SampleKind) -> usize {
        self.of_kind(kind).count()
    }

    /// Writes a header line and one comma-separated record per entry.
    /// Coordinates carry 13 significant digits.
    pub fn write_records(
        &self,
        w: &mut dyn Write,
        planner: &str,
        scenario: &str,
        seed: u64,
    ) -> std::io::Result<()> {
        writeln!(w, "{LOG_HEADER}")?;
        for e in &self.entries {
            writeln!(
                w,
                "{planner},{scenario},{seed},{},{},{:.12e},{:.12e},{:.12e}",
                e.iteration,
                e.kind.as_str(),
                e.config.x,
                e.config.y,
                e.config.theta
            )?;
        }
        Ok(())
    }

    pub fn read_records(r: &mut dyn BufRead) -> Result<Vec<LogRecord>, LogFormatError> {
        let mut out = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == LOG_HEADER {
                continue;
            }
            let err = |message: &str| LogFormatError::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(err("expected 8 fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| err("bad number"));
            let entry = LogEntry {
                iteration: f[3].parse().map_err(|_| err("bad iteration"))?,
                kind: SampleKind::parse(f[4]).ok_or_else(|| err("bad kind"))?,
                config: Configuration::new(num(f[5])?, num(f[6])?, num(f[7])?),
            };
            out.push(LogRecord {
                planner: f[0].to_string(),
                scenario: f[1].to_string(),
                seed: f[2].parse().map_err(|_| err("bad seed"))?,
                entry,
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeNode {
    pub config: Configuration,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub path: Option<Path>,
    pub log: SampleLog,
    pub iterations_used: usize,
    pub success: bool,
    /// Search tree of the logged stage (empty for LazyPRM).
    pub tree: Vec<TreeNode>,
    /// IRC only: the shrunken-robot stage failed and plain RRT was used.
    pub fallback: bool,
    /// IRC only: log of the shrunken-robot stage.
    pub debug_log: Option<SampleLog>,
}

fn check_query(scenario: &BenchmarkScenario, params: &PlannerParams) -> Result<(), PlannerError> {
    params.validate()?;
    let env = &scenario.environment;
    if !is_free(&scenario.start, env, &scenario.robot) {
        return Err(PlannerError::InvalidQuery("start"));
    }
    if !is_free(&scenario.goal, env, &scenario.robot) {
        return Err(PlannerError::InvalidQuery("goal"));
    }
    Ok(())
}

struct Grown {
    path: Option<Path>,
    iterations: usize,
    tree: Vec<TreeNode>,
}

/// The RRT loop shared by every tree planner; `sampler` supplies the
/// non-goal expansion targets.
fn grow_tree(
    env: &Environment,
    robot: &Robot,
    start: Configuration,
    goal: Configuration,
    params: &PlannerParams,
    sampler: &mut dyn Sampler,
    rng: &mut dyn RngCore,
    log: &mut SampleLog,
) -> Grown {
    let mut tree = vec![TreeNode {
        config: start,
        parent: None,
    }];
    log.push(start, SampleKind::Tree, 0);
    for it in 1..=params.max_iterations {
        let target = if rng.gen::<f64>() < params.goal_bias {
            goal
        } else {
            sampler.sample(rng)
        };
        log.push(target, SampleKind::Expansion, it);

        let (near, d2) = tree
            .iter()
            .enumerate()
            .map(|(i, n)| (i, distance_sq(&n.config, &target)))
            .fold(
                (0, f64::INFINITY),
                |best, c| if c.1 < best.1 { c } else { best },
            );
        let d = d2.sqrt();
        if d == 0.0 {
            continue;
        }
        let from = tree[near].config;
        let new = if d <= params.step {
            target
        } else {
            lerp(&from, &target, params.step / d)
        };
        if !is_free(&new, env, robot)
            || !is_edge_free(&from, &new, env, robot, params.edge_resolution)
        {
            continue;
        }
        tree.push(TreeNode {
            config: new,
            parent: Some(near),
        });
        log.push(new, SampleKind::Tree, it);
        sampler.observe(&new);

        if config_distance(&new, &goal) <= params.goal_tolerance {
            let mut waypoints = Vec::new();
            let mut cur = Some(tree.len() - 1);
            while let Some(i) = cur {
                waypoints.push(tree[i].config);
                cur = tree[i].parent;
            }
            waypoints.reverse();
            return Grown {
                path: Path::new(waypoints).ok(),
                iterations: it,
                tree,
            };
        }
    }
    Grown {
        path: None,
        iterations: params.max_iterations,
        tree,
    }
}

/// Plans with any guiding space: projects the query once and grows an RRT
/// whose expansion targets come from the resulting heuristic.
pub fn guided_rrt(
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
    guidance: &dyn GuidingSpace,
    rng: &mut dyn RngCore,
) -> Result<PlanResult, PlannerError> {
    check_query(scenario, params)?;
    let mut sampler = guidance.heuristic(
        &guidance.project(&scenario.start),
        &guidance.project(&scenario.goal),
    );
    let mut log = SampleLog::default();
    let g = grow_tree(
        &scenario.environment,
        &scenario.robot,
        scenario.start,
        scenario.goal,
        params,
        sampler.as_mut(),
        rng,
        &mut log,
    );
    Ok(PlanResult {
        success: g.path.is_some(),
        path: g.path,
        log,
        iterations_used: g.iterations,
        tree: g.tree,
        fallback: false,
        debug_log: None,
    })
}

pub fn rrt_plan(
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
) -> Result<PlanResult, PlannerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    guided_rrt(
        scenario,
        params,
        &null_guidance(scenario.environment.bounds),
        &mut rng,
    )
}

pub fn drrrt_plan(
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
    region_radius: f64,
) -> Result<PlanResult, PlannerError> {
    if !(region_radius > 0.0) {
        return Err(PlannerError::InvalidParams(
            "region_radius must be positive".into(),
        ));
    }
    check_query(scenario, params)?;
    let skeleton = compute_skeleton(&scenario.environment, SKELETON_CELL);
    let guidance = skeleton_region_guidance(skeleton, region_radius, scenario.environment.bounds)
        .map_err(|e| PlannerError::Inapplicable(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    guided_rrt(scenario, params, &guidance, &mut rng)
}

pub fn irc_plan(
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
    shrink_factor: f64,
    uniform_mix: f64,
) -> Result<PlanResult, PlannerError> {
    check_query(scenario, params)?;
    let small = shrink_robot(&scenario.robot, shrink_factor)
        .map_err(|e| PlannerError::InvalidParams(e.to_string()))?;
    if !(0.0..=1.0).contains(&uniform_mix) {
        return Err(PlannerError::InvalidParams(
            "uniform_mix must lie in [0, 1]".into(),
        ));
    }
    let bounds = scenario.environment.bounds;
    // both stages draw from one stream
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut debug = SampleLog::default();
    let plain = null_guidance(bounds);
    let mut uniform = plain.heuristic(&GuidePoint::Unit, &GuidePoint::Unit);
    let relaxed = grow_tree(
        &scenario.environment,
        &small,
        scenario.start,
        scenario.goal,
        params,
        uniform.as_mut(),
        &mut rng,
        &mut debug,
    );
    let stage1 = relaxed.iterations;

    let mut result = match relaxed.path {
        Some(guide) => {
            let guidance = tube_guidance(&guide, params.step, uniform_mix, bounds)
                .map_err(|e| PlannerError::InvalidParams(e.to_string()))?;
            guided_rrt(scenario, params, &guidance, &mut rng)?
        }
        None => {
            let mut r = guided_rrt(scenario, params, &null_guidance(bounds), &mut rng)?;
            r.fallback = true;
            r
        }
    };
    result.iterations_used += stage1;
    result.debug_log = Some(debug);
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Unknown,
    Valid,
    Invalid,
}

struct HeapItem {
    cost: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.node.cmp(&self.node))
    }
}

struct Roadmap {
    nodes: Vec<Configuration>,
    node_status: Vec<Status>,
    /// (neighbor, edge index)
    adjacency: Vec<Vec<(usize, usize)>>,
    edges: Vec<(usize, usize)>,
    edge_status: Vec<Status>,
}

impl Roadmap {
    fn build(nodes: Vec<Configuration>, k: usize) -> Roadmap {
        let n = nodes.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for i in 0..n {
            let mut order: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (distance_sq(&nodes[i], &nodes[j]), j))
                .collect();
            let k = k.min(order.len());
            if k == 0 {
                continue;
            }
            order.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order.truncate(k);
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (_, j) in order {
                let key = (i.min(j), i.max(j));
                if seen.insert(key) {
                    adjacency[key.0].push((key.1, edges.len()));
                    adjacency[key.1].push((key.0, edges.len()));
                    edges.push(key);
                }
            }
        }
        Roadmap {
            node_status: vec![Status::Unknown; n],
            edge_status: vec![Status::Unknown; edges.len()],
            nodes,
            adjacency,
            edges,
        }
    }

    /// Appends an unvalidated node joined to its `k` nearest existing nodes.
    fn add_node(&mut self, q: Configuration, k: usize) {
        let i = self.nodes.len();
        let mut order: Vec<(f64, usize)> = (0..i)
            .filter(|&j| self.node_status[j] != Status::Invalid)
            .map(|j| (distance_sq(&q, &self.nodes[j]), j))
            .collect();
        let k = k.min(order.len());
        self.nodes.push(q);
        self.node_status.push(Status::Unknown);
        self.adjacency.push(Vec::new());
        if k == 0 {
            return;
        }
        order.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        order.truncate(k);
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, j) in order {
            self.adjacency[j].push((i, self.edges.len()));
            self.adjacency[i].push((j, self.edges.len()));
            self.edges.push((j, i));
            self.edge_status.push(Status::Unknown);
        }
    }

    /// Dijkstra over elements not known to be invalid; returns node and edge
    /// sequences.
    fn shortest_path(&self, from: usize, to: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(HeapItem {
            cost: 0.0,
            node: from,
        });
        while let Some(HeapItem { cost, node }) = heap.pop() {
            if node == to {
                break;
            }
            if cost > dist[node] {
                continue;
            }
            for &(m, e) in &self.adjacency[node] {
                if self.edge_status[e] == Status::Invalid || self.node_status[m] == Status::Invalid
                {
                    continue;
                }
                let c = cost + config_distance(&self.nodes[node], &self.nodes[m]);
                if c < dist[m] {
                    dist[m] = c;
                    prev[m] = Some((node, e));
                    heap.push(HeapItem { cost: c, node: m });
                }
            }
        }
        if !dist[to].is_finite() {
            return None;
        }
        let (mut nodes, mut edges) = (vec![to], Vec::new());
        let mut cur = to;
        while let Some((p, e)) = prev[cur] {
            nodes.push(p);
            edges.push(e);
            cur = p;
        }
        nodes.reverse();
        edges.reverse();
        Some((nodes, edges))
    }
}

/// Lazy PRM. Only configurations examined while validating candidate paths
/// are logged, all as tree samples: roadmap nodes found free and the free
/// interior points of checked edges.
pub fn lazyprm_plan(
    scenario: &BenchmarkScenario,
    params: &PlannerParams,
    roadmap_size: usize,
    k_neighbors: usize,
    enhancement_nodes: usize,
) -> Result<PlanResult, PlannerError> {
    check_query(scenario, params)?;
    if k_neighbors == 0 {
        return Err(PlannerError::InvalidParams(
            "k_neighbors must be positive".into(),
        ));
    }
    let env = &scenario.environment;
    let robot = &scenario.robot;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let uniform = null_guidance(env.bounds);
    let mut sampler = uniform.heuristic(&GuidePoint::Unit, &GuidePoint::Unit);
    let mut nodes = vec![scenario.start, scenario.goal];
    nodes.extend((0..roadmap_size).map(|_| sampler.sample(&mut rng)));
    let mut map = Roadmap::build(nodes, k_neighbors);
    map.node_status[0] = Status::Valid;
    map.node_status[1] = Status::Valid;

    let mut log = SampleLog::default();
    log.push(scenario.start, SampleKind::Tree, 0);
    log.push(scenario.goal, SampleKind::Tree, 0);
    // Places where candidate paths broke; enhancement samples around them.
    let mut seeds: Vec<Configuration> = Vec::new();
    let mut round = 0;
    let failed = |log: SampleLog, round: usize| PlanResult {
        path: None,
        log,
        iterations_used: round,
        success: false,
        tree: Vec::new(),
        fallback: false,
        debug_log: None,
    };
    loop {
        round += 1;
        let Some((path_nodes, path_edges)) = map.shortest_path(0, 1) else {
            if enhancement_nodes == 0 || round >= params.max_iterations {
                return Ok(failed(log, round));
            }
            for _ in 0..enhancement_nodes {
                let q = if seeds.is_empty() {
                    sampler.sample(&mut rng)
                } else {
                    let c = seeds[rng.gen_range(0..seeds.len())];
                    let x = (c.x + rng.gen_range(-params.step..=params.step))
                        .clamp(env.bounds.min.x, env.bounds.max.x);
                    let y = (c.y + rng.gen_range(-params.step..=params.step))
                        .clamp(env.bounds.min.y, env.bounds.max.y);
                    Configuration::new(x, y, uniform_angle(&mut rng))
                };
                map.add_node(q, k_neighbors);
            }
            continue;
        };
        if round > params.max_iterations {
            return Ok(failed(log, round - 1));
        }
        let mut ok = true;
        for &v in &path_nodes {
            if map.node_status[v] != Status::Unknown {
                continue;
            }
            if is_free(&map.nodes[v], env, robot) {
                map.node_status[v] = Status::Valid;
                log.push(map.nodes[v], SampleKind::Tree, round);
            } else {
                map.node_status[v] = Status::Invalid;
                seeds.push(map.nodes[v]);
                ok = false;
            }
        }
        if ok {
            for &e in &path_edges {
                if map.edge_status[e] != Status::Unknown {
                    continue;
                }
                let (a, b) = map.edges[e];
                let pts = edge_points(&map.nodes[a], &map.nodes[b], params.edge_resolution);
                let mut free = true;
                for p in &pts[1..pts.len() - 1] {
                    if !is_free(p, env, robot) {
                        free = false;
                        break;
                    }
                    log.push(*p, SampleKind::Tree, round);
                }
                map.edge_status[e] = if free { Status::Valid } else { Status::Invalid };
                if !free {
                    seeds.push(lerp(&map.nodes[a], &map.nodes[b], 0.5));
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let waypoints: Vec<Configuration> = path_nodes.iter().map(|&v| map.nodes[v]).collect();
            let path = Path::new(waypoints).ok().map(|p| p.subdivided(params.step));
            return Ok(PlanResult {
                success: path.is_some(),
                path,
                log,
                iterations_used: round,
                tree: Vec::new(),
                fallback: false,
                debug_log: None,
            });
        }
    }
}
