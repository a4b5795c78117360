//! The three benchmark scenarios and their on-disk format.
//!
//! All scenarios share a 10 m x 10 m workspace and the 0.2 m x 0.6 m robot.
//! Obstacle coordinates are fixed here; the canonical JSON files under
//! `data/scenarios/` are generated from these constructors.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    is_free, Bounds, Configuration, ConvexPolygon, Environment, GeometryError, Obstacle, Robot,
    Vec2,
};

pub const SIMPLE_PASSAGE: &str = "simple_passage";
pub const TRAP: &str = "trap";
pub const CUP: &str = "cup";

/// Names of the built-in scenarios, in table order.
pub const SCENARIO_NAMES: [&str; 3] = [SIMPLE_PASSAGE, TRAP, CUP];

/// Walls of the simple passage span this x-range; the corridor runs through them.
pub const PASSAGE_WALL_X: (f64, f64) = (4.0, 6.0);
/// Corridor y-range: clear width 0.5.
pub const PASSAGE_Y: (f64, f64) = (4.75, 5.25);

/// Horizontal wall of the trap.
pub const TRAP_WALL_Y: (f64, f64) = (4.8, 5.2);
/// Centers of the 0.15 m false gaps.
pub const TRAP_FALSE_GAPS: [f64; 3] = [2.5, 4.5, 6.5];
pub const TRAP_FALSE_GAP_WIDTH: f64 = 0.15;
/// The only gap the full robot fits through.
pub const TRAP_TRUE_GAP: (f64, f64) = (9.0, 9.8);

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read or write scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed scenario file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("obstacle {index} is invalid: {source}")]
    InvalidPolygon { index: usize, source: GeometryError },
    #[error("obstacle {index} has a vertex outside the workspace bounds")]
    ObstacleOutOfBounds { index: usize },
    #[error("invalid geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("{which} configuration is in collision")]
    InvalidQuery { which: &'static str },
    #[error("unknown scenario name {0:?}")]
    UnknownScenario(String),
}

/// A complete planning query: workspace, robot, start and goal.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkScenario {
    pub name: String,
    pub environment: Environment,
    pub robot: Robot,
    pub start: Configuration,
    pub goal: Configuration,
}

impl BenchmarkScenario {
    /// Checks that the start and goal are collision-free.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !is_free(&self.start, &self.environment, &self.robot) {
            return Err(ScenarioError::InvalidQuery { which: "start" });
        }
        if !is_free(&self.goal, &self.environment, &self.robot) {
            return Err(ScenarioError::InvalidQuery { which: "goal" });
        }
        Ok(())
    }
}

fn workspace() -> Bounds {
    Bounds::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)).expect("static bounds")
}

fn rect(group: u32, x0: f64, y0: f64, x1: f64, y1: f64) -> Obstacle {
    Obstacle {
        group,
        polygon: ConvexPolygon::rect(x0, y0, x1, y1).expect("static rectangle"),
    }
}

/// A dividing wall pierced by one horizontal corridor of clear width 0.5.
///
/// The robot only fits through with its long axis along the corridor
/// (`theta` near ±π/2).
pub fn build_simple_passage() -> BenchmarkScenario {
    let (x0, x1) = PASSAGE_WALL_X;
    let (y0, y1) = PASSAGE_Y;
    BenchmarkScenario {
        name: SIMPLE_PASSAGE.into(),
        environment: Environment::new(
            workspace(),
            vec![rect(0, x0, 0.0, x1, y0), rect(1, x0, y1, x1, 10.0)],
        ),
        robot: Robot::benchmark(),
        start: Configuration::new(1.5, 1.5, 0.0),
        goal: Configuration::new(8.5, 8.5, 0.0),
    }
}

/// A horizontal wall with three false gaps (0.15 m, too narrow for the robot
/// but wide enough for a half-scale one) and one true gap near the right edge.
pub fn build_trap() -> BenchmarkScenario {
    let (y0, y1) = TRAP_WALL_Y;
    let half = TRAP_FALSE_GAP_WIDTH / 2.0;
    let mut cuts: Vec<(f64, f64)> = TRAP_FALSE_GAPS
        .iter()
        .map(|c| (c - half, c + half))
        .collect();
    cuts.push(TRAP_TRUE_GAP);
    let mut obstacles = Vec::new();
    let mut left = 0.0;
    for (i, (a, b)) in cuts.iter().enumerate() {
        obstacles.push(rect(i as u32, left, y0, *a, y1));
        left = *b;
    }
    obstacles.push(rect(cuts.len() as u32, left, y0, 10.0, y1));
    BenchmarkScenario {
        name: TRAP.into(),
        environment: Environment::new(workspace(), obstacles),
        robot: Robot::benchmark(),
        start: Configuration::new(4.5, 1.5, 0.0),
        goal: Configuration::new(4.5, 8.5, 0.0),
    }
}

/// A U-shaped obstacle opening toward the start, sitting across the straight
/// start-goal line. Stored as three convex parts of one group.
pub fn build_cup() -> BenchmarkScenario {
    BenchmarkScenario {
        name: CUP.into(),
        environment: Environment::new(
            workspace(),
            vec![
                rect(0, 3.0, 4.0, 3.5, 7.0),
                rect(0, 3.0, 6.5, 7.0, 7.0),
                rect(0, 6.5, 4.0, 7.0, 7.0),
            ],
        ),
        robot: Robot::benchmark(),
        start: Configuration::new(5.0, 1.5, 0.0),
        goal: Configuration::new(5.0, 8.5, 0.0),
    }
}

pub fn scenario_by_name(name: &str) -> Result<BenchmarkScenario, ScenarioError> {
    match name {
        SIMPLE_PASSAGE => Ok(build_simple_passage()),
        TRAP => Ok(build_trap()),
        CUP => Ok(build_cup()),
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}

pub fn all_scenarios() -> Vec<BenchmarkScenario> {
    vec![build_simple_passage(), build_trap(), build_cup()]
}

#[derive(Debug, Serialize, Deserialize)]
struct ScenarioFile {
    name: String,
    bounds: [[f64; 2]; 2],
    robot: RobotFile,
    start: [f64; 3],
    goal: [f64; 3],
    obstacles: Vec<ObstacleFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RobotFile {
    half_width: f64,
    half_length: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ObstacleFile {
    group: u32,
    vertices: Vec<[f64; 2]>,
}

/// Serializes a scenario to the JSON environment format.
pub fn scenario_to_string(s: &BenchmarkScenario) -> String {
    let b = s.environment.bounds;
    let file = ScenarioFile {
        name: s.name.clone(),
        bounds: b.into(),
        robot: RobotFile {
            half_width: s.robot.half_width(),
            half_length: s.robot.half_length(),
        },
        start: s.start.into(),
        goal: s.goal.into(),
        obstacles: s
            .environment
            .obstacles
            .iter()
            .map(|o| ObstacleFile {
                group: o.group,
                vertices: o.polygon.vertices().iter().map(|v| [v.x, v.y]).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario serializes");
    text.push('\n');
    text
}

/// Parses and validates a scenario from the JSON environment format.
pub fn scenario_from_str(text: &str) -> Result<BenchmarkScenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    let bounds = Bounds::try_from(file.bounds)?;
    let mut obstacles = Vec::with_capacity(file.obstacles.len());
    for (index, o) in file.obstacles.into_iter().enumerate() {
        let vertices: Vec<Vec2> = o.vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect();
        if !vertices.iter().all(|v| bounds.contains(*v)) {
            return Err(ScenarioError::ObstacleOutOfBounds { index });
        }
        let polygon = ConvexPolygon::new(vertices)
            .map_err(|source| ScenarioError::InvalidPolygon { index, source })?;
        obstacles.push(Obstacle {
            group: o.group,
            polygon,
        });
    }
    let scenario = BenchmarkScenario {
        name: file.name,
        environment: Environment::new(bounds, obstacles),
        robot: Robot::new(file.robot.half_width, file.robot.half_length)?,
        start: file.start.into(),
        goal: file.goal.into(),
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn save_environment(s: &BenchmarkScenario, destination: &Path) -> Result<(), ScenarioError> {
    fs::write(destination, scenario_to_string(s))?;
    Ok(())
}

pub fn load_environment(source: &Path) -> Result<BenchmarkScenario, ScenarioError> {
    scenario_from_str(&fs::read_to_string(source)?)
}

/// The pose at the center of the simple-passage corridor, long axis along it.
pub fn passage_center(theta_offset: f64) -> Configuration {
    Configuration::new(
        (PASSAGE_WALL_X.0 + PASSAGE_WALL_X.1) / 2.0,
        (PASSAGE_Y.0 + PASSAGE_Y.1) / 2.0,
        FRAC_PI_2 + theta_offset,
    )
}
