//! Guided sampling-based motion planning for a rigid rectangle in the plane.
//!
//! A guiding space pairs a projection of configurations into a simpler space
//! with a heuristic that turns a projected query into a sampling distribution
//! over configuration space. This crate provides:
//!
//! - [`geometry`]: SE(2) poses, the robot footprint and collision checks,
//! - [`environments`]: the benchmark scenarios and their JSON format,
//! - [`guidance`]: guiding spaces (uniform, path, workspace skeleton, tube),
//! - [`planners`]: RRT, DR-RRT, LazyPRM and IRC with tagged sample logs,
//! - [`metrics`]: sampling efficiency as a KL divergence against a path tube,
//! - [`bench`]: the seeded experiment runner, tables and SVG figures.

pub mod bench;
pub mod environments;
pub mod geometry;
pub mod guidance;
pub mod metrics;
pub mod planners;

pub use environments::BenchmarkScenario;
pub use geometry::{Configuration, Environment, Robot};
