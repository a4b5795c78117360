//! Guiding spaces: a projection of configurations plus a heuristic that turns a
//! projected query into a sampler over configuration space.
//!
//! Planners only ever call [`GuidingSpace::project`] on the start and goal
//! and then draw from the sampler returned by [`GuidingSpace::heuristic`].
//! Stateful guidance (the skeleton regions of DR-RRT) is told about new tree
//! nodes through [`Sampler::observe`].

use std::f64::consts::PI;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::geometry::{
    config_distance, Bounds, Configuration, Path, Robot, Vec2, EDGE_RESOLUTION, ROTATION_WEIGHT,
};

mod skeleton;

pub use skeleton::{compute_skeleton, SkeletonEdge, SkeletonGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuidanceError {
    #[error("shrink factor {0} outside (0, 1]")]
    ShrinkFactor(f64),
    #[error("mixture weight {0} outside [0, 1]")]
    MixWeight(f64),
    #[error("tube radius must be positive (got {0})")]
    TubeRadius(f64),
    #[error("workspace skeleton is empty")]
    EmptySkeleton,
}

/// A point of the guiding space `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GuidePoint {
    /// `S = C`: the configuration itself.
    Config(Configuration),
    /// A point of the 2D workspace (point-robot projections).
    Workspace(Vec2),
    /// The single point of `S = {0}`.
    Unit,
}

pub trait Sampler {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Configuration;

    /// Called after a configuration was added to the planner's search tree.
    fn observe(&mut self, _tree_node: &Configuration) {}
}

pub trait GuidingSpace {
    fn project(&self, q: &Configuration) -> GuidePoint;

    /// The heuristic: a sampling distribution over `C` for the projected query.
    fn heuristic<'a>(&'a self, from: &GuidePoint, to: &GuidePoint) -> Box<dyn Sampler + 'a>;
}

/// Uniform over the workspace bounds times (-π, π].
pub fn uniform_config(bounds: &Bounds, rng: &mut dyn RngCore) -> Configuration {
    Configuration::new(
        rng.gen_range(bounds.min.x..=bounds.max.x),
        rng.gen_range(bounds.min.y..=bounds.max.y),
        uniform_angle(rng),
    )
}

pub fn uniform_angle(rng: &mut dyn RngCore) -> f64 {
    // [-π, π) wraps to (-π, π]
    Configuration::new(0.0, 0.0, rng.gen_range(-PI..PI)).theta
}

/// `S = {0}`: no guidance, uniform sampling over `C`.
#[derive(Debug, Clone)]
pub struct NullGuidance {
    bounds: Bounds,
}

pub fn null_guidance(bounds: Bounds) -> NullGuidance {
    NullGuidance { bounds }
}

struct UniformSampler {
    bounds: Bounds,
}

impl Sampler for UniformSampler {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Configuration {
        uniform_config(&self.bounds, rng)
    }
}

impl GuidingSpace for NullGuidance {
    fn project(&self, _q: &Configuration) -> GuidePoint {
        GuidePoint::Unit
    }

    fn heuristic<'a>(&'a self, _from: &GuidePoint, _to: &GuidePoint) -> Box<dyn Sampler + 'a> {
        Box::new(UniformSampler {
            bounds: self.bounds,
        })
    }
}

/// `S = C`: perfect guidance along a known solution path.
#[derive(Debug, Clone)]
pub struct IdentityGuidance {
    points: Vec<Configuration>,
}

pub fn identity_guidance(path: &Path) -> IdentityGuidance {
    IdentityGuidance {
        points: path.densify(EDGE_RESOLUTION),
    }
}

struct PathPointSampler<'a> {
    points: &'a [Configuration],
}

impl Sampler for PathPointSampler<'_> {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Configuration {
        self.points[rng.gen_range(0..self.points.len())]
    }
}

impl GuidingSpace for IdentityGuidance {
    fn project(&self, q: &Configuration) -> GuidePoint {
        GuidePoint::Config(*q)
    }

    fn heuristic<'a>(&'a self, _from: &GuidePoint, _to: &GuidePoint) -> Box<dyn Sampler + 'a> {
        Box::new(PathPointSampler {
            points: &self.points,
        })
    }
}

/// Both half-extents scaled by `factor`.
pub fn shrink_robot(robot: &Robot, factor: f64) -> Result<Robot, GuidanceError> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(GuidanceError::ShrinkFactor(factor));
    }
    Robot::new(robot.half_width() * factor, robot.half_length() * factor)
        .map_err(|_| GuidanceError::ShrinkFactor(factor))
}

/// Path points bucketed on a square grid in the workspace, for fast
/// "is any path point within `radius`" queries.
#[derive(Debug, Clone)]
struct PathIndex {
    origin: Vec2,
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<u32>>,
}

impl PathIndex {
    fn new(points: &[Configuration], cell: f64) -> Self {
        let (mut lo, mut hi) = (
            Vec2::new(f64::INFINITY, f64::INFINITY),
            Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let cols = ((hi.x - lo.x) / cell).floor() as usize + 1;
        let rows = ((hi.y - lo.y) / cell).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); cols * rows];
        for (i, p) in points.iter().enumerate() {
            let c = ((p.x - lo.x) / cell) as usize;
            let r = ((p.y - lo.y) / cell) as usize;
            buckets[r.min(rows - 1) * cols + c.min(cols - 1)].push(i as u32);
        }
        Self {
            origin: lo,
            cell,
            cols,
            rows,
            buckets,
        }
    }

    /// Smallest distance from `q` to a point within `radius` in the workspace,
    /// or `None` if there is no such point.
    fn nearest_within(
        &self,
        points: &[Configuration],
        q: &Configuration,
        radius: f64,
    ) -> Option<f64> {
        let span = (radius / self.cell).ceil() as i64;
        let cx = ((q.x - self.origin.x) / self.cell).floor() as i64;
        let cy = ((q.y - self.origin.y) / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        for r in (cy - span).max(0)..=(cy + span).min(self.rows as i64 - 1) {
            for c in (cx - span).max(0)..=(cx + span).min(self.cols as i64 - 1) {
                for &i in &self.buckets[r as usize * self.cols + c as usize] {
                    best = best.min(config_distance(q, &points[i as usize]));
                }
            }
        }
        (best < f64::INFINITY).then_some(best)
    }
}

/// Uniform distribution over `{x : d(x, P) < delta}` intersected with the
/// workspace bounds, where `d(x, P)` is the distance to the path densified at
/// [`EDGE_RESOLUTION`].
#[derive(Debug, Clone)]
pub struct TubeDistribution {
    points: Vec<Configuration>,
    delta: f64,
    bounds: Bounds,
    index: PathIndex,
}

impl TubeDistribution {
    pub fn new(path: &Path, delta: f64, bounds: Bounds) -> Result<Self, GuidanceError> {
        if !(delta > 0.0) {
            return Err(GuidanceError::TubeRadius(delta));
        }
        let points = path.densify(EDGE_RESOLUTION);
        let index = PathIndex::new(&points, delta.max(EDGE_RESOLUTION));
        Ok(Self {
            points,
            delta,
            bounds,
            index,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Densified path points used for `d(x, P)`.
    pub fn path_points(&self) -> &[Configuration] {
        &self.points
    }

    /// `d(x, P)`: minimum [`config_distance`] to the densified path.
    pub fn distance_to_path(&self, q: &Configuration) -> f64 {
        self.index
            .nearest_within(&self.points, q, self.delta)
            .filter(|d| *d < self.delta)
            .unwrap_or_else(|| {
                self.points
                    .iter()
                    .map(|p| config_distance(q, p))
                    .fold(f64::INFINITY, f64::min)
            })
    }

    /// The membership predicate `d(x, P) < delta`.
    pub fn contains(&self, q: &Configuration) -> bool {
        self.index
            .nearest_within(&self.points, q, self.delta)
            .is_some_and(|d| d < self.delta)
    }

    /// Workspace bounding box of the tube, clipped to the bounds.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo = Vec2::new(lo.x.min(p.x - self.delta), lo.y.min(p.y - self.delta));
            hi = Vec2::new(hi.x.max(p.x + self.delta), hi.y.max(p.y + self.delta));
        }
        (
            Vec2::new(lo.x.max(self.bounds.min.x), lo.y.max(self.bounds.min.y)),
            Vec2::new(hi.x.min(self.bounds.max.x), hi.y.min(self.bounds.max.y)),
        )
    }

    /// A path point chosen uniformly, offset uniformly inside the metric ball of
    /// radius `delta`; retried until the result is in bounds and in the tube.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Configuration {
        loop {
            let center = self.points[rng.gen_range(0..self.points.len())];
            let (u, v, w) = unit_ball(rng);
            let q = Configuration::new(
                center.x + self.delta * u,
                center.y + self.delta * v,
                center.theta + self.delta / ROTATION_WEIGHT * w,
            );
            if self.bounds.contains(q.position()) && self.contains(&q) {
                return q;
            }
        }
    }
}

fn unit_ball(rng: &mut dyn RngCore) -> (f64, f64, f64) {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(-1.0..1.0);
        let w: f64 = rng.gen_range(-1.0..1.0);
        if u * u + v * v + w * w < 1.0 {
            return (u, v, w);
        }
    }
}

/// Tube around a guide path mixed with uniform sampling over `C`.
#[derive(Debug, Clone)]
pub struct TubeGuidance {
    tube: TubeDistribution,
    uniform_mix: f64,
}

/// Where a [`TubeGuidance`] draw came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrawSource {
    Tube,
    Uniform,
}

pub fn tube_guidance(
    path: &Path,
    delta: f64,
    uniform_mix: f64,
    bounds: Bounds,
) -> Result<TubeGuidance, GuidanceError> {
    if !(0.0..=1.0).contains(&uniform_mix) {
        return Err(GuidanceError::MixWeight(uniform_mix));
    }
    Ok(TubeGuidance {
        tube: TubeDistribution::new(path, delta, bounds)?,
        uniform_mix,
    })
}

impl TubeGuidance {
    pub fn tube(&self) -> &TubeDistribution {
        &self.tube
    }

    pub fn draw(&self, rng: &mut dyn RngCore) -> (Configuration, DrawSource) {
        if rng.gen::<f64>() < self.uniform_mix {
            (uniform_config(&self.tube.bounds, rng), DrawSource::Uniform)
        } else {
            (self.tube.sample(rng), DrawSource::Tube)
        }
    }
}

struct TubeSampler<'a> {
    guidance: &'a TubeGuidance,
}

impl Sampler for TubeSampler<'_> {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Configuration {
        self.guidance.draw(rng).0
    }
}

impl GuidingSpace for TubeGuidance {
    fn project(&self, q: &Configuration) -> GuidePoint {
        GuidePoint::Config(*q)
    }

    fn heuristic<'a>(&'a self, _from: &GuidePoint, _to: &GuidePoint) -> Box<dyn Sampler + 'a> {
        Box::new(TubeSampler { guidance: self })
    }
}

/// Workspace-skeleton guidance: sampling is confined to disks that travel
/// along the skeleton as the tree reaches them.
#[derive(Debug, Clone)]
pub struct SkeletonRegionGuidance {
    skeleton: SkeletonGraph,
    region_radius: f64,
    bounds: Bounds,
}

pub fn skeleton_region_guidance(
    skeleton: SkeletonGraph,
    region_radius: f64,
    bounds: Bounds,
) -> Result<SkeletonRegionGuidance, GuidanceError> {
    if skeleton.is_empty() {
        return Err(GuidanceError::EmptySkeleton);
    }
    Ok(SkeletonRegionGuidance {
        skeleton,
        region_radius,
        bounds,
    })
}

impl SkeletonRegionGuidance {
    pub fn skeleton(&self) -> &SkeletonGraph {
        &self.skeleton
    }

    /// A region sampler seeded at the skeleton vertex nearest `start`.
    pub fn region_sampler(&self, start: Vec2) -> RegionSampler<'_> {
        let v = self
            .skeleton
            .nearest_vertex(start)
            .expect("non-empty skeleton");
        RegionSampler {
            skeleton: &self.skeleton,
            radius: self.region_radius,
            bounds: self.bounds,
            claimed: vec![false; self.skeleton.edges().len()],
            regions: vec![RegionPos::Vertex(v)],
        }
    }
}

impl GuidingSpace for SkeletonRegionGuidance {
    fn project(&self, q: &Configuration) -> GuidePoint {
        GuidePoint::Workspace(
            self.skeleton
                .nearest_point(q.position())
                .expect("non-empty skeleton"),
        )
    }

    fn heuristic<'a>(&'a self, from: &GuidePoint, _to: &GuidePoint) -> Box<dyn Sampler + 'a> {
        let start = match *from {
            GuidePoint::Workspace(p) => p,
            GuidePoint::Config(q) => q.position(),
            GuidePoint::Unit => self.skeleton.vertices()[0],
        };
        Box::new(self.region_sampler(start))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RegionPos {
    Vertex(usize),
    /// `s` is arc length measured from the end the region entered at.
    Edge {
        edge: usize,
        forward: bool,
        s: f64,
    },
}

/// Active sampling regions of DR-RRT.
///
/// Each skeleton edge is travelled by at most one region. A region that
/// reaches a vertex splits into one region per unclaimed incident edge, and
/// expires if there is none. When no region is left, draws fall back to
/// uniform sampling.
pub struct RegionSampler<'a> {
    skeleton: &'a SkeletonGraph,
    radius: f64,
    bounds: Bounds,
    claimed: Vec<bool>,
    regions: Vec<RegionPos>,
}

impl RegionSampler<'_> {
    pub fn region_centers(&self) -> Vec<Vec2> {
        self.regions.iter().map(|r| self.center(r)).collect()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn center(&self, r: &RegionPos) -> Vec2 {
        match *r {
            RegionPos::Vertex(v) => self.skeleton.vertices()[v],
            RegionPos::Edge { edge, forward, s } => {
                let e = &self.skeleton.edges()[edge];
                e.point_at(if forward { s } else { e.length() - s })
            }
        }
    }

    fn advance(&mut self, r: RegionPos, out: &mut Vec<RegionPos>) {
        match r {
            RegionPos::Vertex(v) => {
                for &ei in self.skeleton.incident(v) {
                    if self.claimed[ei] {
                        continue;
                    }
                    self.claimed[ei] = true;
                    let e = &self.skeleton.edges()[ei];
                    let forward = e.from == v;
                    out.push(self.place(ei, forward, self.radius.min(e.length())));
                }
            }
            RegionPos::Edge { edge, forward, s } => {
                out.push(self.place(edge, forward, s + self.radius))
            }
        }
    }

    fn place(&self, edge: usize, forward: bool, s: f64) -> RegionPos {
        let e = &self.skeleton.edges()[edge];
        if s >= e.length() {
            RegionPos::Vertex(if forward { e.to } else { e.from })
        } else {
            RegionPos::Edge { edge, forward, s }
        }
    }
}

impl Sampler for RegionSampler<'_> {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Configuration {
        if self.regions.is_empty() {
            return uniform_config(&self.bounds, rng);
        }
        let c = self.center(&self.regions[rng.gen_range(0..self.regions.len())]);
        loop {
            let dx = rng.gen_range(-1.0..1.0);
            let dy = rng.gen_range(-1.0..1.0);
            if dx * dx + dy * dy >= 1.0 {
                continue;
            }
            let p = Vec2::new(c.x + self.radius * dx, c.y + self.radius * dy);
            if self.bounds.contains(p) {
                return Configuration::new(p.x, p.y, uniform_angle(rng));
            }
        }
    }

    fn observe(&mut self, tree_node: &Configuration) {
        let p = tree_node.position();
        let current = std::mem::take(&mut self.regions);
        let mut next = Vec::with_capacity(current.len());
        for r in current {
            if self.center(&r).dist(p) <= self.radius {
                self.advance(r, &mut next);
            } else {
                next.push(r);
            }
        }
        self.regions = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{build_simple_passage, passage_center};
    use crate::geometry::{is_free, Environment};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bounds10() -> Bounds {
        Bounds::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)).unwrap()
    }

    fn line_path() -> Path {
        Path::new(vec![
            Configuration::new(2.0, 5.0, 0.0),
            Configuration::new(8.0, 5.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn null_projection_is_constant_and_angles_in_range() {
        let g = null_guidance(bounds10());
        let a = Configuration::new(1.0, 2.0, 0.3);
        let b = Configuration::new(9.0, 7.0, -2.0);
        assert_eq!(g.project(&a), g.project(&b));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = g.heuristic(&g.project(&a), &g.project(&b));
        for _ in 0..10_000 {
            let q = s.sample(&mut rng);
            assert!(q.theta > -PI && q.theta <= PI);
            assert!(bounds10().contains(q.position()));
        }
    }

    #[test]
    fn null_guidance_x_marginal_is_uniform() {
        let g = null_guidance(bounds10());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = g.heuristic(&GuidePoint::Unit, &GuidePoint::Unit);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng).x).collect();
        xs.sort_by(f64::total_cmp);
        // Kolmogorov-Smirnov statistic against U[0, 10]
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let f = x / 10.0;
                (f - i as f64 / n as f64)
                    .abs()
                    .max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS statistic {ks}");
    }

    #[test]
    fn identity_guidance_samples_lie_on_path() {
        let path = line_path();
        let g = identity_guidance(&path);
        let q = Configuration::new(3.3, 1.1, 2.0);
        assert_eq!(g.project(&q), GuidePoint::Config(q));
        let tube = TubeDistribution::new(&path, 0.5, bounds10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = g.heuristic(&g.project(path.start()), &g.project(path.end()));
        for _ in 0..1000 {
            assert!(tube.distance_to_path(&s.sample(&mut rng)) < 1e-12);
        }
    }

    #[test]
    fn shrink_robot_cases() {
        let r = Robot::benchmark();
        assert_eq!(shrink_robot(&r, 1.0).unwrap(), r);
        let h = shrink_robot(&r, 0.5).unwrap();
        assert_eq!((h.half_width(), h.half_length()), (0.05, 0.15));
        assert!(shrink_robot(&r, 0.0).is_err());
        assert!(shrink_robot(&r, 1.5).is_err());
    }

    #[test]
    fn shrunken_robot_is_free_wherever_full_robot_is() {
        let s = build_simple_passage();
        let small = shrink_robot(&s.robot, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20_000 {
            let q = uniform_config(&s.environment.bounds, &mut rng);
            if is_free(&q, &s.environment, &s.robot) {
                assert!(is_free(&q, &s.environment, &small));
            }
        }
    }

    #[test]
    fn tube_mixture_extremes() {
        let path = line_path();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pure = tube_guidance(&path, 0.5, 0.0, bounds10()).unwrap();
        for _ in 0..10_000 {
            let (q, src) = pure.draw(&mut rng);
            assert_eq!(src, DrawSource::Tube);
            assert!(pure.tube().distance_to_path(&q) < 0.5);
        }
        let uniform = tube_guidance(&path, 0.5, 1.0, bounds10()).unwrap();
        assert!((0..1000).all(|_| uniform.draw(&mut rng).1 == DrawSource::Uniform));
        assert!(tube_guidance(&path, 0.5, 1.1, bounds10()).is_err());
        assert!(tube_guidance(&path, 0.0, 0.5, bounds10()).is_err());
    }

    #[test]
    fn tube_fraction_matches_mix() {
        let g = tube_guidance(&line_path(), 0.5, 0.1, bounds10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 10_000;
        let tube = (0..n)
            .filter(|_| g.draw(&mut rng).1 == DrawSource::Tube)
            .count();
        let frac = tube as f64 / n as f64;
        // binomial sd at p = 0.9, n = 1e4 is 0.003
        assert!((frac - 0.9).abs() < 0.02, "tube fraction {frac}");
    }

    #[test]
    fn tube_distance_matches_brute_force() {
        let path = Path::new(vec![
            Configuration::new(1.0, 1.0, 0.0),
            Configuration::new(3.0, 2.0, 1.0),
            Configuration::new(4.0, 6.0, -2.5),
        ])
        .unwrap();
        let tube = TubeDistribution::new(&path, 0.5, bounds10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5000 {
            let q = uniform_config(&bounds10(), &mut rng);
            let brute = tube
                .path_points()
                .iter()
                .map(|p| config_distance(&q, p))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(tube.distance_to_path(&q), brute);
            assert_eq!(tube.contains(&q), brute < 0.5);
        }
    }

    #[test]
    fn region_sampler_starts_near_start_vertex() {
        let s = build_simple_passage();
        let sk = compute_skeleton(&s.environment, 0.1);
        let g = skeleton_region_guidance(sk.clone(), 1.0, s.environment.bounds).unwrap();
        let start_vertex = sk.vertices()[sk.nearest_vertex(s.start.position()).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut sampler = g.heuristic(&g.project(&s.start), &g.project(&s.goal));
        for _ in 0..500 {
            let q = sampler.sample(&mut rng);
            assert!(q.position().dist(start_vertex) <= 1.0);
        }
    }

    #[test]
    fn region_samples_stay_near_skeleton_and_reach_corridor() {
        let s = build_simple_passage();
        let sk = compute_skeleton(&s.environment, 0.1);
        let g = skeleton_region_guidance(sk.clone(), 1.0, s.environment.bounds).unwrap();
        let mut sampler = g.region_sampler(s.start.position());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let corridor = passage_center(0.0).position();
        let mut reached = false;
        for _ in 0..200 {
            if sampler.region_centers().is_empty() {
                break;
            }
            for _ in 0..20 {
                let q = sampler.sample(&mut rng);
                let near = sk.nearest_point(q.position()).unwrap().dist(q.position());
                assert!(near <= 1.0 + 1e-9);
            }
            // a tree that keeps up: report every region center as reached
            for c in sampler.region_centers() {
                sampler.observe(&Configuration::new(c.x, c.y, 0.0));
            }
            if sampler
                .region_centers()
                .iter()
                .any(|c| c.dist(corridor) < 1.0)
            {
                reached = true;
            }
        }
        assert!(reached, "no region reached the corridor");
    }

    #[test]
    fn empty_skeleton_is_rejected() {
        let b = bounds10();
        let sk = compute_skeleton(
            &Environment::new(
                b,
                vec![crate::geometry::Obstacle {
                    group: 0,
                    polygon: crate::geometry::ConvexPolygon::rect(0.0, 0.0, 10.0, 10.0).unwrap(),
                }],
            ),
            0.1,
        );
        assert!(sk.is_empty());
        assert_eq!(
            skeleton_region_guidance(sk, 1.0, b).unwrap_err(),
            GuidanceError::EmptySkeleton
        );
    }
}
