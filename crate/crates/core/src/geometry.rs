//! SE(2) configurations, the rectangular robot footprint, and collision checking.
//!
//! Obstacles are convex polygons. Collisions between the robot footprint and an
//! obstacle are decided with the separating axis test; a non-convex obstacle is
//! a union of convex parts sharing a group id.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cost of one radian of rotation in [`config_distance`], in meters.
///
/// Equal to the robot's largest half-extent, so a full radian costs about as
/// much as sweeping the far corner of the footprint.
pub const ROTATION_WEIGHT: f64 = 0.3;

/// Spacing used when validating edges, in the units of [`config_distance`].
pub const EDGE_RESOLUTION: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("angle is not finite: {0}")]
    NonFiniteAngle(f64),
    #[error("interpolation parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("robot half-extents must be strictly positive (got {half_width} x {half_length})")]
    DegenerateRobot { half_width: f64, half_length: f64 },
    #[error("polygon must have at least 3 vertices (got {0})")]
    TooFewVertices(usize),
    #[error("polygon is not convex and counter-clockwise at vertex {0}")]
    NotConvexCcw(usize),
    #[error("bounds are empty or inverted")]
    EmptyBounds,
    #[error("a path needs at least two waypoints (got {0})")]
    ShortPath(usize),
}

/// Wraps `theta` into (-π, π], rejecting NaN and infinities.
pub fn normalize_angle(theta: f64) -> Result<f64, GeometryError> {
    if !theta.is_finite() {
        return Err(GeometryError::NonFiniteAngle(theta));
    }
    Ok(wrap_angle(theta))
}

/// Infallible form of [`normalize_angle`] for values known to be finite.
#[inline]
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Signed shortest rotation from `from` to `to`, in (-π, π].
#[inline]
pub fn angle_diff(from: f64, to: f64) -> f64 {
    // both inputs are normalized, so the raw difference lies in (-2π, 2π)
    let mut d = to - from;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

/// A pose of the robot: position in meters, heading in radians.
///
/// `theta` is kept in (-π, π]; every constructor normalizes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Configuration {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Configuration {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

impl From<[f64; 3]> for Configuration {
    fn from(v: [f64; 3]) -> Self {
        Configuration::new(v[0], v[1], v[2])
    }
}

impl From<Configuration> for [f64; 3] {
    fn from(q: Configuration) -> Self {
        [q.x, q.y, q.theta]
    }
}

/// Weighted SE(2) distance: `sqrt(dx² + dy² + (w·dθ)²)` with the shortest-arc `dθ`.
#[inline]
pub fn config_distance(a: &Configuration, b: &Configuration) -> f64 {
    distance_sq(a, b).sqrt()
}

#[inline]
pub(crate) fn distance_sq(a: &Configuration, b: &Configuration) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let dt = ROTATION_WEIGHT * angle_diff(a.theta, b.theta);
    dx * dx + dy * dy + dt * dt
}

/// Linear in position, shortest arc in heading. `t = 0` gives `a`, `t = 1` gives `b`.
pub fn interpolate(
    a: &Configuration,
    b: &Configuration,
    t: f64,
) -> Result<Configuration, GeometryError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeometryError::ParameterOutOfRange(t));
    }
    Ok(lerp(a, b, t))
}

#[inline]
pub(crate) fn lerp(a: &Configuration, b: &Configuration, t: f64) -> Configuration {
    if t == 0.0 {
        return *a;
    }
    if t == 1.0 {
        return *b;
    }
    Configuration::new(
        (1.0 - t) * a.x + t * b.x,
        (1.0 - t) * a.y + t * b.y,
        a.theta + t * angle_diff(a.theta, b.theta),
    )
}

/// Points checked along the edge `a -> b`, spaced at most `resolution` apart,
/// endpoints included.
///
/// The endpoints are put into a canonical order first so that the same point
/// set is produced for `(a, b)` and `(b, a)`.
pub fn edge_points(a: &Configuration, b: &Configuration, resolution: f64) -> Vec<Configuration> {
    let (p, q) = canonical_order(a, b);
    let d = config_distance(p, q);
    let steps = ((d / resolution).ceil() as usize).max(1);
    (0..=steps)
        .map(|i| lerp(p, q, i as f64 / steps as f64))
        .collect()
}

fn canonical_order<'a>(
    a: &'a Configuration,
    b: &'a Configuration,
) -> (&'a Configuration, &'a Configuration) {
    let ka = [a.x, a.y, a.theta];
    let kb = [b.x, b.y, b.theta];
    if ka.partial_cmp(&kb) == Some(std::cmp::Ordering::Greater) {
        (b, a)
    } else {
        (a, b)
    }
}

/// An ordered sequence of at least two configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Configuration>", into = "Vec<Configuration>")]
pub struct Path {
    waypoints: Vec<Configuration>,
}

impl Path {
    pub fn new(waypoints: Vec<Configuration>) -> Result<Self, GeometryError> {
        if waypoints.len() < 2 {
            return Err(GeometryError::ShortPath(waypoints.len()));
        }
        Ok(Self { waypoints })
    }

    pub fn waypoints(&self) -> &[Configuration] {
        &self.waypoints
    }

    pub fn start(&self) -> &Configuration {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &Configuration {
        &self.waypoints[self.waypoints.len() - 1]
    }

    /// Sum of [`config_distance`] over consecutive waypoints.
    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| config_distance(&w[0], &w[1]))
            .sum()
    }

    /// Every waypoint plus interpolated points so that consecutive points are
    /// at most `spacing` apart. Waypoints are kept exactly.
    pub fn densify(&self, spacing: f64) -> Vec<Configuration> {
        assert!(spacing > 0.0, "densify spacing must be positive");
        let mut out = vec![self.waypoints[0]];
        for w in self.waypoints.windows(2) {
            let d = config_distance(&w[0], &w[1]);
            let steps = ((d / spacing).ceil() as usize).max(1);
            out.extend((1..=steps).map(|i| lerp(&w[0], &w[1], i as f64 / steps as f64)));
        }
        out
    }

    /// Same path, re-sampled so that no segment is longer than `max_step`.
    pub fn subdivided(&self, max_step: f64) -> Path {
        Path {
            waypoints: self.densify(max_step),
        }
    }
}

impl TryFrom<Vec<Configuration>> for Path {
    type Error = GeometryError;
    fn try_from(v: Vec<Configuration>) -> Result<Self, Self::Error> {
        Path::new(v)
    }
}

impl From<Path> for Vec<Configuration> {
    fn from(p: Path) -> Self {
        p.waypoints
    }
}

/// Rigid rectangle. `half_width` runs along the body x-axis and `half_length`
/// along the body y-axis, so at `theta = 0` the long side is vertical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RobotRepr", into = "RobotRepr")]
pub struct Robot {
    half_width: f64,
    half_length: f64,
}

#[derive(Serialize, Deserialize)]
struct RobotRepr {
    half_width: f64,
    half_length: f64,
}

impl TryFrom<RobotRepr> for Robot {
    type Error = GeometryError;
    fn try_from(r: RobotRepr) -> Result<Self, Self::Error> {
        Robot::new(r.half_width, r.half_length)
    }
}

impl From<Robot> for RobotRepr {
    fn from(r: Robot) -> Self {
        RobotRepr {
            half_width: r.half_width,
            half_length: r.half_length,
        }
    }
}

impl Robot {
    pub fn new(half_width: f64, half_length: f64) -> Result<Self, GeometryError> {
        if !(half_width > 0.0 && half_length > 0.0)
            || !half_width.is_finite()
            || !half_length.is_finite()
        {
            return Err(GeometryError::DegenerateRobot {
                half_width,
                half_length,
            });
        }
        Ok(Self {
            half_width,
            half_length,
        })
    }

    /// The 0.2 m x 0.6 m benchmark robot.
    pub fn benchmark() -> Self {
        Self {
            half_width: 0.1,
            half_length: 0.3,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    fn bounding_radius(&self) -> f64 {
        self.half_width.hypot(self.half_length)
    }
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    aabb: Aabb,
}

impl ConvexPolygon {
    /// Validates convexity and counter-clockwise orientation.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if b.sub(a).cross(c.sub(b)) <= 0.0 {
                return Err(GeometryError::NotConvexCcw((i + 1) % n));
            }
        }
        Ok(Self::from_ccw_unchecked(vertices))
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Self::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    fn from_ccw_unchecked(vertices: Vec<Vec2>) -> Self {
        let aabb = Aabb::around(&vertices);
        Self { vertices, aabb }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Shoelace area (positive for counter-clockwise input).
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            * 0.5
    }

    /// Point containment, boundary inclusive.
    pub fn contains(&self, p: Vec2) -> bool {
        if !self.aabb.contains(p) {
            return false;
        }
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            b.sub(a).cross(p.sub(a)) >= 0.0
        })
    }

    /// Separating axis test. Touching boundaries count as intersecting.
    pub fn intersects(&self, other: &ConvexPolygon) -> bool {
        if !self.aabb.overlaps(&other.aabb) {
            return false;
        }
        !(has_separating_edge(self, other) || has_separating_edge(other, self))
    }

    pub(crate) fn aabb(&self) -> Aabb {
        self.aabb
    }
}

fn has_separating_edge(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    let n = a.vertices.len();
    (0..n).any(|i| {
        let p = a.vertices[i];
        let e = a.vertices[(i + 1) % n].sub(p);
        let axis = Vec2::new(e.y, -e.x);
        let (amin, amax) = project(&a.vertices, axis);
        let (bmin, bmax) = project(&b.vertices, axis);
        amax < bmin || bmax < amin
    })
}

fn project(vertices: &[Vec2], axis: Vec2) -> (f64, f64) {
    vertices
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            let s = v.dot(axis);
            (lo.min(s), hi.max(s))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Aabb {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Aabb {
    fn around(points: &[Vec2]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            min[0] = min[0].min(p.x);
            min[1] = min[1].min(p.y);
            max[0] = max[0].max(p.x);
            max[1] = max[1].max(p.y);
        }
        Self { min, max }
    }

    fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min[0] && p.x <= self.max[0] && p.y >= self.min[1] && p.y <= self.max[1]
    }

    fn overlaps(&self, o: &Aabb) -> bool {
        self.min[0] <= o.max[0]
            && o.min[0] <= self.max[0]
            && self.min[1] <= o.max[1]
            && o.min[1] <= self.max[1]
    }
}

/// Axis-aligned workspace rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Bounds {
    pub min: Vec2,
    pub max: Vec2,
}

impl Bounds {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self, GeometryError> {
        if !(min.x < max.x && min.y < max.y) {
            return Err(GeometryError::EmptyBounds);
        }
        Ok(Self { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

impl TryFrom<[[f64; 2]; 2]> for Bounds {
    type Error = GeometryError;
    fn try_from(v: [[f64; 2]; 2]) -> Result<Self, Self::Error> {
        Bounds::new(Vec2::new(v[0][0], v[0][1]), Vec2::new(v[1][0], v[1][1]))
    }
}

impl From<Bounds> for [[f64; 2]; 2] {
    fn from(b: Bounds) -> Self {
        [[b.min.x, b.min.y], [b.max.x, b.max.y]]
    }
}

/// A convex obstacle part. Parts with the same `group` form one obstacle.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub group: u32,
    pub polygon: ConvexPolygon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub bounds: Bounds,
    pub obstacles: Vec<Obstacle>,
}

impl Environment {
    pub fn new(bounds: Bounds, obstacles: Vec<Obstacle>) -> Self {
        Self { bounds, obstacles }
    }

    pub fn empty(bounds: Bounds) -> Self {
        Self::new(bounds, Vec::new())
    }

    /// True if `p` is inside the bounds and outside every obstacle.
    pub fn point_free(&self, p: Vec2) -> bool {
        self.bounds.contains(p) && !self.obstacles.iter().any(|o| o.polygon.contains(p))
    }
}

/// Corners of the robot rectangle at pose `q`, counter-clockwise.
pub fn footprint(q: &Configuration, robot: &Robot) -> ConvexPolygon {
    let (s, c) = q.theta.sin_cos();
    let local = [
        (-robot.half_width, -robot.half_length),
        (robot.half_width, -robot.half_length),
        (robot.half_width, robot.half_length),
        (-robot.half_width, robot.half_length),
    ];
    let vertices = local
        .iter()
        .map(|&(lx, ly)| Vec2::new(q.x + lx * c - ly * s, q.y + lx * s + ly * c))
        .collect();
    ConvexPolygon::from_ccw_unchecked(vertices)
}

/// True iff the footprint lies inside the bounds and touches no obstacle.
pub fn is_free(q: &Configuration, env: &Environment, robot: &Robot) -> bool {
    let b = &env.bounds;
    let r = robot.bounding_radius();
    if q.x - r < b.min.x || q.x + r > b.max.x || q.y - r < b.min.y || q.y + r > b.max.y {
        // near the border: fall through to the exact per-corner test
        let fp = footprint(q, robot);
        if !fp.vertices().iter().all(|v| b.contains(*v)) {
            return false;
        }
        return !env.obstacles.iter().any(|o| o.polygon.intersects(&fp));
    }
    let near = |o: &&Obstacle| {
        let bb = o.polygon.aabb();
        q.x + r >= bb.min[0] && q.x - r <= bb.max[0] && q.y + r >= bb.min[1] && q.y - r <= bb.max[1]
    };
    let mut candidates = env.obstacles.iter().filter(near).peekable();
    if candidates.peek().is_none() {
        return true;
    }
    let fp = footprint(q, robot);
    !candidates.any(|o| o.polygon.intersects(&fp))
}

/// Checks `a`, `b` and interpolated poses spaced at most `resolution` apart.
pub fn is_edge_free(
    a: &Configuration,
    b: &Configuration,
    env: &Environment,
    robot: &Robot,
    resolution: f64,
) -> bool {
    assert!(resolution > 0.0, "edge resolution must be positive");
    edge_points(a, b, resolution)
        .iter()
        .all(|q| is_free(q, env, robot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn bounds10() -> Bounds {
        Bounds::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)).unwrap()
    }

    fn corners(p: &ConvexPolygon) -> Vec<(f64, f64)> {
        p.vertices().iter().map(|v| (v.x, v.y)).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(normalize_angle(3.0 * PI).unwrap(), PI, epsilon = 1e-12);
        assert_eq!(normalize_angle(-PI).unwrap(), PI);
        assert_eq!(normalize_angle(PI).unwrap(), PI);
        assert!(normalize_angle(f64::NAN).is_err());
        assert!(normalize_angle(f64::INFINITY).is_err());
    }

    #[test]
    fn distance_examples() {
        let q = Configuration::new(1.0, 2.0, 0.5);
        assert_eq!(config_distance(&q, &q), 0.0);
        let o = Configuration::new(0.0, 0.0, 0.0);
        assert_abs_diff_eq!(
            config_distance(&o, &Configuration::new(3.0, 4.0, 0.0)),
            5.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            config_distance(&o, &Configuration::new(0.0, 0.0, PI)),
            0.3 * PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn interpolate_examples() {
        let a = Configuration::new(0.3, 0.7, 1.0);
        let b = Configuration::new(2.0, -1.0, -2.5);
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), a);
        assert_eq!(interpolate(&a, &b, 1.0).unwrap(), b);
        let m = interpolate(
            &Configuration::new(0.0, 0.0, 0.0),
            &Configuration::new(2.0, 0.0, 0.0),
            0.5,
        )
        .unwrap();
        assert_eq!(m, Configuration::new(1.0, 0.0, 0.0));
        assert!(interpolate(&a, &b, 1.5).is_err());
        assert!(interpolate(&a, &b, -0.1).is_err());
    }

    #[test]
    fn interpolate_takes_shortest_arc() {
        let a = Configuration::new(0.0, 0.0, 3.0 * PI / 4.0);
        let b = Configuration::new(0.0, 0.0, -3.0 * PI / 4.0);
        // both arc directions: +π/2 (through π) and -3π/2 (through 0); the shorter midpoint is π
        let arcs = [PI / 2.0, -3.0 * PI / 2.0];
        let shortest = arcs
            .iter()
            .copied()
            .min_by(|x, y| x.abs().total_cmp(&y.abs()))
            .unwrap();
        let expected = wrap_angle(a.theta + 0.5 * shortest);
        let m = interpolate(&a, &b, 0.5).unwrap();
        assert_abs_diff_eq!(m.theta, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(m.theta, PI, epsilon = 1e-12);
    }

    #[test]
    fn footprint_axis_aligned() {
        let fp = footprint(&Configuration::new(5.0, 5.0, 0.0), &Robot::benchmark());
        let got = corners(&fp);
        let want = [(4.9, 4.7), (5.1, 4.7), (5.1, 5.3), (4.9, 5.3)];
        for (g, w) in got.iter().zip(want.iter()) {
            assert_abs_diff_eq!(g.0, w.0, epsilon = 1e-12);
            assert_abs_diff_eq!(g.1, w.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn footprint_quarter_turn_swaps_extents() {
        let fp = footprint(
            &Configuration::new(0.0, 0.0, FRAC_PI_2),
            &Robot::benchmark(),
        );
        let (mut xs, mut ys): (Vec<f64>, Vec<f64>) = corners(&fp).into_iter().unzip();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(xs[0], -0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(xs[3], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(ys[0], -0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(ys[3], 0.1, epsilon = 1e-12);
    }

    #[test]
    fn footprint_area_at_quarter_pi() {
        let fp = footprint(&Configuration::new(1.0, 1.0, PI / 4.0), &Robot::benchmark());
        // shoelace on the rotated corners; equals 0.2 * 0.6
        assert_abs_diff_eq!(fp.area(), 0.12, epsilon = 1e-12);
        assert!(
            ConvexPolygon::new(fp.vertices().to_vec()).is_ok(),
            "footprint must be ccw"
        );
    }

    #[test]
    fn polygon_validation() {
        let cw = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(matches!(
            ConvexPolygon::new(cw),
            Err(GeometryError::NotConvexCcw(_))
        ));
        let dart = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.5),
            Vec2::new(1.0, 2.0),
        ];
        assert!(ConvexPolygon::new(dart).is_err());
        assert!(matches!(
            ConvexPolygon::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        ));
        assert!(Robot::new(0.0, 1.0).is_err());
    }

    #[test]
    fn collision_cases() {
        let env = Environment::new(
            bounds10(),
            vec![Obstacle {
                group: 0,
                polygon: ConvexPolygon::rect(4.0, 4.0, 6.0, 6.0).unwrap(),
            }],
        );
        let r = Robot::benchmark();
        assert!(is_free(&Configuration::new(1.0, 1.0, 0.3), &env, &r));
        // straddles the left edge of the block
        assert!(!is_free(&Configuration::new(4.0, 5.0, 0.0), &env, &r));
        // inside the block entirely
        assert!(!is_free(&Configuration::new(5.0, 5.0, 1.0), &env, &r));
        // centered outside the bounds
        assert!(!is_free(&Configuration::new(-1.0, 5.0, 0.0), &env, &r));
        // inside bounds but a corner pokes out
        assert!(!is_free(&Configuration::new(0.05, 5.0, 0.0), &env, &r));
    }

    #[test]
    fn edge_cases() {
        let env = Environment::new(
            bounds10(),
            vec![Obstacle {
                group: 0,
                polygon: ConvexPolygon::rect(4.0, 0.0, 6.0, 6.0).unwrap(),
            }],
        );
        let r = Robot::benchmark();
        let a = Configuration::new(2.0, 3.0, 0.0);
        assert!(is_edge_free(&a, &a, &env, &r, EDGE_RESOLUTION));
        let b = Configuration::new(8.0, 3.0, 0.0);
        assert!(!is_edge_free(&a, &b, &env, &r, EDGE_RESOLUTION));
        let c = Configuration::new(2.0, 8.0, 2.0);
        let d = Configuration::new(8.0, 8.5, -1.0);
        assert!(is_edge_free(&c, &d, &env, &r, EDGE_RESOLUTION));
    }

    #[test]
    fn edge_points_respect_resolution() {
        let a = Configuration::new(1.0, 1.0, 3.0);
        let b = Configuration::new(1.7, 0.4, -2.9);
        let pts = edge_points(&a, &b, 0.05);
        assert!(pts
            .windows(2)
            .all(|w| config_distance(&w[0], &w[1]) <= 0.05 + 1e-12));
        assert_eq!(pts, edge_points(&b, &a, 0.05));
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut draw = || {
            Configuration::new(
                rng.gen_range(0.0..10.0),
                rng.gen_range(0.0..10.0),
                rng.gen_range(-PI..PI),
            )
        };
        for _ in 0..10_000 {
            let (a, b, c) = (draw(), draw(), draw());
            let ab = config_distance(&a, &b);
            assert!(ab >= 0.0);
            assert_eq!(ab, config_distance(&b, &a));
            assert!(config_distance(&a, &c) <= ab + config_distance(&b, &c) + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn footprint_area_is_rotation_invariant(x in 0.0..10.0f64, y in 0.0..10.0f64, t in -10.0..10.0f64) {
            let r = Robot::benchmark();
            let fp = footprint(&Configuration::new(x, y, t), &r);
            prop_assert!((fp.area() - 4.0 * r.half_width() * r.half_length()).abs() < 1e-12);
        }

        #[test]
        fn square_robot_is_quarter_turn_symmetric(x in 0.0..10.0f64, y in 0.0..10.0f64, t in -PI..PI) {
            let env = Environment::new(bounds10(), vec![
                Obstacle { group: 0, polygon: ConvexPolygon::rect(3.0, 3.0, 5.0, 7.0).unwrap() },
                Obstacle { group: 1, polygon: ConvexPolygon::new(vec![
                    Vec2::new(6.0, 1.0), Vec2::new(9.0, 2.0), Vec2::new(7.0, 4.0),
                ]).unwrap() },
            ]);
            let sq = Robot::new(0.25, 0.25).unwrap();
            let q = Configuration::new(x, y, t);
            let q90 = Configuration::new(x, y, t + FRAC_PI_2);
            prop_assert_eq!(is_free(&q, &env, &sq), is_free(&q90, &env, &sq));
        }

        #[test]
        fn edge_check_is_symmetric(ax in 0.0..10.0f64, ay in 0.0..10.0f64, at in -PI..PI,
                                   bx in 0.0..10.0f64, by in 0.0..10.0f64, bt in -PI..PI) {
            let env = Environment::new(bounds10(), vec![
                Obstacle { group: 0, polygon: ConvexPolygon::rect(4.0, 2.0, 5.0, 8.0).unwrap() },
            ]);
            let r = Robot::benchmark();
            let a = Configuration::new(ax, ay, at);
            let b = Configuration::new(bx, by, bt);
            prop_assert_eq!(
                is_edge_free(&a, &b, &env, &r, EDGE_RESOLUTION),
                is_edge_free(&b, &a, &env, &r, EDGE_RESOLUTION)
            );
        }

        #[test]
        fn normalized_angle_is_congruent(t in -100.0..100.0f64) {
            let n = normalize_angle(t).unwrap();
            prop_assert!(n > -PI && n <= PI);
            let k = ((t - n) / TAU).round();
            prop_assert!((t - n - k * TAU).abs() < 1e-9);
        }
    }
}
