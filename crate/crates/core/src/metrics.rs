//! Sampling efficiency `SE_T(Q) = D_KL(T || Q)` estimated on a grid over
//! `x × y × θ`.
//!
//! `T` is the uniform distribution over the metric tube of radius `delta`
//! around a path, estimated by Monte Carlo; `Q` is the histogram of a
//! planner's samples mixed with a small uniform component so that the
//! divergence stays finite.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Bounds, Configuration, Path};
use crate::guidance::{uniform_angle, GuidanceError, TubeDistribution};

pub const DEFAULT_X_BINS: usize = 50;
pub const DEFAULT_Y_BINS: usize = 50;
pub const DEFAULT_THETA_BINS: usize = 16;
pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_LAMBDA: f64 = 1e-3;
pub const DEFAULT_MC_SAMPLES: usize = 100_000;
pub const MIN_MC_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("grid needs at least one bin per axis")]
    EmptyGrid,
    #[error("sample list is empty")]
    NoSamples,
    #[error("sample ({0}, {1}) lies outside the grid bounds")]
    OutOfBounds(f64, f64),
    #[error("distributions are defined on different grids")]
    SpecMismatch,
    #[error("mass vector has {got} cells, grid has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("masses must be nonnegative and sum to 1 (sum = {0})")]
    NotNormalized(f64),
    #[error("Q has zero mass on cell {0} where T is positive")]
    ZeroMass(usize),
    #[error("smoothing weight must lie in (0, 1), got {0}")]
    Lambda(f64),
    #[error("at least {MIN_MC_SAMPLES} Monte Carlo samples are required, got {0}")]
    TooFewMcSamples(usize),
    #[error("tube: {0}")]
    Tube(#[from] GuidanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_bins: usize,
    pub y_bins: usize,
    pub theta_bins: usize,
    pub bounds: Bounds,
}

impl GridSpec {
    pub fn new(
        x_bins: usize,
        y_bins: usize,
        theta_bins: usize,
        bounds: Bounds,
    ) -> Result<Self, MetricsError> {
        if x_bins == 0 || y_bins == 0 || theta_bins == 0 {
            return Err(MetricsError::EmptyGrid);
        }
        Ok(GridSpec {
            x_bins,
            y_bins,
            theta_bins,
            bounds,
        })
    }

    pub fn with_defaults(bounds: Bounds) -> Self {
        GridSpec {
            x_bins: DEFAULT_X_BINS,
            y_bins: DEFAULT_Y_BINS,
            theta_bins: DEFAULT_THETA_BINS,
            bounds,
        }
    }

    pub fn num_cells(&self) -> usize {
        self.x_bins * self.y_bins * self.theta_bins
    }

    /// Cell of `q`, with half-open cells and the upper bound of each axis
    /// belonging to the last cell. `None` outside the bounds.
    pub fn cell_index(&self, q: &Configuration) -> Option<usize> {
        let b = &self.bounds;
        if !b.contains(q.position()) {
            return None;
        }
        let bin = |v: f64, lo: f64, hi: f64, n: usize| {
            (((v - lo) / (hi - lo) * n as f64).floor() as usize).min(n - 1)
        };
        let ix = bin(q.x, b.min.x, b.max.x, self.x_bins);
        let iy = bin(q.y, b.min.y, b.max.y, self.y_bins);
        let it = bin(q.theta, -PI, PI, self.theta_bins);
        Some((it * self.y_bins + iy) * self.x_bins + ix)
    }

    /// Inverse of [`GridSpec::cell_index`] into `(ix, iy, itheta)`.
    pub fn cell_coords(&self, cell: usize) -> (usize, usize, usize) {
        (
            cell % self.x_bins,
            (cell / self.x_bins) % self.y_bins,
            cell / (self.x_bins * self.y_bins),
        )
    }

    /// Workspace center of column `ix`, row `iy`.
    pub fn xy_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let b = &self.bounds;
        (
            b.min.x + (ix as f64 + 0.5) * b.width() / self.x_bins as f64,
            b.min.y + (iy as f64 + 0.5) * b.height() / self.y_bins as f64,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution {
    spec: GridSpec,
    mass: Vec<f64>,
}

impl GridDistribution {
    pub fn from_masses(spec: GridSpec, mass: Vec<f64>) -> Result<Self, MetricsError> {
        if mass.len() != spec.num_cells() {
            return Err(MetricsError::WrongLength {
                expected: spec.num_cells(),
                got: mass.len(),
            });
        }
        let sum: f64 = mass.iter().sum();
        if mass.iter().any(|m| !(*m >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(MetricsError::NotNormalized(sum));
        }
        Ok(GridDistribution { spec, mass })
    }

    pub fn uniform(spec: GridSpec) -> Self {
        let n = spec.num_cells();
        GridDistribution {
            spec,
            mass: vec![1.0 / n as f64; n],
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    /// Sum over `θ` for every `(x, y)` column, indexed `iy * x_bins + ix`.
    pub fn xy_marginal(&self) -> Vec<f64> {
        let plane = self.spec.x_bins * self.spec.y_bins;
        let mut out = vec![0.0; plane];
        for (i, m) in self.mass.iter().enumerate() {
            out[i % plane] += m;
        }
        out
    }
}

fn counts(samples: &[Configuration], spec: &GridSpec) -> Result<Vec<f64>, MetricsError> {
    let mut c = vec![0.0; spec.num_cells()];
    for q in samples {
        let i = spec
            .cell_index(q)
            .ok_or(MetricsError::OutOfBounds(q.x, q.y))?;
        c[i] += 1.0;
    }
    Ok(c)
}

pub fn histogram(
    samples: &[Configuration],
    spec: &GridSpec,
) -> Result<GridDistribution, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::NoSamples);
    }
    let n = samples.len() as f64;
    let mass = counts(samples, spec)?.into_iter().map(|c| c / n).collect();
    Ok(GridDistribution { spec: *spec, mass })
}

/// Points drawn uniformly from the tube's bounding box (all of `θ`) and kept
/// iff `d(x, P) < delta`, until `count` are accepted.
pub fn tube_points(
    tube: &TubeDistribution,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Configuration> {
    let (lo, hi) = tube.bounding_box();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = Configuration::new(
            rng.gen_range(lo.x..=hi.x),
            rng.gen_range(lo.y..=hi.y),
            uniform_angle(rng),
        );
        if tube.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Monte Carlo estimate of the uniform distribution over the `delta` tube
/// around `path`, clipped to the grid bounds.
pub fn target_tube(
    path: &Path,
    delta: f64,
    spec: &GridSpec,
    mc_samples: usize,
    seed: u64,
) -> Result<GridDistribution, MetricsError> {
    if mc_samples < MIN_MC_SAMPLES {
        return Err(MetricsError::TooFewMcSamples(mc_samples));
    }
    let tube = TubeDistribution::new(path, delta, spec.bounds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    histogram(&tube_points(&tube, mc_samples, &mut rng), spec)
}

/// `(1 - lambda) * d + lambda * uniform`.
pub fn smooth(d: &GridDistribution, lambda: f64) -> Result<GridDistribution, MetricsError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(MetricsError::Lambda(lambda));
    }
    let floor = lambda / d.mass.len() as f64;
    Ok(GridDistribution {
        spec: d.spec,
        mass: d.mass.iter().map(|m| (1.0 - lambda) * m + floor).collect(),
    })
}

/// `Σ T(c) ln(T(c) / Q(c))` in nats, with `0 ln 0 = 0`.
pub fn kl_divergence(t: &GridDistribution, q: &GridDistribution) -> Result<f64, MetricsError> {
    if t.spec != q.spec {
        return Err(MetricsError::SpecMismatch);
    }
    let mut sum = 0.0;
    for (i, (&tc, &qc)) in t.mass.iter().zip(&q.mass).enumerate() {
        if tc == 0.0 {
            continue;
        }
        if qc <= 0.0 {
            return Err(MetricsError::ZeroMass(i));
        }
        sum += tc * (tc / qc).ln();
    }
    Ok(sum)
}

pub fn sampling_efficiency(
    path: &Path,
    delta: f64,
    samples: &[Configuration],
    spec: &GridSpec,
    lambda: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<f64, MetricsError> {
    let t = target_tube(path, delta, spec, mc_samples, seed)?;
    let q = smooth(&histogram(samples, spec)?, lambda)?;
    kl_divergence(&t, &q)
}

/// Alternative to per-run evaluation: `T` is the average of the per-run
/// tubes and `Q` the histogram of all samples pooled together.
pub fn pooled_sampling_efficiency(
    runs: &[(Path, Vec<Configuration>)],
    delta: f64,
    spec: &GridSpec,
    lambda: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<f64, MetricsError> {
    if runs.is_empty() {
        return Err(MetricsError::NoSamples);
    }
    let mut t = vec![0.0; spec.num_cells()];
    let mut pooled = Vec::new();
    for (path, samples) in runs {
        let ti = target_tube(path, delta, spec, mc_samples, seed)?;
        for (a, b) in t.iter_mut().zip(ti.masses()) {
            *a += b / runs.len() as f64;
        }
        pooled.extend_from_slice(samples);
    }
    let t = GridDistribution {
        spec: *spec,
        mass: t,
    };
    let q = smooth(&histogram(&pooled, spec)?, lambda)?;
    kl_divergence(&t, &q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one value.
    pub sd: f64,
    pub n: usize,
}

pub fn aggregate_over_seeds(values: &[f64]) -> Option<Aggregate> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(Aggregate { mean, sd, n })
}

/// Metric settings shared by every run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSettings {
    pub x_bins: usize,
    pub y_bins: usize,
    pub theta_bins: usize,
    pub delta: f64,
    pub lambda: f64,
    pub mc_samples: usize,
    pub seed: u64,
    /// Report the pooled-sample variant instead of per-seed means.
    pub pooled: bool,
}

impl Default for MetricSettings {
    fn default() -> Self {
        MetricSettings {
            x_bins: DEFAULT_X_BINS,
            y_bins: DEFAULT_Y_BINS,
            theta_bins: DEFAULT_THETA_BINS,
            delta: DEFAULT_DELTA,
            lambda: DEFAULT_LAMBDA,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            pooled: false,
        }
    }
}

impl MetricSettings {
    pub fn grid(&self, bounds: Bounds) -> Result<GridSpec, MetricsError> {
        GridSpec::new(self.x_bins, self.y_bins, self.theta_bins, bounds)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        if self.x_bins == 0 || self.y_bins == 0 || self.theta_bins == 0 {
            return Err(MetricsError::EmptyGrid);
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(MetricsError::Lambda(self.lambda));
        }
        if self.mc_samples < MIN_MC_SAMPLES {
            return Err(MetricsError::TooFewMcSamples(self.mc_samples));
        }
        if !(self.delta > 0.0) {
            return Err(MetricsError::Tube(GuidanceError::TubeRadius(self.delta)));
        }
        Ok(())
    }

    pub fn efficiency(
        &self,
        path: &Path,
        samples: &[Configuration],
        bounds: Bounds,
    ) -> Result<f64, MetricsError> {
        sampling_efficiency(
            path,
            self.delta,
            samples,
            &self.grid(bounds)?,
            self.lambda,
            self.mc_samples,
            self.seed,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::guidance::uniform_config;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn b10() -> Bounds {
        Bounds::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)).unwrap()
    }

    fn two_cell() -> GridSpec {
        GridSpec::new(2, 1, 1, b10()).unwrap()
    }

    fn dist(m: &[f64]) -> GridDistribution {
        GridDistribution::from_masses(two_cell(), m.to_vec()).unwrap()
    }

    fn line() -> Path {
        Path::new(vec![
            Configuration::new(2.0, 5.0, 0.0),
            Configuration::new(8.0, 5.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(
            kl_divergence(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        let expected = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        let got = kl_divergence(&dist(&[0.5, 0.5]), &dist(&[0.25, 0.75])).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(got, 0.1438, epsilon = 1e-4);
        assert_eq!(
            kl_divergence(&dist(&[0.3, 0.7]), &dist(&[0.3, 0.7])).unwrap(),
            0.0
        );
    }

    #[test]
    fn kl_errors() {
        let other = GridDistribution::uniform(GridSpec::new(1, 2, 1, b10()).unwrap());
        assert_eq!(
            kl_divergence(&dist(&[0.5, 0.5]), &other),
            Err(MetricsError::SpecMismatch)
        );
        assert_eq!(
            kl_divergence(&dist(&[0.5, 0.5]), &dist(&[1.0, 0.0])),
            Err(MetricsError::ZeroMass(1))
        );
        assert!(kl_divergence(&dist(&[1.0, 0.0]), &dist(&[1.0, 0.0])).is_ok());
    }

    #[test]
    fn mass_validation() {
        assert!(GridDistribution::from_masses(two_cell(), vec![0.5, 0.4]).is_err());
        assert!(GridDistribution::from_masses(two_cell(), vec![1.5, -0.5]).is_err());
        assert!(GridDistribution::from_masses(two_cell(), vec![1.0]).is_err());
        assert!(GridSpec::new(0, 1, 1, b10()).is_err());
    }

    #[test]
    fn cell_boundaries() {
        let g = GridSpec::new(10, 10, 4, b10()).unwrap();
        assert_eq!(
            g.cell_index(&Configuration::new(0.0, 0.0, -PI + 1e-9)),
            Some(0)
        );
        assert_eq!(
            g.cell_coords(g.cell_index(&Configuration::new(1.0, 0.0, 0.0)).unwrap()),
            (1, 0, 2)
        );
        assert_eq!(
            g.cell_coords(g.cell_index(&Configuration::new(10.0, 10.0, PI)).unwrap()),
            (9, 9, 3)
        );
        assert_eq!(g.cell_index(&Configuration::new(10.01, 5.0, 0.0)), None);
        for c in [0, 17, 399] {
            let (ix, iy, it) = g.cell_coords(c);
            assert_eq!((it * 10 + iy) * 10 + ix, c);
        }
    }

    #[test]
    fn histogram_counts() {
        let g = GridSpec::new(10, 10, 4, b10()).unwrap();
        let one = histogram(&[Configuration::new(1.5, 1.5, 0.1); 3], &g).unwrap();
        assert_eq!(one.masses().iter().filter(|m| **m == 1.0).count(), 1);
        let two = histogram(
            &[
                Configuration::new(1.5, 1.5, 0.1),
                Configuration::new(8.5, 1.5, 0.1),
            ],
            &g,
        )
        .unwrap();
        assert_eq!(two.masses().iter().filter(|m| **m == 0.5).count(), 2);
        assert_eq!(histogram(&[], &g), Err(MetricsError::NoSamples));
        assert!(matches!(
            histogram(&[Configuration::new(11.0, 1.0, 0.0)], &g),
            Err(MetricsError::OutOfBounds(..))
        ));
    }

    fn uniform_counts(
        x: usize,
        y: usize,
        t: usize,
        n: usize,
        seed: u64,
    ) -> (GridSpec, GridDistribution) {
        let g = GridSpec::new(x, y, t, b10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Configuration> =
            (0..n).map(|_| uniform_config(&b10(), &mut rng)).collect();
        let h = histogram(&samples, &g).unwrap();
        (g, h)
    }

    #[test]
    fn uniform_histogram_within_five_sigma() {
        let n = 100_000;
        let (g, h) = uniform_counts(10, 10, 4, n, 21);
        let p = 1.0 / g.num_cells() as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let worst = h.masses().iter().map(|m| (m - p).abs()).fold(0.0, f64::max);
        assert!(worst < 5.0 * sigma, "{worst} vs {}", 5.0 * sigma);
    }

    /// At the default grid a cell expects only 2.5 of 1e5 samples, where the
    /// binomial tail is far heavier than the normal one; the bound is the
    /// count whose exact tail probability, summed over all cells, is < 1e-3.
    #[test]
    fn uniform_histogram_default_grid_binomial_tail() {
        let n = 100_000;
        let (g, h) = uniform_counts(DEFAULT_X_BINS, DEFAULT_Y_BINS, DEFAULT_THETA_BINS, n, 21);
        let cells = g.num_cells() as f64;
        let p = 1.0 / cells;
        // P(X = k) for X ~ Binomial(n, p), iterated from k = 0
        let mut pk = (1.0 - p).powi(n as i32);
        let mut tail = 1.0;
        let mut k = 0usize;
        while cells * tail >= 1e-3 {
            tail -= pk;
            pk *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
            k += 1;
        }
        let max_count = h
            .masses()
            .iter()
            .map(|m| (m * n as f64).round() as usize)
            .max()
            .unwrap();
        assert!(max_count < k, "max count {max_count}, bound {k}");
        assert!(
            h.masses()
                .iter()
                .map(|m| (m * n as f64).round() as usize)
                .min()
                .unwrap()
                < 3
        );
    }

    #[test]
    fn smoothing() {
        let g = GridSpec::new(4, 1, 1, b10()).unwrap();
        let u = GridDistribution::uniform(g);
        let su = smooth(&u, 0.3).unwrap();
        for (a, b) in su.masses().iter().zip(u.masses()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let d = GridDistribution::from_masses(g, vec![0.7, 0.3, 0.0, 0.0]).unwrap();
        let s = smooth(&d, 0.1).unwrap();
        assert_abs_diff_eq!(s.masses()[3], 0.1 / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.masses().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(s.masses()[0] > s.masses()[1]);
        assert!(smooth(&d, 0.0).is_err());
        assert!(smooth(&d, 1.0).is_err());
    }

    #[test]
    fn tube_target_properties() {
        let g = GridSpec::with_defaults(b10());
        let path = line();
        let t = target_tube(&path, 0.5, &g, 50_000, 4).unwrap();
        assert_abs_diff_eq!(t.masses().iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        let tube = TubeDistribution::new(&path, 0.5, b10()).unwrap();
        // no mass on cells whose workspace footprint is farther than delta
        let cell_half_diag = (0.1f64 * 0.1 * 2.0).sqrt();
        for (i, m) in t.masses().iter().enumerate() {
            let (ix, iy, _) = g.cell_coords(i);
            let (cx, cy) = g.xy_center(ix, iy);
            let far = tube
                .path_points()
                .iter()
                .map(|p| Vec2::new(cx, cy).dist(p.position()))
                .fold(f64::INFINITY, f64::min)
                > 0.5 + cell_half_diag;
            if far {
                assert_eq!(*m, 0.0);
            }
        }
        // mirror symmetry about y = 5 and about the line's midpoint
        let xy = t.xy_marginal();
        let mut worst = 0.0f64;
        for iy in 0..25 {
            for ix in 0..50 {
                let a = xy[iy * 50 + ix];
                let b = xy[(49 - iy) * 50 + ix];
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 0.004, "asymmetry {worst}");
        assert!(target_tube(&path, 0.5, &g, 100, 4).is_err());
    }

    #[test]
    fn tube_points_are_members() {
        let tube = TubeDistribution::new(&line(), 0.5, b10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in tube_points(&tube, 20_000, &mut rng) {
            assert!(tube.distance_to_path(&q) < 0.5);
        }
    }

    #[test]
    fn degenerate_path_gives_ball() {
        let q = Configuration::new(5.0, 5.0, 0.0);
        let path = Path::new(vec![q, q]).unwrap();
        let t = target_tube(&path, 0.5, &GridSpec::with_defaults(b10()), 20_000, 1).unwrap();
        let support = t.masses().iter().filter(|m| **m > 0.0).count();
        assert!(support > 0 && support < 400);
    }

    #[test]
    fn self_consistency_and_uniform_baseline() {
        let g = GridSpec::with_defaults(b10());
        let path = line();
        let tube = TubeDistribution::new(&path, 0.5, b10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let own = tube_points(&tube, 100_000, &mut rng);
        let se = sampling_efficiency(&path, 0.5, &own, &g, DEFAULT_LAMBDA, DEFAULT_MC_SAMPLES, 77)
            .unwrap();
        assert!(se < 0.2, "{se}");
        let uniform: Vec<Configuration> = (0..100_000)
            .map(|_| uniform_config(&b10(), &mut rng))
            .collect();
        let se_u = sampling_efficiency(
            &path,
            0.5,
            &uniform,
            &g,
            DEFAULT_LAMBDA,
            DEFAULT_MC_SAMPLES,
            77,
        )
        .unwrap();
        let t = target_tube(&path, 0.5, &g, DEFAULT_MC_SAMPLES, 77).unwrap();
        assert!(se_u > 3.0, "{se_u}");
        // against an exactly flat Q the divergence is ln(N) - H(T); sampling
        // noise in Q can only raise it on average (convexity in Q)
        let entropy: f64 = t
            .masses()
            .iter()
            .filter(|m| **m > 0.0)
            .map(|m| -m * m.ln())
            .sum();
        let flat = (g.num_cells() as f64).ln() - entropy;
        let exact = kl_divergence(&t, &GridDistribution::uniform(g)).unwrap();
        assert_abs_diff_eq!(exact, flat, epsilon = 1e-9);
        assert!(flat > 3.0);
        assert!(se_u > flat && se_u < flat + 1.0, "{se_u} vs {flat}");
    }

    #[test]
    fn efficiency_is_deterministic_and_order_free() {
        let g = GridSpec::with_defaults(b10());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s: Vec<Configuration> = (0..2000)
            .map(|_| uniform_config(&b10(), &mut rng))
            .collect();
        let a = sampling_efficiency(&line(), 0.5, &s, &g, 1e-3, 20_000, 1).unwrap();
        let b = sampling_efficiency(&line(), 0.5, &s, &g, 1e-3, 20_000, 1).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        s.reverse();
        s.swap(3, 1500);
        let c = sampling_efficiency(&line(), 0.5, &s, &g, 1e-3, 20_000, 1).unwrap();
        assert_abs_diff_eq!(a, c, epsilon = 1e-12);
    }

    #[test]
    fn pooled_of_one_run_matches_per_run() {
        let g = GridSpec::with_defaults(b10());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s: Vec<Configuration> = (0..3000)
            .map(|_| uniform_config(&b10(), &mut rng))
            .collect();
        let per = sampling_efficiency(&line(), 0.5, &s, &g, 1e-3, 20_000, 1).unwrap();
        let pooled = pooled_sampling_efficiency(&[(line(), s)], 0.5, &g, 1e-3, 20_000, 1).unwrap();
        assert_abs_diff_eq!(per, pooled, epsilon = 1e-12);
    }

    #[test]
    fn aggregation() {
        let a = aggregate_over_seeds(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((a.mean, a.sd), (1.0, 0.0));
        let b = aggregate_over_seeds(&[0.0, 2.0]).unwrap();
        assert_abs_diff_eq!(b.mean, 1.0);
        assert_abs_diff_eq!(b.sd, 2f64.sqrt(), epsilon = 1e-15);
        assert!(aggregate_over_seeds(&[]).is_none());
    }

    fn random_dist(raw: &[f64]) -> Vec<f64> {
        let s: f64 = raw.iter().sum();
        raw.iter().map(|r| r / s).collect()
    }

    #[test]
    fn gibbs_inequality_on_random_pairs() {
        let g = GridSpec::new(8, 1, 1, b10()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10_000 {
            let t: Vec<f64> = (0..8)
                .map(|_| {
                    if rng.gen::<f64>() < 0.3 {
                        0.0
                    } else {
                        rng.gen()
                    }
                })
                .collect();
            let t = if t.iter().sum::<f64>() == 0.0 {
                vec![1.0; 8]
            } else {
                t
            };
            let q: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() + 1e-6).collect();
            let t = GridDistribution::from_masses(g, random_dist(&t)).unwrap();
            let q = GridDistribution::from_masses(g, random_dist(&q)).unwrap();
            assert!(kl_divergence(&t, &q).unwrap() >= 0.0);
            assert!(kl_divergence(&t, &t).unwrap().abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn kl_zero_only_for_equal(raw_t in proptest::collection::vec(0.01f64..1.0, 6), raw_q in proptest::collection::vec(0.01f64..1.0, 6)) {
            let g = GridSpec::new(6, 1, 1, b10()).unwrap();
            let t = GridDistribution::from_masses(g, random_dist(&raw_t)).unwrap();
            let q = GridDistribution::from_masses(g, random_dist(&raw_q)).unwrap();
            let kl = kl_divergence(&t, &q).unwrap();
            let max_diff = t.masses().iter().zip(q.masses()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(kl >= 0.0);
            if max_diff > 1e-3 {
                prop_assert!(kl > 0.0);
            }
        }
    }
}
