//! SE = D_KL(T || Q) for one RRT run, against reference distributions.

use guidespace::environments::build_cup;
use guidespace::metrics::{
    histogram, kl_divergence, smooth, target_tube, GridDistribution, MetricSettings,
};
use guidespace::planners::{rrt_plan, PlannerParams};

fn main() {
    let s = build_cup();
    let bounds = s.environment.bounds;
    let metric = MetricSettings::default();
    let grid = metric.grid(bounds).unwrap();
    let r = rrt_plan(&s, &PlannerParams::default().with_seed(3)).unwrap();
    let path = r.path.expect("cup is easy for RRT");

    let t = target_tube(&path, metric.delta, &grid, metric.mc_samples, metric.seed).unwrap();
    let covered = t.masses().iter().filter(|&&m| m > 0.0).count();
    println!("grid {} cells, tube covers {covered}", grid.num_cells());

    let tree = r.log.tree();
    let q = smooth(&histogram(&tree, &grid).unwrap(), metric.lambda).unwrap();
    println!(
        "tree samples ({}): {:.3} nats",
        tree.len(),
        kl_divergence(&t, &q).unwrap()
    );
    let exp = r.log.expansion();
    println!(
        "expansion samples ({}): {:.3} nats",
        exp.len(),
        metric.efficiency(&path, &exp, bounds).unwrap()
    );

    let uniform = GridDistribution::uniform(grid);
    println!(
        "uniform Q: {:.3} nats",
        kl_divergence(&t, &uniform).unwrap()
    );
    let own = smooth(&t, metric.lambda).unwrap();
    println!(
        "Q = smoothed T: {:.3} nats",
        kl_divergence(&t, &own).unwrap()
    );
}
