//! DR-RRT on Simple Passage, compared against RRT over a few seeds.

use guidespace::environments::build_simple_passage;
use guidespace::planners::{drrrt_plan, rrt_plan, PlannerParams, DEFAULT_REGION_RADIUS};

fn main() {
    let s = build_simple_passage();
    println!("seed  rrt_iters rrt_tree  drrrt_iters drrrt_tree");
    for seed in 0..5 {
        let p = PlannerParams::default().with_seed(seed);
        let a = rrt_plan(&s, &p).unwrap();
        let b = drrrt_plan(&s, &p, DEFAULT_REGION_RADIUS).unwrap();
        println!(
            "{seed:>4} {:>10} {:>8} {:>12} {:>10}{}",
            a.iterations_used,
            a.log.tree().len(),
            b.iterations_used,
            b.log.tree().len(),
            if b.success { "" } else { "  (no path)" }
        );
    }
}
