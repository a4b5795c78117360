//! Plain RRT on every scenario with the default parameters.

use guidespace::environments::all_scenarios;
use guidespace::planners::{rrt_plan, PlannerParams};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let params = PlannerParams::default().with_seed(seed);
    for s in all_scenarios() {
        let r = rrt_plan(&s, &params).expect("valid query");
        println!(
            "{:<15} success={} iterations={} tree={} expansion={} path_len={:.2}",
            s.name,
            r.success,
            r.iterations_used,
            r.log.tree().len(),
            r.log.expansion().len(),
            r.path.as_ref().map_or(f64::NAN, |p| p.length())
        );
    }
}
