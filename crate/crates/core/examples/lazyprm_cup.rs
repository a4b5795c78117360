//! LazyPRM on Cup. Only configurations touched during lazy validation are
//! logged, so the log follows the candidate paths.

use guidespace::environments::build_cup;
use guidespace::planners::{
    lazyprm_plan, PlannerParams, DEFAULT_ENHANCEMENT_NODES, DEFAULT_K_NEIGHBORS,
    DEFAULT_ROADMAP_SIZE,
};

fn main() {
    let s = build_cup();
    for seed in 0..5 {
        let p = PlannerParams::default().with_seed(seed);
        let r = lazyprm_plan(
            &s,
            &p,
            DEFAULT_ROADMAP_SIZE,
            DEFAULT_K_NEIGHBORS,
            DEFAULT_ENHANCEMENT_NODES,
        )
        .unwrap();
        let path = r.path.as_ref().unwrap();
        // Which side of the cup the path goes around.
        let side = if path.waypoints().iter().any(|q| q.y > 8.0) {
            "above"
        } else {
            "below"
        };
        println!(
            "seed {seed}: {} rounds, {} logged of {} roadmap nodes, path {:.2} m {side}, expansion entries {}",
            r.iterations_used,
            r.log.tree().len(),
            DEFAULT_ROADMAP_SIZE + 2,
            path.length(),
            r.log.expansion().len()
        );
    }
}
