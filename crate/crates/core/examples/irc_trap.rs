//! IRC on Trap: the shrunken robot often threads a false gap, and the
//! full-size stage then spends its samples near that gap.

use guidespace::environments::{build_trap, TRAP_FALSE_GAPS, TRAP_TRUE_GAP, TRAP_WALL_Y};
use guidespace::planners::{irc_plan, PlannerParams, DEFAULT_SHRINK_FACTOR, DEFAULT_UNIFORM_MIX};

fn nearest_gap(x: f64) -> String {
    let true_mid = (TRAP_TRUE_GAP.0 + TRAP_TRUE_GAP.1) / 2.0;
    let mut best = (f64::INFINITY, "true".to_string());
    for g in TRAP_FALSE_GAPS {
        if (x - g).abs() < best.0 {
            best = ((x - g).abs(), format!("false@{g}"));
        }
    }
    if (x - true_mid).abs() < best.0 {
        best.1 = "true".into();
    }
    best.1
}

fn main() {
    let s = build_trap();
    let mid = (TRAP_WALL_Y.0 + TRAP_WALL_Y.1) / 2.0;
    for seed in 0..6 {
        let p = PlannerParams::default().with_seed(seed);
        let r = irc_plan(&s, &p, DEFAULT_SHRINK_FACTOR, DEFAULT_UNIFORM_MIX).unwrap();
        let stage1 = r.debug_log.as_ref().map_or(0, |l| l.tree().len());
        let crossing = r.path.as_ref().and_then(|p| {
            p.waypoints()
                .windows(2)
                .find(|w| (w[0].y - mid) * (w[1].y - mid) <= 0.0)
                .map(|w| w[0].x)
        });
        println!(
            "seed {seed}: stage-1 tree {stage1}, iterations {}, fallback {}, crosses the wall via {}",
            r.iterations_used,
            r.fallback,
            crossing.map_or("-".into(), nearest_gap)
        );
    }
}
