//! Footprint and edge checks in the Simple Passage corridor.
//!
//! The robot fits through lengthwise only; across the corridor it is 0.6
//! wide in a 0.5 gap.

use std::f64::consts::FRAC_PI_2;

use guidespace::environments::{build_simple_passage, passage_center};
use guidespace::geometry::{config_distance, footprint, is_edge_free, is_free};

fn main() {
    let s = build_simple_passage();
    let env = &s.environment;
    for offset in [0.0, 0.2, 0.4, 0.6, FRAC_PI_2] {
        let q = passage_center(offset);
        let corners: Vec<String> = footprint(&q, &s.robot)
            .vertices()
            .iter()
            .map(|v| format!("({:.2},{:.2})", v.x, v.y))
            .collect();
        println!(
            "offset {offset:.2} rad: free={} footprint {}",
            is_free(&q, env, &s.robot),
            corners.join(" ")
        );
    }
    let direct = is_edge_free(&s.start, &s.goal, env, &s.robot, 0.05);
    println!(
        "start -> goal straight edge ({:.2} long) free: {direct}",
        config_distance(&s.start, &s.goal)
    );
}
