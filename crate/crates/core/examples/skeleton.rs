//! Workspace skeleton of each scenario, as used by DR-RRT.

use guidespace::environments::all_scenarios;
use guidespace::guidance::compute_skeleton;
use guidespace::planners::SKELETON_CELL;

fn main() {
    for s in all_scenarios() {
        let sk = compute_skeleton(&s.environment, SKELETON_CELL);
        let total: f64 = sk.edges().iter().map(|e| e.length()).sum();
        println!(
            "{}: {} vertices, {} edges, {:.1} m of skeleton",
            s.name,
            sk.vertices().len(),
            sk.edges().len(),
            total
        );
        for (v, c) in sk.vertices().iter().zip(sk.vertex_clearance()) {
            println!("  vertex ({:.2}, {:.2}) clearance {:.2}", v.x, v.y, c);
        }
        let start = sk.nearest_point(s.start.position()).unwrap();
        println!("  start projects to ({:.2}, {:.2})", start.x, start.y);
    }
    // Machine-readable form of the last one.
    let sk = compute_skeleton(&all_scenarios()[0].environment, SKELETON_CELL);
    println!("{}", &sk.to_json()[..200.min(sk.to_json().len())]);
}
