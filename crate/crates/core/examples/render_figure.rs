//! Sample-distribution figures straight from in-memory runs.
//!
//! Usage: `cargo run --release --example render_figure [out_dir]`

use std::path::PathBuf;

use guidespace::bench::{render_svg, PlannerSpec, RenderLayers};
use guidespace::environments::{build_cup, build_simple_passage, build_trap};
use guidespace::metrics::MetricSettings;
use guidespace::planners::{PlannerParams, DEFAULT_REGION_RADIUS};

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("guidespace-figures"));
    std::fs::create_dir_all(&out).unwrap();
    let metric = MetricSettings::default();
    let figures = [
        (
            build_simple_passage(),
            PlannerSpec::Drrrt {
                region_radius: DEFAULT_REGION_RADIUS,
            },
        ),
        (build_trap(), PlannerSpec::default_all()[3]),
        (build_cup(), PlannerSpec::default_all()[2]),
    ];
    for (s, planner) in figures {
        let mut layers = RenderLayers::default();
        for seed in 0..15 {
            let p = PlannerParams::default().with_seed(seed);
            let r = planner.plan(&s, &p).unwrap();
            layers.tree.extend(r.log.tree());
            layers.expansion.extend(r.log.expansion());
            layers.paths.extend(r.path);
            let base = PlannerSpec::Rrt.plan(&s, &p).unwrap();
            layers.baseline.extend(base.log.tree());
        }
        let grid = metric.grid(s.environment.bounds).unwrap();
        let file = out.join(format!("{}_{}.svg", s.name, planner.kind_name()));
        std::fs::write(&file, render_svg(&s, &layers, &grid, metric.delta)).unwrap();
        println!("{}", file.display());
    }
}
