//! Writes the three benchmark scenarios as JSON and reads them back.
//!
//! Usage: `cargo run --example export_scenarios [out_dir]`

use std::path::PathBuf;

use guidespace::environments::{all_scenarios, load_environment, save_environment};

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("guidespace-scenarios"));
    std::fs::create_dir_all(&out).expect("create output directory");
    for s in all_scenarios() {
        let file = out.join(format!("{}.json", s.name));
        save_environment(&s, &file).expect("save");
        let back = load_environment(&file).expect("load");
        assert_eq!(back, s);
        let parts = s.environment.obstacles.len();
        println!(
            "{:<15} {} convex parts -> {}",
            s.name,
            parts,
            file.display()
        );
    }
}
