//! The trivial guiding spaces and a tube guidance, plugged into the same
//! RRT loop.

use guidespace::environments::build_trap;
use guidespace::guidance::{identity_guidance, null_guidance, tube_guidance, GuidingSpace};
use guidespace::planners::{guided_rrt, rrt_plan, PlannerParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(name: &str, g: &dyn GuidingSpace, s: &guidespace::BenchmarkScenario, p: &PlannerParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let r = guided_rrt(s, p, g, &mut rng).unwrap();
    println!(
        "{name:<22} success={} iterations={:>5} tree={:>4}",
        r.success,
        r.iterations_used,
        r.log.tree().len()
    );
}

fn main() {
    let s = build_trap();
    let p = PlannerParams::default().with_seed(1);
    let reference = rrt_plan(&s, &p).unwrap().path.expect("trap is solvable");
    let bounds = s.environment.bounds;

    report("null (uniform)", &null_guidance(bounds), &s, &p);
    report(
        "identity (known path)",
        &identity_guidance(&reference),
        &s,
        &p,
    );
    for mix in [0.5, 0.1] {
        let tube = tube_guidance(&reference, p.step, mix, bounds).unwrap();
        report(&format!("tube, uniform mix {mix}"), &tube, &s, &p);
    }
}
