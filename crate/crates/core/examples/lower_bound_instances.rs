// Disjointness instances: triangle-free when the strings are disjoint,
// `p^2 q` triangles per shared index otherwise.
//
// Run with `cargo run --example lower_bound_instances`.

use triad::generators::{gen_lb_instance, LbInstanceSpec, LbKind};
use triad::triangles::triangles_exact_cn;

pub fn run_example() -> triad::Result<()> {
    for (kind, shared) in [(LbKind::Yes, 0), (LbKind::No, 1), (LbKind::No, 3)] {
        let spec = LbInstanceSpec::random(4, 4, 30, kind, shared.max(1), 5)?;
        let (g, truth) = gen_lb_instance(&spec)?;
        assert_eq!(truth.triangles, triangles_exact_cn(&g));
        println!(
            "{kind:?} with {} shared: n={} m={} T={} kappa={}",
            spec.shared(),
            truth.n,
            truth.m,
            truth.triangles,
            truth.kappa
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
