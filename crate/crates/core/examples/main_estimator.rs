// The six-pass estimator on a book and a wheel.
//
// The default constants ask for more samples than these graphs have
// edges, so `scale` shrinks them to a desk-sized run.
//
// Run with `cargo run --release --example main_estimator`.

use triad::estimator::{estimate, EstimatorConfig};
use triad::generators::{gen_book, gen_wheel};
use triad::EdgeStream;

pub fn run_example() -> triad::Result<()> {
    for (name, (g, truth)) in [("book(998)", gen_book(998)?), ("wheel(1001)", gen_wheel(1001)?)] {
        let mut stream = EdgeStream::from_graph(&g, Some(1));
        let stats = stream.stats()?;
        let cfg = EstimatorConfig {
            scale: 0.005,
            repetitions: 11,
            share_passes: true,
            seed: 1,
            ..EstimatorConfig::new(0.2, truth.triangles, truth.kappa)
        };
        let (est, report) = estimate(&mut stream, stats, &cfg)?;
        println!(
            "{name}: estimate {est:.1} vs T = {} ({} passes, r={}, ell<={}, s={}, peak {} items, flags {:?})",
            truth.triangles,
            report.passes,
            report.r,
            report.ell,
            report.s,
            report.stored_edges_peak,
            report.config.flags
        );
    }

    // with the full constants the sample would exceed m: count exactly
    let (g, truth) = gen_book(200)?;
    let mut stream = EdgeStream::from_graph(&g, None);
    let stats = stream.stats()?;
    let (est, report) = estimate(&mut stream, stats, &EstimatorConfig::new(0.2, truth.triangles, 2))?;
    println!("book(200) unscaled: {est} in {} pass, flags {:?}", report.passes, report.config.flags);
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
