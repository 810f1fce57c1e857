// Peak storage against `m kappa / T` across book sizes.
//
// Books keep `m kappa / T` near 4 however large they get, so the peak
// storage should only grow with the `log n` factor. A single run is noisy
// (sampling the spine edge inflates everything downstream), so the table
// shows the mean over seeds.
//
// Run with `cargo run --release --example space_scaling`.

use triad::estimator::{estimate, EstimatorConfig};
use triad::generators::gen_book;
use triad::EdgeStream;

pub fn run_example() -> triad::Result<()> {
    println!("{:>6} {:>6} {:>8} {:>10} {:>8}", "k", "m", "mean peak", "mk/T", "ratio");
    for k in [250, 500, 1000, 2000] {
        let (g, truth) = gen_book(k)?;
        let seeds = 0..20u64;
        let mut total = 0;
        for seed in seeds.clone() {
            let mut stream = EdgeStream::from_graph(&g, Some(seed));
            let stats = stream.stats()?;
            let cfg = EstimatorConfig {
                scale: 0.005,
                seed,
                ..EstimatorConfig::new(0.2, truth.triangles, truth.kappa)
            };
            total += estimate(&mut stream, stats, &cfg)?.1.stored_edges_peak;
        }
        let peak = total as f64 / seeds.count() as f64;
        let mk_t = (truth.m * truth.kappa) as f64 / truth.triangles as f64;
        println!(
            "{k:>6} {:>6} {peak:>8.0} {mk_t:>10.2} {:>8.1}",
            truth.m,
            peak / mk_t
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
