// The three-pass estimator that may ask for any vertex degree for free.
//
// Run with `cargo run --release --example ideal_estimator`.

use triad::generators::gen_wheel;
use triad::ideal::{ideal_estimate, ideal_instances, GraphOracle};
use triad::EdgeStream;

pub fn run_example() -> triad::Result<()> {
    let (g, truth) = gen_wheel(101)?;
    let oracle = GraphOracle::new(&g);
    let d_e = g.sum_edge_degrees() as f64;
    let t = truth.triangles as f64;

    let mut stream = EdgeStream::from_graph(&g, Some(3));
    let xs = ideal_instances(&mut stream, &oracle, 20_000, 3)?;
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    println!("20000 instances: mean {mean:.1} (T = {t}), variance {var:.0} <= d_E T = {:.0}", d_e * t);

    for seed in 0..5 {
        let mut stream = EdgeStream::from_graph(&g, Some(seed));
        let run = ideal_estimate(&mut stream, &oracle, 0.25, truth.triangles, seed)?;
        println!(
            "seed {seed}: estimate {:.1} from {} instances in {} passes",
            run.estimate, run.instances, run.passes
        );
    }
    println!("{} degree queries", oracle.queries());
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
