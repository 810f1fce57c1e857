// One-pass samplers: uniform edges, weighted draws, neighbours.
//
// Run with `cargo run --example samplers`.

use std::collections::BTreeMap;

use triad::generators::gen_wheel;
use triad::sampling::{
    neighbor_sample_pass, uniform_edge_sample, weighted_pick, NeighborRequest, Role, SubstreamKey, Want,
};
use triad::EdgeStream;

pub fn run_example() -> triad::Result<()> {
    let (g, _) = gen_wheel(6)?;
    let mut stream = EdgeStream::from_graph(&g, None);

    let sample = uniform_edge_sample(&mut stream, 10_000, 1)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for e in &sample {
        *counts.entry(e.to_string()).or_default() += 1;
    }
    println!("10000 uniform edges of a 10-edge wheel: {counts:?}");

    let picks = weighted_pick(&[1, 2, 7], 10_000, SubstreamKey::new(1, Role::DegreePick))?;
    let heavy = picks.iter().filter(|&&i| i == 2).count();
    println!("weight 7 of 10 picked {:.3} of the time", heavy as f64 / 1e4);

    let hub = g.edges()[0];
    let requests = vec![
        NeighborRequest { edge: hub, anchor: 0, want: Want::Samples(5) },
        NeighborRequest { edge: hub, anchor: hub.v, want: Want::All },
    ];
    let got = neighbor_sample_pass(&mut stream, requests, SubstreamKey::new(1, Role::Neighbor))?;
    println!("5 neighbours of the hub: {:?}", got[0]);
    println!("all neighbours of {}: {:?}", hub.v, got[1]);
    println!("{} passes for all of it", stream.passes());
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
