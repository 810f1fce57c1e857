// Edge-list files as replayable streams, and what a pass costs.
//
// Run with `cargo run --example edge_streams`.

use triad::edgelist::save_graph;
use triad::generators::gen_wheel;
use triad::sampling::{closure_check_pass, ClosureQuery};
use triad::EdgeStream;

pub fn run_example() -> triad::Result<()> {
    let dir = std::env::temp_dir().join(format!("triad-edge-streams-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| triad::Error::Input(e.to_string()))?;
    let path = dir.join("wheel.el");
    let (g, _) = gen_wheel(8)?;
    save_graph(&path, &g)?;

    // unseeded: file order, re-read from disk every pass
    let mut stream = EdgeStream::open(&path, None)?;
    let stats = stream.stats()?;
    println!("n={} m={} after {} pass", stats.n, stats.m, stream.passes());

    let first: Vec<_> = stream.collect_pass()?.into_iter().take(3).collect();
    println!("file order starts {first:?}");

    // seeded: one shuffle at open, then the same order on every pass
    let mut shuffled = EdgeStream::open(&path, Some(42))?;
    let a = shuffled.collect_pass()?;
    let b = shuffled.collect_pass()?;
    assert_eq!(a, b);
    println!("shuffled order starts {:?}", &a[..3]);

    // manual cursor
    stream.begin_pass()?;
    let mut hub_degree = 0;
    while let Some(e) = stream.next_edge()? {
        hub_degree += e.contains(0) as u32;
    }
    stream.end_pass()?;
    println!("hub degree {hub_degree}");

    // several questions, one pass
    let mut q = ClosureQuery::new();
    q.add_pair(1, 2);
    q.add_pair(1, 4);
    q.add_vertex(0);
    let ans = closure_check_pass(&mut stream, q)?;
    println!(
        "1-2 edge: {}, 1-4 edge: {}, deg(0) = {:?}; {} passes so far",
        ans.is_edge(1, 2),
        ans.is_edge(1, 4),
        ans.degree(0),
        stream.passes()
    );
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
