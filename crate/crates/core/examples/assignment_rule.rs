// Charging each triangle to at most one of its edges.
//
// With exact wedge counts the rule picks the edge in the fewest
// triangles, skipping edges whose degree is too large to sample and
// leaving the triangle unassigned when even the best edge is too heavy.
//
// Run with `cargo run --example assignment_rule`.

use triad::assignment::{assignment, AssignmentParams, AssignmentTable, TriangleRecord, WedgeTally};
use triad::generators::gen_book;
use triad::triangles::{for_each_triangle, triangles_exact_cn};

pub fn run_example() -> triad::Result<()> {
    let (g, truth) = gen_book(100)?;
    let params = AssignmentParams {
        m: g.m() as u64,
        epsilon: 0.5,
        t_hat: triangles_exact_cn(&g),
        kappa_hat: truth.kappa,
    };
    println!(
        "degree cutoff {:.1}, reject above {:.1}",
        params.degree_cutoff(),
        params.reject_above()
    );

    let mut table = AssignmentTable::new();
    let mut result = Ok(());
    for_each_triangle(&g, |t| {
        let record = TriangleRecord {
            triangle: t,
            degrees: t.0.map(|v| g.neighbors(v).len() as u64),
            origin: 0,
        };
        let exact = |e: triad::Edge| {
            let common = g.neighbors(e.u).iter().filter(|w| g.has_edge(e.v, **w)).count() as u64;
            Some(WedgeTally { samples: 0, closed: common, exhaustive: true })
        };
        if let Err(e) = assignment(&record, exact, &params, &mut table) {
            result = Err(e);
        }
    });
    result?;

    let counts = table.assigned_counts();
    let unassigned = table.iter().filter(|(_, e)| e.is_none()).count();
    println!(
        "{} triangles: {} edges charged, at most {} each, {unassigned} unassigned",
        table.len(),
        counts.len(),
        counts.values().max().copied().unwrap_or(0)
    );
    let (t, e) = table.iter().next().unwrap();
    println!("first: {t} -> {e:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
