// Exact triangle counts, degeneracy and the heavy/costly edge classes.
//
// Run with `cargo run --example exact_oracles`.

use triad::generators::{gen_book, gen_erdos_renyi, gen_wheel};
use triad::triangles::{classify_edges, per_edge_triangles, triangles_exact_cn, triangles_exact_naive};

pub fn run_example() -> triad::Result<()> {
    let (wheel, _) = gen_wheel(12)?;
    let (book, _) = gen_book(30)?;
    let er = gen_erdos_renyi(50, 0.2, 7)?;

    for (name, g) in [("wheel(12)", &wheel), ("book(30)", &book), ("G(50, 0.2)", &er)] {
        let naive = triangles_exact_naive(g);
        let fast = triangles_exact_cn(g);
        assert_eq!(naive, fast);
        let kappa = g.degeneracy() as u64;
        let d_e = g.sum_edge_degrees();
        println!(
            "{name:>11}: n={} m={} T={fast} kappa={kappa} d_E={d_e} (2 m kappa = {})",
            g.n(),
            g.m(),
            2 * g.m() as u64 * kappa
        );
    }

    // the spine of a book is in every triangle, each page edge in one
    let profiles = per_edge_triangles(&book);
    let spine = profiles.iter().find(|p| p.edge.u == 0 && p.edge.v == 1).unwrap();
    println!("book spine: d_e={} t_e={}", spine.d_e, spine.t_e);

    let t = triangles_exact_cn(&book);
    let classes = classify_edges(&book, 0.1, t, book.degeneracy() as u64)?;
    println!(
        "book(30) at eps=0.1: {} heavy and {} costly triangles out of {t}",
        classes.heavy_triangles, classes.costly_triangles
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> triad::Result<()> {
    run_example()
}
