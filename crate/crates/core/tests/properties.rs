use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;
use triad::assignment::{assignment, AssignmentParams, AssignmentTable, TriangleRecord, WedgeTally};
use triad::edgelist::{parse_graph, write_edges};
use triad::estimator::{estimate, EstimatorConfig, SampledEdgeSet};
use triad::ideal::{ideal_outcome, DegreeOracle, GraphOracle};
use triad::triangles::{list_triangles, per_edge_triangles, triangles_exact_cn, triangles_exact_naive};
use triad::{Edge, EdgeStream, Graph};

fn graph_strategy(max_n: u32) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..(n as usize * 3)).prop_map(move |pairs| {
            let edges: BTreeSet<(u32, u32)> =
                pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
            Graph::from_edges(n as usize, edges).unwrap()
        })
    })
}

fn common(g: &Graph, e: Edge) -> u64 {
    g.neighbors(e.u).iter().filter(|&&w| g.has_edge(e.v, w)).count() as u64
}

fn exact_table(g: &Graph, params: &AssignmentParams) -> AssignmentTable {
    let mut table = AssignmentTable::new();
    for t in list_triangles(g) {
        let rec = TriangleRecord { triangle: t, degrees: t.0.map(|v| g.neighbors(v).len() as u64), origin: 0 };
        let exact = |e: Edge| Some(WedgeTally { samples: 0, closed: common(g, e), exhaustive: true });
        assignment(&rec, exact, params, &mut table).unwrap();
    }
    table
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn oracles_agree(g in graph_strategy(25)) {
        let t = triangles_exact_naive(&g);
        prop_assert_eq!(t, triangles_exact_cn(&g));
        prop_assert_eq!(list_triangles(&g).len() as u64, t);
        let per_edge: u64 = per_edge_triangles(&g).iter().map(|p| p.t_e).sum();
        prop_assert_eq!(per_edge, 3 * t);
    }

    #[test]
    fn degeneracy_bounds(g in graph_strategy(25)) {
        let kappa = g.degeneracy() as u64;
        let m = g.m() as u64;
        prop_assert!(kappa <= g.max_degree() as u64);
        prop_assert!(g.sum_edge_degrees() <= 2 * m * kappa);
        prop_assert!(triangles_exact_cn(&g) <= 2 * m * kappa);
        let (order, k2) = g.peeling_order();
        prop_assert_eq!(k2 as u64, kappa);
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..g.n() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_roundtrip(g in graph_strategy(25)) {
        let mut buf = Vec::new();
        write_edges(&mut buf, g.edges()).unwrap();
        let back = parse_graph(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back.m(), g.m());
        prop_assert_eq!(triangles_exact_cn(&back), triangles_exact_cn(&g));
        prop_assert_eq!(back.degeneracy(), g.degeneracy());
    }

    #[test]
    fn every_pass_replays(g in graph_strategy(20), seed in any::<u64>()) {
        let mut s = EdgeStream::from_graph(&g, Some(seed));
        let first = s.collect_pass().unwrap();
        let second = s.collect_pass().unwrap();
        prop_assert_eq!(&first, &second);
        let mut sorted = first;
        sorted.sort();
        prop_assert_eq!(sorted.as_slice(), g.edges());
    }

    #[test]
    fn ideal_expectation_is_exact(g in graph_strategy(6)) {
        let oracle = GraphOracle::new(&g);
        let d_total = oracle.sum_edge_degrees();
        let mut sum = Ratio::from_integer(0u64);
        for &e in g.edges() {
            let (_, anchor) = oracle.edge_degree(e);
            for &w in g.neighbors(anchor) {
                let x = ideal_outcome(e, w, |a, b| g.has_edge(a, b), &oracle, d_total) as u64;
                sum += Ratio::new(1, d_total) * x;
            }
        }
        prop_assert_eq!(sum, Ratio::from_integer(triangles_exact_cn(&g)));
    }

    #[test]
    fn fixed_sample_expectation(
        g in graph_strategy(6),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..8),
        eps in 0.05f64..0.45,
    ) {
        prop_assume!(g.m() > 0);
        let t = triangles_exact_cn(&g).max(1);
        let params = AssignmentParams { m: g.m() as u64, epsilon: eps, t_hat: t, kappa_hat: g.degeneracy().max(1) as u64 };
        let table = exact_table(&g, &params);
        let counts = table.assigned_counts();
        let edges: Vec<Edge> = picks.iter().map(|i| g.edges()[i.index(g.m())]).collect();
        let set = SampledEdgeSet::new(edges.clone(), |v| g.neighbors(v).len() as u64);
        let mut ey = Ratio::from_integer(0u64);
        for i in 0..edges.len() {
            let d = set.degrees[i];
            for &w in g.neighbors(d.anchor) {
                if set.draw_indicator(i, w, |a, b| g.has_edge(a, b), &table) {
                    ey += Ratio::new(1, set.d_r);
                }
            }
        }
        let tau_r: u64 = edges.iter().map(|e| counts.get(e).copied().unwrap_or(0)).sum();
        prop_assert_eq!(ey, Ratio::new(tau_r, set.d_r));
    }

    #[test]
    fn assignment_is_unique_and_sticky(g in graph_strategy(12), closed in prop::collection::vec(0u64..6, 3)) {
        let t = triangles_exact_cn(&g);
        prop_assume!(t > 0);
        let params = AssignmentParams { m: g.m() as u64, epsilon: 0.25, t_hat: t, kappa_hat: g.degeneracy() as u64 };
        let mut table = AssignmentTable::new();
        for tri in list_triangles(&g) {
            let rec = TriangleRecord { triangle: tri, degrees: tri.0.map(|v| g.neighbors(v).len() as u64), origin: 0 };
            let edges = tri.edges();
            let noisy = |e: Edge| {
                let k = edges.iter().position(|&x| x == e).unwrap();
                Some(WedgeTally { samples: 6, closed: closed[k], exhaustive: false })
            };
            let first = assignment(&rec, noisy, &params, &mut table).unwrap();
            let again = assignment(&rec, |_| None, &params, &mut table).unwrap();
            prop_assert_eq!(first, again);
            if let Some(e) = first {
                prop_assert!(tri.contains_edge(e));
            }
        }
        prop_assert_eq!(table.len() as u64, t);
    }

    #[test]
    fn estimates_replay(g in graph_strategy(30), seed in 0u64..1000) {
        prop_assume!(g.m() > 0);
        let run = || {
            let mut s = EdgeStream::from_graph(&g, Some(seed));
            let stats = s.stats().unwrap();
            let cfg = EstimatorConfig { scale: 0.001, seed, exact_fallback: false, repetitions: 3, ..EstimatorConfig::new(0.2, 1, 3) };
            estimate(&mut s, stats, &cfg).unwrap()
        };
        let (a, ra) = run();
        let (b, rb) = run();
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert_eq!(ra, rb);
        prop_assert!(a >= 0.0);
        if triangles_exact_cn(&g) == 0 {
            prop_assert_eq!(a, 0.0);
        }
    }
}
