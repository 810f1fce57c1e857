//! Three-pass estimator for a setting where vertex degrees are free.
//!
//! One instance picks an edge `e` with probability `d_e / d_E`, picks a
//! uniform neighbour `w` of `e`'s anchor, and returns `d_E` when `{e, w}`
//! closes a triangle whose lowest-degree edge is `e`, zero otherwise. The
//! instance is unbiased with variance at most `d_E T`. Any number of
//! instances share the same three passes.

use std::cell::Cell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{anchor_of, Edge, Graph, VertexId};
use crate::sampling::{ClosureQuery, NeighborBank, NeighborRequest, ReservoirBank, Role, SubstreamKey, Want};
use crate::stream::EdgeStream;
use crate::triangles::Triangle;

pub const IDEAL_PASSES: u64 = 3;

/// Exact vertex degrees of the streamed graph, available without a pass.
pub trait DegreeOracle {
    fn degree(&self, v: VertexId) -> u64;

    /// `d_E`, the sum of `min(d_u, d_v)` over all edges.
    fn sum_edge_degrees(&self) -> u64;

    fn edge_degree(&self, e: Edge) -> (u64, VertexId) {
        let (du, dv) = (self.degree(e.u), self.degree(e.v));
        (du.min(dv), anchor_of(e, du, dv))
    }
}

/// Oracle backed by an in-memory graph; counts the queries it answers.
pub struct GraphOracle<'g> {
    graph: &'g Graph,
    queries: Cell<u64>,
}

impl<'g> GraphOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        GraphOracle {
            graph,
            queries: Cell::new(0),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }
}

impl DegreeOracle for GraphOracle<'_> {
    fn degree(&self, v: VertexId) -> u64 {
        self.queries.set(self.queries.get() + 1);
        if (v as usize) < self.graph.n() {
            self.graph.neighbors(v).len() as u64
        } else {
            0
        }
    }

    fn sum_edge_degrees(&self) -> u64 {
        self.graph.sum_edge_degrees()
    }
}

/// Edge of `t` with the smallest `d_e`, ties to the canonically first edge.
pub fn lowest_degree_edge(t: &Triangle, oracle: &impl DegreeOracle) -> Edge {
    t.edges()
        .into_iter()
        .min_by_key(|&e| (oracle.edge_degree(e).0, e))
        .expect("three edges")
}

/// The value of one instance that picked `e` and then `w`.
pub fn ideal_outcome(
    e: Edge,
    w: VertexId,
    is_edge: impl Fn(VertexId, VertexId) -> bool,
    oracle: &impl DegreeOracle,
    d_total: u64,
) -> f64 {
    let (_, anchor) = oracle.edge_degree(e);
    let other = e.other(anchor);
    if e.contains(w) || !is_edge(other, w) {
        return 0.0;
    }
    if lowest_degree_edge(&Triangle::new(e.u, e.v, w), oracle) == e {
        d_total as f64
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealRun {
    pub estimate: f64,
    pub instances: usize,
    pub groups: usize,
    pub d_e_total: u64,
    pub passes: u64,
    pub seed: u64,
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// `count` independent instances on three shared passes.
pub fn ideal_instances(
    stream: &mut EdgeStream,
    oracle: &impl DegreeOracle,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let d_total = oracle.sum_edge_degrees();
    let key = SubstreamKey::new(seed, Role::IdealEdge);
    let mut bank: ReservoirBank<Edge> = ReservoirBank::new((0..count as u64).map(|i| key.slot(i)).collect());
    stream.pass(|e| {
        let (d, _) = oracle.edge_degree(e);
        bank.offer(&e, d);
    })?;
    let picks: Vec<Edge> = bank
        .into_picks()
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Input("the stream has no edges".into()))?;

    let requests = picks
        .iter()
        .map(|&e| NeighborRequest {
            edge: e,
            anchor: oracle.edge_degree(e).1,
            want: Want::Samples(1),
        })
        .collect();
    let mut neighbors = NeighborBank::new(requests, SubstreamKey::new(seed, Role::IdealNeighbor));
    stream.pass(|e| neighbors.observe(e))?;
    let ws: Vec<VertexId> = neighbors.finish().into_iter().map(|w| w[0]).collect();

    let mut query = ClosureQuery::new();
    for (e, &w) in picks.iter().zip(&ws) {
        query.add_pair(e.other(oracle.edge_degree(*e).1), w);
    }
    stream.pass(|e| query.observe(e))?;
    let closed = query.finish();

    Ok(picks
        .iter()
        .zip(&ws)
        .map(|(&e, &w)| ideal_outcome(e, w, |a, b| closed.is_edge(a, b), oracle, d_total))
        .collect())
}

/// A single instance.
pub fn ideal_estimate_once(stream: &mut EdgeStream, oracle: &impl DegreeOracle, seed: u64) -> Result<f64> {
    Ok(ideal_instances(stream, oracle, 1, seed)?[0])
}

/// Median of `groups` means of `ceil(c d_E / (eps^2 T_hat))` instances each.
pub fn ideal_estimate_grouped(
    stream: &mut EdgeStream,
    oracle: &impl DegreeOracle,
    epsilon: f64,
    t_hat: u64,
    c: f64,
    groups: usize,
    seed: u64,
) -> Result<IdealRun> {
    if t_hat == 0 {
        return Err(Error::Config("T_hat must be at least 1".into()));
    }
    if !(epsilon > 0.0) || groups == 0 {
        return Err(Error::Config("epsilon must be positive and groups at least 1".into()));
    }
    let d_total = oracle.sum_edge_degrees();
    let per_group = ((c * d_total as f64) / (epsilon * epsilon * t_hat as f64)).ceil().max(1.0) as usize;
    let start = stream.passes();
    let values = ideal_instances(stream, oracle, per_group * groups, seed)?;
    let means: Vec<f64> = values
        .chunks(per_group)
        .map(|g| g.iter().sum::<f64>() / g.len() as f64)
        .collect();
    Ok(IdealRun {
        estimate: crate::estimator::median(&means),
        instances: values.len(),
        groups,
        d_e_total: d_total,
        passes: stream.passes() - start,
        seed,
        values,
    })
}

/// [`ideal_estimate_grouped`] with `c = 4` and seven groups.
pub fn ideal_estimate(
    stream: &mut EdgeStream,
    oracle: &impl DegreeOracle,
    epsilon: f64,
    t_hat: u64,
    seed: u64,
) -> Result<IdealRun> {
    ideal_estimate_grouped(stream, oracle, epsilon, t_hat, 4.0, 7, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    /// Exact E[X] by walking every (edge, neighbour) outcome with rational weights.
    fn exact_expectation(g: &Graph) -> Ratio<u64> {
        let oracle = GraphOracle::new(g);
        let d_total = g.sum_edge_degrees();
        let mut sum = Ratio::from_integer(0);
        for &e in g.edges() {
            let (d, anchor) = oracle.edge_degree(e);
            for &w in g.neighbors(anchor) {
                let x = ideal_outcome(e, w, |a, b| g.has_edge(a, b), &oracle, d_total) as u64;
                sum += Ratio::new(d, d_total) * Ratio::new(1, d) * x;
            }
        }
        sum
    }

    #[test]
    fn k3_outcomes() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(exact_expectation(&g), Ratio::from_integer(1));
        let oracle = GraphOracle::new(&g);
        let mut s = EdgeStream::from_graph(&g, None);
        let xs = ideal_instances(&mut s, &oracle, 60_000, 3).unwrap();
        assert_eq!(s.passes(), 3);
        assert!(xs.iter().all(|&x| x == 0.0 || x == 6.0));
        let p6 = xs.iter().filter(|&&x| x == 6.0).count() as f64 / xs.len() as f64;
        assert!((p6 - 1.0 / 6.0).abs() < 0.01, "{p6}");
    }

    #[test]
    fn exact_expectation_is_t_on_small_graphs() {
        let cases: Vec<(Graph, u64)> = vec![
            (graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 4),
            (graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]), 2),
            (graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (1, 4)]), 4),
            (graph(4, &[(0, 1), (1, 2), (2, 3)]), 0),
        ];
        for (g, t) in cases {
            assert_eq!(exact_expectation(&g), Ratio::from_integer(t));
        }
    }

    #[test]
    fn path_is_always_zero() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let oracle = GraphOracle::new(&g);
        let mut s = EdgeStream::from_graph(&g, None);
        let run = ideal_estimate(&mut s, &oracle, 0.5, 1, 1).unwrap();
        assert_eq!(run.estimate, 0.0);
        assert_eq!(run.passes, 3);
        assert!(oracle.queries() > 0);
    }

    #[test]
    fn k3_grouped_trials() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let oracle = GraphOracle::new(&g);
        let good = (0..30)
            .filter(|&seed| {
                let mut s = EdgeStream::from_graph(&g, Some(seed));
                let est = ideal_estimate(&mut s, &oracle, 0.5, 1, seed).unwrap().estimate;
                (0.5..=1.5).contains(&est)
            })
            .count();
        assert!(good >= 20, "{good}/30");
    }

    #[test]
    fn config_and_input_errors() {
        let g = graph(3, &[(0, 1)]);
        let oracle = GraphOracle::new(&g);
        let mut s = EdgeStream::from_graph(&g, None);
        assert!(matches!(ideal_estimate(&mut s, &oracle, 0.2, 0, 0), Err(Error::Config(_))));
        let empty = graph(2, &[]);
        let oracle = GraphOracle::new(&empty);
        let mut s = EdgeStream::from_graph(&empty, None);
        assert!(matches!(ideal_estimate_once(&mut s, &oracle, 0), Err(Error::Input(_))));
    }
}
