//! In-memory undirected simple graphs and the exact degree-based oracles.
//!
//! The graph is stored in compressed sparse row form: every vertex owns a
//! sorted slice of neighbours. It is immutable once built, so all queries
//! take `&self` and may be issued from several threads at once.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vertex identifier in `[0, n)` for [`Graph`]; raw file id for streams.
pub type VertexId = u32;

/// An undirected edge in canonical form `u < v`.
///
/// The derived ordering (lexicographic on `(u, v)`) is the canonical edge
/// order used for every tie-break in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    /// Canonicalizes `{a, b}`; rejects self-loops.
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::Input(format!("self-loop at vertex {a}"))),
        }
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Packs the edge into one word, handy as a hash key.
    pub fn key(&self) -> u64 {
        (u64::from(self.u) << 32) | u64::from(self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Endpoint whose neighbourhood defines `N(e)`: the lower-degree one, with
/// ties going to `v` (the larger id).
pub fn anchor_of(e: Edge, deg_u: u64, deg_v: u64) -> VertexId {
    if deg_u < deg_v {
        e.u
    } else {
        e.v
    }
}

/// `d_e` together with the endpoint that defines `N(e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeDegree {
    pub value: u64,
    pub anchor: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    edges: Vec<Edge>,
    /// Original file ids, present when the graph was loaded with remapping.
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph on vertices `[0, n)`. Edges may be given in any
    /// orientation; duplicates, self-loops and out-of-range ids are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut canon = Vec::new();
        let mut seen = HashSet::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x as usize >= n {
                    return Err(Error::Input(format!("vertex {x} out of range for n = {n}")));
                }
            }
            let e = Edge::new(a, b)?;
            if !seen.insert(e) {
                return Err(Error::Input(format!("duplicate edge {e}")));
            }
            canon.push(e);
        }
        Ok(Self::from_canonical(n, canon))
    }

    /// Builds from edges already known to be canonical, distinct and in range.
    pub(crate) fn from_canonical(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        for e in &edges {
            targets[fill[e.u as usize]] = e.v;
            fill[e.u as usize] += 1;
            targets[fill[e.v as usize]] = e.u;
            fill[e.v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            edges,
            labels: None,
        }
    }

    pub(crate) fn with_labels(mut self, labels: Vec<u64>) -> Self {
        debug_assert_eq!(labels.len(), self.n());
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted neighbour list. Panics if `v` is out of range.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Original id of a dense vertex, if the graph was loaded from a file.
    pub fn label(&self, v: VertexId) -> u64 {
        match &self.labels {
            Some(l) => l[v as usize],
            None => u64::from(v),
        }
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        if a as usize >= self.n() || b as usize >= self.n() {
            return false;
        }
        let (x, y) = if self.deg(a) <= self.deg(b) { (a, b) } else { (b, a) };
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    #[inline]
    pub(crate) fn deg(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        if v as usize >= self.n() {
            return Err(Error::Input(format!("vertex {v} out of range for n = {}", self.n())));
        }
        Ok(self.deg(v))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as VertexId).map(|v| self.deg(v)).max().unwrap_or(0)
    }

    /// `d_e = min(d_u, d_v)` and the anchor endpoint of `N(e)`.
    pub fn edge_degree(&self, e: Edge) -> Result<EdgeDegree> {
        if !self.has_edge(e.u, e.v) {
            return Err(Error::Input(format!("edge {e} is not in the graph")));
        }
        Ok(self.edge_degree_unchecked(e))
    }

    pub(crate) fn edge_degree_unchecked(&self, e: Edge) -> EdgeDegree {
        let (du, dv) = (self.deg(e.u) as u64, self.deg(e.v) as u64);
        EdgeDegree {
            value: du.min(dv),
            anchor: anchor_of(e, du, dv),
        }
    }

    /// `d_E`, the sum of edge degrees. Never exceeds `2 * m * degeneracy`.
    pub fn sum_edge_degrees(&self) -> u64 {
        self.edges
            .iter()
            .map(|e| self.deg(e.u).min(self.deg(e.v)) as u64)
            .sum()
    }

    /// Exact degeneracy by min-degree peeling with bucket queues, O(n + m).
    pub fn degeneracy(&self) -> usize {
        self.peeling_order().1
    }

    /// Min-degree peeling order and the largest degree observed at removal.
    pub fn peeling_order(&self) -> (Vec<VertexId>, usize) {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n as VertexId).map(|v| self.deg(v)).collect();
        let max_deg = deg.iter().copied().max().unwrap_or(0);

        // bin sort by degree, keeping each vertex's slot so moves are O(1)
        let mut bin_start = vec![0usize; max_deg + 2];
        for &d in &deg {
            bin_start[d + 1] += 1;
        }
        for d in 1..bin_start.len() {
            bin_start[d] += bin_start[d - 1];
        }
        let mut order = vec![0 as VertexId; n];
        let mut pos = vec![0usize; n];
        let mut next = bin_start.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            order[pos[v]] = v as VertexId;
            next[deg[v]] += 1;
        }

        let mut kappa = 0;
        for i in 0..n {
            let v = order[i];
            kappa = kappa.max(deg[v as usize]);
            for &w in self.neighbors(v) {
                let w = w as usize;
                if deg[w] > deg[v as usize] {
                    let dw = deg[w];
                    let first = bin_start[dw].max(i + 1);
                    let u = order[first];
                    if u as usize != w {
                        order.swap(pos[w], first);
                        pos[u as usize] = pos[w];
                        pos[w] = first;
                    }
                    bin_start[dw] = first + 1;
                    deg[w] -= 1;
                }
            }
        }
        (order, kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(k: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..k as u32 {
            for b in a + 1..k as u32 {
                edges.push((a, b));
            }
        }
        Graph::from_edges(k, edges).unwrap()
    }

    // hub 0, rim 1..=4
    fn wheel5() -> Graph {
        let edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)];
        Graph::from_edges(5, edges).unwrap()
    }

    /// Degeneracy as max over subgraphs of min degree, by trying every vertex subset.
    fn degeneracy_brute(g: &Graph) -> usize {
        let n = g.n();
        let mut best = 0;
        for mask in 1u32..(1 << n) {
            let min = (0..n)
                .filter(|v| mask >> v & 1 == 1)
                .map(|v| g.neighbors(v as u32).iter().filter(|&&w| mask >> w & 1 == 1).count())
                .min()
                .unwrap();
            best = best.max(min);
        }
        best
    }

    #[test]
    fn degrees() {
        assert_eq!(complete(3).degree(0).unwrap(), 2);
        assert_eq!(wheel5().degree(0).unwrap(), 4);
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.degree(2).unwrap(), 0);
        assert!(matches!(g.degree(3), Err(Error::Input(_))));
    }

    #[test]
    fn edge_degrees_and_anchor() {
        let k3 = complete(3);
        assert_eq!(k3.edge_degree(Edge::new(0, 1).unwrap()).unwrap().value, 2);
        let w = wheel5();
        let spoke = w.edge_degree(Edge::new(0, 3).unwrap()).unwrap();
        assert_eq!(spoke, EdgeDegree { value: 3, anchor: 3 });
        let star = Graph::from_edges(6, (1..6).map(|x| (0, x))).unwrap();
        assert_eq!(star.edge_degree(Edge::new(0, 4).unwrap()).unwrap().value, 1);
        // equal degrees: the larger endpoint anchors
        assert_eq!(k3.edge_degree(Edge::new(0, 2).unwrap()).unwrap().anchor, 2);
        assert!(w.edge_degree(Edge::new(1, 3).unwrap()).is_err());
    }

    #[test]
    fn sum_of_edge_degrees() {
        assert_eq!(complete(3).sum_edge_degrees(), 6);
        assert_eq!(complete(4).sum_edge_degrees(), 18);
        assert_eq!(wheel5().m(), 8);
        assert_eq!(wheel5().sum_edge_degrees(), 24);
    }

    #[test]
    fn degeneracy_small_families() {
        assert_eq!(complete(4).degeneracy(), 3);
        assert_eq!(complete(1).degeneracy(), 0);
        assert_eq!(Graph::from_edges(0, []).unwrap().degeneracy(), 0);
        let path = Graph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        assert_eq!(path.degeneracy(), 1);
        let mut kpp = Vec::new();
        for a in 0..4 {
            for b in 4..8 {
                kpp.push((a, b));
            }
        }
        assert_eq!(Graph::from_edges(8, kpp).unwrap().degeneracy(), 4);
        assert_eq!(wheel5().degeneracy(), 3);
    }

    #[test]
    fn peeling_matches_subset_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let p: f64 = rng.gen_range(0.1..0.9);
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if rng.gen_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            assert_eq!(g.degeneracy(), degeneracy_brute(&g));
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = wheel5();
        let total: usize = (0..5).map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(total, 2 * g.m());
        for v in 0..5 {
            for &w in g.neighbors(v) {
                assert!(g.neighbors(w).contains(&v));
            }
        }
    }
}
