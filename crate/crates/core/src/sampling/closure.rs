use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::graph::{Edge, VertexId};
use crate::stream::EdgeStream;

/// Vertex pairs to test for adjacency and vertices whose degrees to count,
/// answered exactly by one pass.
#[derive(Clone, Debug, Default)]
pub struct ClosureQuery {
    pairs: HashMap<Edge, bool>,
    degrees: HashMap<VertexId, u64>,
}

impl ClosureQuery {
    pub fn new() -> Self {
        Self::default()
    }

    /// Queues `{a, b}`. A pair with `a == b` is never an edge and is not stored.
    pub fn add_pair(&mut self, a: VertexId, b: VertexId) {
        if let Ok(e) = Edge::new(a, b) {
            self.pairs.entry(e).or_insert(false);
        }
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.degrees.entry(v).or_insert(0);
    }

    pub fn observe(&mut self, e: Edge) {
        if let Some(hit) = self.pairs.get_mut(&e) {
            *hit = true;
        }
        for x in [e.u, e.v] {
            if let Some(d) = self.degrees.get_mut(&x) {
                *d += 1;
            }
        }
    }

    pub fn stored_items(&self) -> usize {
        self.pairs.len() + self.degrees.len()
    }

    pub fn finish(self) -> ClosureAnswer {
        ClosureAnswer {
            present: self.pairs.into_iter().filter(|&(_, hit)| hit).map(|(e, _)| e).collect(),
            degrees: self.degrees,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClosureAnswer {
    present: HashSet<Edge>,
    degrees: HashMap<VertexId, u64>,
}

impl ClosureAnswer {
    /// Whether a queried pair is an edge. Unqueried pairs report `false`.
    pub fn is_edge(&self, a: VertexId, b: VertexId) -> bool {
        Edge::new(a, b).is_ok_and(|e| self.present.contains(&e))
    }

    /// Exact degree of a queried vertex.
    pub fn degree(&self, v: VertexId) -> Option<u64> {
        self.degrees.get(&v).copied()
    }

    pub fn degrees(&self) -> &HashMap<VertexId, u64> {
        &self.degrees
    }
}

pub fn closure_check_pass(stream: &mut EdgeStream, mut query: ClosureQuery) -> Result<ClosureAnswer> {
    stream.pass(|e| query.observe(e))?;
    Ok(query.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn triangle_and_path() {
        let mut k3 = EdgeStream::from_edges([e(0, 1), e(1, 2), e(0, 2)], None).unwrap();
        let mut q = ClosureQuery::new();
        q.add_pair(2, 1);
        assert!(closure_check_pass(&mut k3, q).unwrap().is_edge(1, 2));

        let mut path = EdgeStream::from_edges([e(0, 1), e(1, 2)], None).unwrap();
        let mut q = ClosureQuery::new();
        q.add_pair(0, 2);
        for v in 0..3 {
            q.add_vertex(v);
        }
        let ans = closure_check_pass(&mut path, q).unwrap();
        assert!(!ans.is_edge(0, 2));
        assert_eq!([ans.degree(0), ans.degree(1), ans.degree(2)], [Some(1), Some(2), Some(1)]);
        assert_eq!(path.passes(), 1);
    }

    #[test]
    fn degenerate_pair_is_absent() {
        let mut s = EdgeStream::from_edges([e(0, 1)], None).unwrap();
        let mut q = ClosureQuery::new();
        q.add_pair(1, 1);
        assert!(!closure_check_pass(&mut s, q).unwrap().is_edge(1, 1));
    }
}
