//! Exact triangle counting and the per-edge heavy/costly classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

/// A triangle as its sorted vertex triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle(pub [VertexId; 3]);

impl Triangle {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Self {
        let mut t = [a, b, c];
        t.sort_unstable();
        Triangle(t)
    }

    /// The three edges in canonical order.
    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge { u: a, v: b }, Edge { u: a, v: c }, Edge { u: b, v: c }]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().contains(&e)
    }

    /// Vertex of the triangle opposite to `e`.
    pub fn apex(&self, e: Edge) -> VertexId {
        self.0.iter().copied().find(|&x| !e.contains(x)).expect("edge belongs to triangle")
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.0[0], self.0[1], self.0[2])
    }
}

/// Counts triangles by testing every vertex triple against a dense
/// adjacency matrix. O(n^3); meant for n up to a few hundred.
pub fn triangles_exact_naive(g: &Graph) -> u64 {
    let n = g.n();
    let mut adj = vec![false; n * n];
    for e in g.edges() {
        adj[e.u as usize * n + e.v as usize] = true;
        adj[e.v as usize * n + e.u as usize] = true;
    }
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a * n + b] {
                continue;
            }
            for c in b + 1..n {
                if adj[a * n + c] && adj[b * n + c] {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Calls `f` once per triangle.
///
/// Vertices are ranked by `(degree, id)`. For every edge the smaller-rank
/// endpoint's forward list is intersected with the other endpoint's, and
/// only third vertices ranked above both are reported, so each triangle is
/// seen exactly once and no division is needed. Runs in O(m * degeneracy).
pub fn for_each_triangle(g: &Graph, mut f: impl FnMut(Triangle)) {
    let n = g.n();
    let rank_key = |v: VertexId| (g.deg(v), v);
    let forward: Vec<Vec<VertexId>> = (0..n as VertexId)
        .map(|x| {
            g.neighbors(x)
                .iter()
                .copied()
                .filter(|&y| rank_key(y) > rank_key(x))
                .collect()
        })
        .collect();
    for x in 0..n {
        let fx = &forward[x];
        for &y in fx {
            let fy = &forward[y as usize];
            let (mut i, mut j) = (0, 0);
            while i < fx.len() && j < fy.len() {
                match fx[i].cmp(&fy[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        f(Triangle::new(x as VertexId, y, fx[i]));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
}

/// Exact triangle count via ordered neighbourhood intersection.
pub fn triangles_exact_cn(g: &Graph) -> u64 {
    let mut count = 0;
    for_each_triangle(g, |_| count += 1);
    count
}

/// All triangles, sorted.
pub fn list_triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for_each_triangle(g, |t| out.push(t));
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeProfile {
    pub edge: Edge,
    /// `min(d_u, d_v)`.
    pub d_e: u64,
    /// Number of triangles containing the edge.
    pub t_e: u64,
}

/// Exact `t_e` for every edge, in canonical edge order. Sums to `3T`.
pub fn per_edge_triangles(g: &Graph) -> Vec<EdgeProfile> {
    let mut t = vec![0u64; g.m()];
    for_each_triangle(g, |tri| {
        for e in tri.edges() {
            t[g.edge_index(e).expect("triangle edge in graph")] += 1;
        }
    });
    g.edges()
        .iter()
        .zip(t)
        .map(|(&edge, t_e)| EdgeProfile {
            edge,
            d_e: g.edge_degree_unchecked(edge).value,
            t_e,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeClass {
    pub heavy: bool,
    pub costly: bool,
}

/// Heavy/costly flags for a fixed `(epsilon, T, kappa)`.
#[derive(Clone, Debug)]
pub struct Classification {
    pub profiles: Vec<EdgeProfile>,
    pub classes: Vec<EdgeClass>,
    pub heavy_triangles: u64,
    pub costly_triangles: u64,
}

impl Classification {
    fn class(&self, g: &Graph, e: Edge) -> EdgeClass {
        self.classes[g.edge_index(e).expect("edge in graph")]
    }

    /// All three edges heavy.
    pub fn is_heavy_triangle(&self, g: &Graph, t: Triangle) -> bool {
        t.edges().iter().all(|&e| self.class(g, e).heavy)
    }

    /// Any edge costly.
    pub fn is_costly_triangle(&self, g: &Graph, t: Triangle) -> bool {
        t.edges().iter().any(|&e| self.class(g, e).costly)
    }
}

/// An edge is heavy when `t_e > kappa / epsilon` and costly when
/// `d_e / t_e > m * kappa / (epsilon * T)`; edges in no triangle are costly.
pub fn classify_edges(g: &Graph, epsilon: f64, triangles: u64, kappa: u64) -> Result<Classification> {
    if triangles == 0 {
        return Err(Error::Input("classification needs T > 0".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
    }
    let heavy_cut = kappa as f64 / epsilon;
    let costly_cut = g.m() as f64 * kappa as f64 / (epsilon * triangles as f64);
    let profiles = per_edge_triangles(g);
    let classes: Vec<EdgeClass> = profiles
        .iter()
        .map(|p| EdgeClass {
            heavy: p.t_e as f64 > heavy_cut,
            costly: p.t_e == 0 || p.d_e as f64 / p.t_e as f64 > costly_cut,
        })
        .collect();
    let mut out = Classification {
        profiles,
        classes,
        heavy_triangles: 0,
        costly_triangles: 0,
    };
    let (mut heavy, mut costly) = (0, 0);
    for_each_triangle(g, |t| {
        heavy += u64::from(out.is_heavy_triangle(g, t));
        costly += u64::from(out.is_costly_triangle(g, t));
    });
    out.heavy_triangles = heavy;
    out.costly_triangles = costly;
    Ok(out)
}
