//! Seeded graph families with known triangle counts.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::triangles::triangles_exact_cn;

/// Exact statistics of a generated graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub family: String,
    pub n: u64,
    pub m: u64,
    #[serde(rename = "T")]
    pub triangles: u64,
    pub kappa: u64,
}

impl GroundTruth {
    /// Counts everything exactly.
    pub fn compute(family: &str, g: &Graph) -> Self {
        GroundTruth {
            family: family.to_string(),
            n: g.n() as u64,
            m: g.m() as u64,
            triangles: triangles_exact_cn(g),
            kappa: g.degeneracy() as u64,
        }
    }

    /// `graph.el` -> `graph.el.truth.json`.
    pub fn sidecar_path(edge_list: &Path) -> PathBuf {
        let mut s = edge_list.as_os_str().to_owned();
        s.push(".truth.json");
        PathBuf::from(s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (u64, u64)>) -> Graph {
    let edges = edges.into_iter().map(|(a, b)| (a as VertexId, b as VertexId));
    Graph::from_edges(n, edges).expect("generator emits a simple graph")
}

/// Hub `0` joined to every vertex of the cycle `1..n`.
pub fn gen_wheel(n: usize) -> Result<(Graph, GroundTruth)> {
    if n < 4 {
        return Err(Error::Config(format!("a wheel needs at least 4 vertices, got {n}")));
    }
    let rim = n as u64 - 1;
    let spokes = (1..=rim).map(|v| (0, v));
    let cycle = (1..=rim).map(|v| (v, v % rim + 1));
    let g = build(n, spokes.chain(cycle));
    let truth = GroundTruth {
        family: "wheel".into(),
        n: n as u64,
        m: 2 * rim,
        // for n = 4 the wheel is K4
        triangles: if n == 4 { 4 } else { rim },
        kappa: 3,
    };
    Ok((g, truth))
}

/// Spine `0-1` with `k` pages `2..k+2`, each adjacent to both spine vertices.
pub fn gen_book(k: usize) -> Result<(Graph, GroundTruth)> {
    if k == 0 {
        return Err(Error::Config("a book needs at least one page".into()));
    }
    let pages = (2..k as u64 + 2).flat_map(|w| [(0, w), (1, w)]);
    let g = build(k + 2, std::iter::once((0, 1)).chain(pages));
    let truth = GroundTruth {
        family: "book".into(),
        n: k as u64 + 2,
        m: 2 * k as u64 + 1,
        triangles: k as u64,
        kappa: 2,
    };
    Ok((g, truth))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LbKind {
    /// Disjoint strings: triangle-free.
    Yes,
    /// Intersecting strings.
    No,
}

/// Two-party disjointness instance turned into a graph.
///
/// Vertices: `A = 0..p`, `B = p..2p`, then `blocks` independent sets of
/// `q` vertices. `A` and `B` form a complete bipartite graph; block `i` is
/// joined to all of `A` when `x[i]` and to all of `B` when `y[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LbInstanceSpec {
    pub p: usize,
    pub q: usize,
    pub blocks: usize,
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub kind: LbKind,
}

impl LbInstanceSpec {
    /// Random strings with `blocks / 3` ones each; NO instances share
    /// exactly `shared` indices.
    pub fn random(p: usize, q: usize, blocks: usize, kind: LbKind, shared: usize, seed: u64) -> Result<Self> {
        if blocks == 0 || !blocks.is_multiple_of(3) {
            return Err(Error::Config(format!("block count must be a positive multiple of 3, got {blocks}")));
        }
        let third = blocks / 3;
        let shared = match kind {
            LbKind::Yes => 0,
            LbKind::No if shared == 0 || shared > third => {
                return Err(Error::Config(format!("shared indices must lie in 1..={third}, got {shared}")))
            }
            LbKind::No => shared,
        };
        let mut idx: Vec<usize> = (0..blocks).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut x = vec![false; blocks];
        let mut y = vec![false; blocks];
        for &i in &idx[..third] {
            x[i] = true;
        }
        for &i in idx[..shared].iter().chain(&idx[third..2 * third - shared]) {
            y[i] = true;
        }
        let spec = LbInstanceSpec { p, q, blocks, x, y, kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn shared(&self) -> usize {
        self.x.iter().zip(&self.y).filter(|&(&a, &b)| a && b).count()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.p == 0 || self.q == 0 {
            return fail("p and q must be positive".into());
        }
        if self.blocks == 0 || !self.blocks.is_multiple_of(3) {
            return fail(format!("block count must be a positive multiple of 3, got {}", self.blocks));
        }
        if self.x.len() != self.blocks || self.y.len() != self.blocks {
            return fail("indicator strings must have one entry per block".into());
        }
        let ones = |s: &[bool]| s.iter().filter(|&&b| b).count();
        if ones(&self.x) != self.blocks / 3 || ones(&self.y) != self.blocks / 3 {
            return fail(format!("each string needs exactly {} ones", self.blocks / 3));
        }
        match (self.kind, self.shared()) {
            (LbKind::Yes, 0) => Ok(()),
            (LbKind::Yes, s) => fail(format!("a YES instance must be disjoint, found {s} shared indices")),
            (LbKind::No, 0) => fail("a NO instance needs a shared index".into()),
            (LbKind::No, _) => Ok(()),
        }
    }
}

/// Builds the graph of `spec`; `T` is exact and `kappa` is `p` for YES
/// instances and computed for NO instances.
pub fn gen_lb_instance(spec: &LbInstanceSpec) -> Result<(Graph, GroundTruth)> {
    spec.validate()?;
    let (p, q) = (spec.p as u64, spec.q as u64);
    let n = 2 * p + spec.blocks as u64 * q;
    let mut edges = Vec::new();
    for a in 0..p {
        for b in p..2 * p {
            edges.push((a, b));
        }
    }
    for i in 0..spec.blocks as u64 {
        let block = 2 * p + i * q..2 * p + (i + 1) * q;
        for side in [(spec.x[i as usize], 0..p), (spec.y[i as usize], p..2 * p)] {
            if let (true, range) = side {
                for v in block.clone() {
                    edges.extend(range.clone().map(|s| (s, v)));
                }
            }
        }
    }
    let g = build(n as usize, edges);
    let kappa = match spec.kind {
        LbKind::Yes => p,
        LbKind::No => g.degeneracy() as u64,
    };
    let truth = GroundTruth {
        family: "lb".into(),
        n,
        m: p * p + 2 * (spec.blocks as u64 / 3) * p * q,
        triangles: spec.shared() as u64 * p * p * q,
        kappa,
    };
    Ok((g, truth))
}

/// Starts from a clique on `attach + 1` vertices; every later vertex joins
/// `attach` distinct earlier vertices chosen with probability proportional
/// to degree.
pub fn gen_preferential_attachment(n: usize, attach: usize, seed: u64) -> Result<Graph> {
    if attach == 0 || n <= attach {
        return Err(Error::Config(format!("need n > attach >= 1, got n={n}, attach={attach}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = attach as u64 + 1;
    let mut edges: Vec<(u64, u64)> = Vec::new();
    // each edge endpoint appears once, so a uniform entry is degree-biased
    let mut ends: Vec<u64> = Vec::new();
    for a in 0..core.min(n as u64) {
        for b in a + 1..core.min(n as u64) {
            edges.push((a, b));
            ends.extend([a, b]);
        }
    }
    for v in core..n as u64 {
        let mut targets = BTreeSet::new();
        while targets.len() < attach {
            targets.insert(ends[rng.gen_range(0..ends.len())]);
        }
        for t in targets {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    Ok(build(n, edges))
}

/// Every pair present independently with probability `prob`.
pub fn gen_erdos_renyi(n: usize, prob: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::Config(format!("edge probability must lie in [0, 1], got {prob}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u64 {
        for b in a + 1..n as u64 {
            if rng.gen_bool(prob) {
                edges.push((a, b));
            }
        }
    }
    Ok(build(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::triangles_exact_naive;

    fn check(truth: &GroundTruth, g: &Graph) {
        assert_eq!(truth, &GroundTruth::compute(&truth.family, g));
    }

    #[test]
    fn wheel_truth() {
        for n in [4, 5, 6, 51] {
            let (g, t) = gen_wheel(n).unwrap();
            check(&t, &g);
        }
        let (_, t) = gen_wheel(5).unwrap();
        assert_eq!((t.m, t.triangles, t.kappa), (8, 4, 3));
        let (g, t) = gen_wheel(1001).unwrap();
        assert_eq!((t.m, t.triangles), (2000, 1000));
        assert_eq!(g.m(), 2000);
        assert!(gen_wheel(3).is_err());
    }

    #[test]
    fn book_truth() {
        let (g, t) = gen_book(1).unwrap();
        assert_eq!((g.n(), g.m(), triangles_exact_naive(&g)), (3, 3, 1));
        let (g, t20) = gen_book(20).unwrap();
        check(&t20, &g);
        assert_eq!(t.triangles, 1);
        let (g, t) = gen_book(998).unwrap();
        assert_eq!((t.m, t.triangles, g.m()), (1997, 998, 1997));
        assert!(gen_book(0).is_err());
    }

    #[test]
    fn lb_small_yes_and_no() {
        let yes = LbInstanceSpec::random(2, 1, 6, LbKind::Yes, 1, 3).unwrap();
        let (g, t) = gen_lb_instance(&yes).unwrap();
        assert_eq!((t.m, t.triangles, t.kappa), (12, 0, 2));
        check(&t, &g);
        let no = LbInstanceSpec::random(2, 1, 6, LbKind::No, 1, 3).unwrap();
        let (g, t) = gen_lb_instance(&no).unwrap();
        assert_eq!((t.m, t.triangles), (12, 4));
        check(&t, &g);
    }

    #[test]
    fn lb_large_no_instance() {
        let no = LbInstanceSpec::random(4, 4, 30, LbKind::No, 1, 11).unwrap();
        let (g, t) = gen_lb_instance(&no).unwrap();
        assert_eq!(t.triangles, 64);
        assert!((4..=8).contains(&t.kappa));
        check(&t, &g);
    }

    #[test]
    fn lb_spec_rejections() {
        assert!(LbInstanceSpec::random(2, 1, 7, LbKind::Yes, 0, 0).is_err());
        assert!(LbInstanceSpec::random(2, 1, 6, LbKind::No, 3, 0).is_err());
        let mut s = LbInstanceSpec::random(2, 1, 6, LbKind::No, 1, 0).unwrap();
        s.kind = LbKind::Yes;
        assert!(gen_lb_instance(&s).is_err());
        s.x = vec![true; 6];
        assert!(s.validate().is_err());
    }

    #[test]
    fn preferential_attachment() {
        let tree = gen_preferential_attachment(200, 1, 5).unwrap();
        assert_eq!((tree.m(), tree.degeneracy(), triangles_exact_cn(&tree)), (199, 1, 0));
        let g = gen_preferential_attachment(2000, 3, 9).unwrap();
        assert!(g.degeneracy() <= 3);
        assert_eq!(g.edges(), gen_preferential_attachment(2000, 3, 9).unwrap().edges());
        assert!(gen_preferential_attachment(3, 3, 0).is_err());
    }

    #[test]
    fn erdos_renyi() {
        assert_eq!(gen_erdos_renyi(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gen_erdos_renyi(4, 1.0, 1).unwrap().m(), 6);
        let g = gen_erdos_renyi(60, 0.3, 42).unwrap();
        assert_eq!(triangles_exact_naive(&g), triangles_exact_cn(&g));
        assert!(gen_erdos_renyi(5, 1.5, 0).is_err());
    }

    #[test]
    fn sidecar_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let (_, t) = gen_book(3).unwrap();
        let path = GroundTruth::sidecar_path(&dir.path().join("b.el"));
        assert!(path.to_string_lossy().ends_with("b.el.truth.json"));
        t.save(&path).unwrap();
        assert_eq!(GroundTruth::load(&path).unwrap(), t);
        assert!(std::fs::read_to_string(&path).unwrap().contains("\"T\": 3"));
    }
}
