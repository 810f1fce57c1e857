//! Deciding which edge, if any, a discovered triangle is charged to.
//!
//! For each edge of a triangle the rule estimates `t_e` by closing sampled
//! wedges at the edge's anchor, then picks the edge with the smallest
//! estimate. Edges whose degree is too large to sample affordably get an
//! infinite estimate, and triangles whose best estimate is still above
//! `kappa / (2 epsilon)` stay unassigned. A memo table makes the decision
//! permanent for the rest of the run, so a triangle is charged to at most
//! one edge no matter how often it is rediscovered.
//!
//! The sampling needs two passes: [`WedgeSampler`] collects neighbour
//! samples, [`WedgeChecker`] tests which sampled wedges close.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{anchor_of, Edge, EdgeDegree, VertexId};
use crate::sampling::{ClosureAnswer, ClosureQuery, NeighborBank, NeighborRequest, SubstreamKey, Want};
use crate::triangles::Triangle;

/// Thresholds of the rule, computed from the caller's bounds `T_hat`, `kappa_hat`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AssignmentParams {
    pub m: u64,
    pub epsilon: f64,
    pub t_hat: u64,
    pub kappa_hat: u64,
}

impl AssignmentParams {
    /// Edges with `d_e` above this are never sampled: `m kappa^2 / (eps^2 T)`.
    pub fn degree_cutoff(&self) -> f64 {
        let k = self.kappa_hat as f64;
        self.m as f64 * k * k / (self.epsilon * self.epsilon * self.t_hat as f64)
    }

    /// A triangle whose smallest estimate exceeds this is left unassigned.
    pub fn reject_above(&self) -> f64 {
        self.kappa_hat as f64 / (2.0 * self.epsilon)
    }
}

/// Wedge samples per edge, `ceil(c_s log2(n) / eps^2 * m kappa / T)`.
///
/// The per-edge cap at `d_e` is applied when requests are planned.
pub fn compute_s(n: u64, m: u64, epsilon: f64, t_hat: u64, kappa_hat: u64, c_s: f64) -> Result<u64> {
    if t_hat == 0 {
        return Err(Error::Config("T_hat must be at least 1".into()));
    }
    let log_n = (n.max(2) as f64).log2();
    let s = c_s * log_n / (epsilon * epsilon) * (m as f64 * kappa_hat as f64) / t_hat as f64;
    Ok(s.ceil().max(1.0) as u64)
}

/// A triangle found by the estimator, with the exact degree of each vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleRecord {
    pub triangle: Triangle,
    /// Degrees of `triangle.0[0..3]`, in the same order.
    pub degrees: [u64; 3],
    /// Index of the loop iteration that first found it.
    pub origin: usize,
}

impl TriangleRecord {
    fn degree_of(&self, v: VertexId) -> u64 {
        let i = self.triangle.0.iter().position(|&x| x == v).expect("vertex of triangle");
        self.degrees[i]
    }

    /// `d_e` and anchor for each edge, in canonical edge order.
    pub fn edge_degrees(&self) -> [(Edge, EdgeDegree); 3] {
        self.triangle.edges().map(|e| {
            let (du, dv) = (self.degree_of(e.u), self.degree_of(e.v));
            (
                e,
                EdgeDegree {
                    value: du.min(dv),
                    anchor: anchor_of(e, du, dv),
                },
            )
        })
    }
}

/// Closed-wedge count for one edge of one triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WedgeTally {
    pub samples: u64,
    pub closed: u64,
    /// The samples are the whole neighbourhood, so `closed` is exactly `t_e`.
    pub exhaustive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeEstimate {
    pub edge: Edge,
    pub d_e: u64,
    /// Estimated `t_e`; `f64::INFINITY` when `d_e` is over the cutoff.
    pub y: f64,
}

impl EdgeEstimate {
    pub fn new(edge: Edge, d_e: u64, tally: Option<WedgeTally>) -> Self {
        let y = match tally {
            None => f64::INFINITY,
            Some(t) if t.exhaustive => t.closed as f64,
            Some(t) if t.samples == 0 => f64::INFINITY,
            Some(t) => (d_e * t.closed) as f64 / t.samples as f64,
        };
        EdgeEstimate { edge, d_e, y }
    }
}

/// Triangle to edge-or-unassigned memo, scoped to one estimator repetition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssignmentTable {
    entries: BTreeMap<Triangle, Option<Edge>>,
}

impl AssignmentTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, t: &Triangle) -> Option<Option<Edge>> {
        self.entries.get(t).copied()
    }

    pub fn contains(&self, t: &Triangle) -> bool {
        self.entries.contains_key(t)
    }

    /// Writes the decision for `t` unless one exists; returns the stored value.
    pub fn record(&mut self, t: Triangle, value: Option<Edge>) -> Option<Edge> {
        *self.entries.entry(t).or_insert(value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Triangle, &Option<Edge>)> {
        self.entries.iter()
    }

    /// Number of triangles assigned to each edge (`tau_e`).
    pub fn assigned_counts(&self) -> BTreeMap<Edge, u64> {
        let mut counts = BTreeMap::new();
        for e in self.entries.values().flatten() {
            *counts.entry(*e).or_insert(0) += 1;
        }
        counts
    }
}

/// Decides the edge of `record`'s triangle, consulting and updating `table`.
///
/// `tally` is asked for the wedge counts of every edge under the degree
/// cutoff; it is not called when the table already holds the triangle.
pub fn assignment(
    record: &TriangleRecord,
    mut tally: impl FnMut(Edge) -> Option<WedgeTally>,
    params: &AssignmentParams,
    table: &mut AssignmentTable,
) -> Result<Option<Edge>> {
    if let Some(v) = table.get(&record.triangle) {
        return Ok(v);
    }
    let cutoff = params.degree_cutoff();
    let mut best: Option<EdgeEstimate> = None;
    for (edge, deg) in record.edge_degrees() {
        let est = if deg.value as f64 > cutoff {
            EdgeEstimate::new(edge, deg.value, None)
        } else {
            let t = tally(edge).ok_or_else(|| {
                Error::Internal(format!("no wedge samples for edge {edge} of {}", record.triangle))
            })?;
            EdgeEstimate::new(edge, deg.value, Some(t))
        };
        // edges come in canonical order, so strict < keeps the first minimum
        if best.is_none_or(|b| est.y < b.y) {
            best = Some(est);
        }
    }
    let best = best.expect("three edges");
    let value = (best.y <= params.reject_above()).then_some(best.edge);
    Ok(table.record(record.triangle, value))
}

/// YES iff the triangle is assigned to `e`.
pub fn is_assigned(
    record: &TriangleRecord,
    e: Edge,
    tally: impl FnMut(Edge) -> Option<WedgeTally>,
    params: &AssignmentParams,
    table: &mut AssignmentTable,
) -> Result<bool> {
    if !record.triangle.contains_edge(e) {
        return Err(Error::Input(format!("edge {e} is not part of {}", record.triangle)));
    }
    Ok(assignment(record, tally, params, table)? == Some(e))
}

struct Planned {
    record: usize,
    edge: Edge,
    anchor: VertexId,
    degree: u64,
    exhaustive: bool,
}

/// First of the two assignment passes: neighbour samples for every edge of
/// every pending triangle that is under the degree cutoff.
pub struct WedgeSampler {
    records: Vec<TriangleRecord>,
    plan: Vec<Planned>,
    bank: NeighborBank,
}

impl WedgeSampler {
    /// Plans `s` samples per edge, or a full scan when `s >= d_e`.
    pub fn new(records: Vec<TriangleRecord>, params: &AssignmentParams, s: u64, key: SubstreamKey) -> Self {
        let cutoff = params.degree_cutoff();
        let mut plan = Vec::new();
        let mut requests = Vec::new();
        for (i, rec) in records.iter().enumerate() {
            for (edge, deg) in rec.edge_degrees() {
                if deg.value as f64 > cutoff {
                    continue;
                }
                let exhaustive = s >= deg.value;
                let want = if exhaustive { Want::All } else { Want::Samples(s as usize) };
                plan.push(Planned {
                    record: i,
                    edge,
                    anchor: deg.anchor,
                    degree: deg.value,
                    exhaustive,
                });
                requests.push(NeighborRequest {
                    edge,
                    anchor: deg.anchor,
                    want,
                });
            }
        }
        WedgeSampler {
            records,
            plan,
            bank: NeighborBank::new(requests, key),
        }
    }

    /// Items the pass will hold once full: `s` per sampled edge, `d_e` per scanned one.
    pub fn planned_capacity(&self, s: u64) -> u64 {
        self.plan.iter().map(|p| if p.exhaustive { p.degree } else { s }).sum()
    }

    pub fn records(&self) -> &[TriangleRecord] {
        &self.records
    }

    pub fn observe(&mut self, e: Edge) {
        self.bank.observe(e);
    }

    pub fn stored_items(&self) -> usize {
        self.bank.stored_items()
    }

    pub fn into_checker(self) -> WedgeChecker {
        let samples = self.bank.finish();
        let mut query = ClosureQuery::new();
        for (p, ws) in self.plan.iter().zip(&samples) {
            let other = p.edge.other(p.anchor);
            for &w in ws {
                query.add_pair(other, w);
            }
        }
        WedgeChecker {
            records: self.records,
            plan: self.plan,
            samples,
            query,
        }
    }
}

/// Second assignment pass: closure checks for all sampled wedges.
pub struct WedgeChecker {
    records: Vec<TriangleRecord>,
    plan: Vec<Planned>,
    samples: Vec<Vec<VertexId>>,
    query: ClosureQuery,
}

impl WedgeChecker {
    pub fn observe(&mut self, e: Edge) {
        self.query.observe(e);
    }

    /// Sampled vertices held plus pending closure pairs.
    pub fn stored_items(&self) -> usize {
        self.samples.iter().map(Vec::len).sum::<usize>() + self.query.stored_items()
    }

    /// Runs the rule on every pending triangle, in record order.
    pub fn resolve(self, params: &AssignmentParams, table: &mut AssignmentTable) -> Result<Vec<Option<Edge>>> {
        let answer: ClosureAnswer = self.query.finish();
        let mut tallies: Vec<BTreeMap<Edge, WedgeTally>> = vec![BTreeMap::new(); self.records.len()];
        for (p, ws) in self.plan.iter().zip(&self.samples) {
            let other = p.edge.other(p.anchor);
            let closed = ws.iter().filter(|&&w| w != other && answer.is_edge(other, w)).count() as u64;
            tallies[p.record].insert(
                p.edge,
                WedgeTally {
                    samples: ws.len() as u64,
                    closed,
                    exhaustive: p.exhaustive,
                },
            );
        }
        self.records
            .iter()
            .zip(&tallies)
            .map(|(rec, t)| assignment(rec, |e| t.get(&e).copied(), params, table))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u64, epsilon: f64, t_hat: u64, kappa_hat: u64) -> AssignmentParams {
        AssignmentParams { m, epsilon, t_hat, kappa_hat }
    }

    fn record(a: u32, b: u32, c: u32, degrees: [u64; 3]) -> TriangleRecord {
        TriangleRecord { triangle: Triangle::new(a, b, c), degrees, origin: 0 }
    }

    #[test]
    fn s_formula() {
        let base = compute_s(1001, 1997, 0.2, 998, 2, 61.0).unwrap();
        // 61 * log2(1001) / 0.04 * 1997 * 2 / 998, computed by hand: 60830.5...
        let exact = 61.0 * 1001f64.log2() / 0.04 * (1997.0 * 2.0) / 998.0;
        assert_eq!(base, exact.ceil() as u64);
        assert_eq!(base, 60831);
        let quarter = compute_s(1001, 1997, 0.2, 998 * 4, 2, 61.0).unwrap();
        assert!((base as f64 / quarter as f64 - 4.0).abs() < 1e-3);
        let wider = compute_s(1001, 1997, 0.4, 998, 2, 61.0).unwrap();
        assert!((base as f64 / wider as f64 - 4.0).abs() < 1e-3);
        assert!(matches!(compute_s(10, 10, 0.1, 0, 1, 61.0), Err(Error::Config(_))));
    }

    #[test]
    fn all_over_cutoff_is_unassigned() {
        // m=10, eps=0.5, T=100, kappa=1 -> cutoff 0.4, every d_e >= 1 trips it
        let p = params(10, 0.5, 100, 1);
        let rec = record(0, 1, 2, [5, 5, 5]);
        let mut table = AssignmentTable::new();
        let got = assignment(&rec, |_| panic!("no sampling expected"), &p, &mut table).unwrap();
        assert_eq!(got, None);
        for e in rec.triangle.edges() {
            assert!(!is_assigned(&rec, e, |_| None, &p, &mut table).unwrap());
        }
    }

    #[test]
    fn k4_saturated_picks_canonical_minimum() {
        // exact t_e = 2 for all edges, reject_above = 3
        let p = params(6, 0.5, 4, 3);
        let rec = record(1, 2, 3, [3, 3, 3]);
        let mut table = AssignmentTable::new();
        let exact = |_| Some(WedgeTally { samples: 3, closed: 2, exhaustive: true });
        assert_eq!(assignment(&rec, exact, &p, &mut table).unwrap(), Some(Edge::new(1, 2).unwrap()));
    }

    #[test]
    fn memo_is_consulted_first() {
        let p = params(6, 0.5, 4, 3);
        let rec = record(1, 2, 3, [3, 3, 3]);
        let mut table = AssignmentTable::new();
        let first = assignment(&rec, |_| Some(WedgeTally { samples: 3, closed: 2, exhaustive: true }), &p, &mut table);
        let second = assignment(&rec, |_| panic!("must not resample"), &p, &mut table);
        assert_eq!(first.unwrap(), second.unwrap());
        assert_eq!(table.len(), 1);
    }

    #[test]
    fn k3_yes_for_one_edge_only() {
        let p = params(3, 0.5, 1, 2);
        let rec = record(0, 1, 2, [2, 2, 2]);
        let mut table = AssignmentTable::new();
        let exact = |_| Some(WedgeTally { samples: 2, closed: 1, exhaustive: true });
        let yes: Vec<bool> = rec
            .triangle
            .edges()
            .iter()
            .map(|&e| is_assigned(&rec, e, exact, &p, &mut table).unwrap())
            .collect();
        assert_eq!(yes, vec![true, false, false]);
        let stray = Edge::new(0, 9).unwrap();
        assert!(matches!(is_assigned(&rec, stray, exact, &p, &mut table), Err(Error::Input(_))));
    }

    #[test]
    fn rejects_when_minimum_is_too_large() {
        // reject_above = 1 / (2 * 0.25) = 2
        let p = params(100, 0.25, 1000, 1);
        let rec = record(0, 1, 2, [4, 4, 4]);
        let mut table = AssignmentTable::new();
        let got = assignment(&rec, |_| Some(WedgeTally { samples: 4, closed: 3, exhaustive: false }), &p, &mut table);
        assert_eq!(got.unwrap(), None);
        assert_eq!(table.get(&rec.triangle), Some(None));
    }

    #[test]
    fn missing_tally_is_an_internal_error() {
        let p = params(6, 0.5, 4, 3);
        let rec = record(1, 2, 3, [3, 3, 3]);
        let mut table = AssignmentTable::new();
        assert!(matches!(assignment(&rec, |_| None, &p, &mut table), Err(Error::Internal(_))));
    }

    #[test]
    fn sampled_estimate_scales_by_degree() {
        let e = Edge::new(0, 1).unwrap();
        let est = EdgeEstimate::new(e, 10, Some(WedgeTally { samples: 4, closed: 1, exhaustive: false }));
        assert_eq!(est.y, 2.5);
        assert!(EdgeEstimate::new(e, 10, None).y.is_infinite());
    }
}
