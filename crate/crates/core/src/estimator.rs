//! The six-pass streaming triangle estimator.
//!
//! One repetition runs the following schedule over the stream:
//!
//! | pass | work |
//! |------|------|
//! | 1 | `r` uniform edges `R` (with replacement) |
//! | 2 | exact degrees of the endpoints of `R`, giving `d_e` and `d_R` |
//! | – | `ell` draws from `R` with probability `d_e / d_R` |
//! | 3 | one uniform neighbour `w` of each drawn edge's anchor |
//! | 4 | closure check of each wedge, plus `deg(w)` |
//! | 5 | wedge samples for every edge of every discovered triangle |
//! | 6 | closure checks of those wedges, then the assignment decisions |
//!
//! `Y_i` is one when draw `i` closed a triangle that the assignment rule
//! charges to the drawn edge, and the estimate is `X = (m/r) d_R mean(Y)`.
//! Repetitions are combined by their median. With `share_passes` every
//! repetition rides the same six physical passes.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::assignment::{
    compute_s, is_assigned, AssignmentParams, AssignmentTable, TriangleRecord, WedgeChecker, WedgeSampler,
    WedgeTally,
};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeDegree, Graph, VertexId};
use crate::sampling::{
    uniform_edge_bank, weighted_pick, ClosureAnswer, ClosureQuery, NeighborBank, NeighborRequest, ReservoirBank,
    Role, SubstreamKey, Want,
};
use crate::stream::{EdgeStream, StreamStats};
use crate::triangles::{triangles_exact_cn, Triangle};

/// Passes one repetition uses when no fallback triggers.
pub const MAIN_PASSES: u64 = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    /// Lower bound on the triangle count.
    pub t_hat: u64,
    /// Upper bound on the degeneracy.
    pub kappa_hat: u64,
    pub c_r: f64,
    pub c_ell: f64,
    pub c_s: f64,
    /// Uniform multiplier on `c_r`, `c_ell`, `c_s`, in `(0, 1]`.
    pub scale: f64,
    /// Odd number of independent repetitions.
    pub repetitions: usize,
    pub seed: u64,
    pub share_passes: bool,
    /// Abort a repetition whose storage would exceed this many times its
    /// expected storage. `None` disables the check.
    pub abort_multiplier: Option<f64>,
    /// Count exactly from the stored stream when `r >= m`.
    pub exact_fallback: bool,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, t_hat: u64, kappa_hat: u64) -> Self {
        EstimatorConfig {
            epsilon,
            t_hat,
            kappa_hat,
            c_r: 7.0,
            c_ell: 21.0,
            c_s: 61.0,
            scale: 1.0,
            repetitions: 1,
            seed: 0,
            share_passes: false,
            abort_multiplier: Some(10.0),
            exact_fallback: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return fail(format!("epsilon must lie in (0, 1/2), got {}", self.epsilon));
        }
        if self.t_hat == 0 {
            return fail("T_hat must be at least 1".into());
        }
        if self.kappa_hat == 0 {
            return fail("kappa_hat must be at least 1".into());
        }
        if !(self.c_r > 6.0) || !(self.c_ell > 20.0) || !(self.c_s > 60.0) {
            return fail(format!(
                "constants must satisfy c_r > 6, c_ell > 20, c_s > 60 (got {}, {}, {})",
                self.c_r, self.c_ell, self.c_s
            ));
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return fail(format!("scale must lie in (0, 1], got {}", self.scale));
        }
        if self.repetitions.is_multiple_of(2) {
            return fail(format!("repetitions must be odd, got {}", self.repetitions));
        }
        if let Some(a) = self.abort_multiplier {
            if !(a > 1.0) {
                return fail(format!("abort multiplier must exceed 1, got {a}"));
            }
        }
        Ok(())
    }

    /// Settings outside the range the accuracy guarantee is proved for.
    pub fn sub_theoretical(&self) -> bool {
        self.scale < 1.0 || self.epsilon >= 1.0 / 6.0
    }

    fn assignment_params(&self, m: u64) -> AssignmentParams {
        AssignmentParams {
            m,
            epsilon: self.epsilon,
            t_hat: self.t_hat,
            kappa_hat: self.kappa_hat,
        }
    }

    fn repetition_seed(&self, rep: u64) -> u64 {
        SubstreamKey::new(self.seed, Role::Repetition).request(rep).derive_seed()
    }
}

/// Lower bound on the fraction of triangles the assignment rule charges,
/// used in place of the unknown assigned count.
pub fn assigned_fraction_floor(epsilon: f64) -> f64 {
    1.0 - 2.0 * epsilon
}

fn log2n(n: u64) -> f64 {
    (n.max(2) as f64).log2()
}

/// Edge-sample size `ceil(c_r log2(n) / eps^2 * m (kappa/eps) / ((1-2eps) T))`,
/// before the cap at `m`.
pub fn compute_r(n: u64, m: u64, epsilon: f64, t_hat: u64, kappa_hat: u64, c_r: f64) -> Result<u64> {
    if t_hat == 0 {
        return Err(Error::Config("T_hat must be at least 1".into()));
    }
    let tau_max = kappa_hat as f64 / epsilon;
    let assigned = assigned_fraction_floor(epsilon) * t_hat as f64;
    let r = c_r * log2n(n) / (epsilon * epsilon) * m as f64 * tau_max / assigned;
    Ok(r.ceil().max(1.0) as u64)
}

/// Number of degree-proportional draws,
/// `ceil(c_ell log2(n) / eps^2 * m d_R / (r (1-2eps) T))`, before the cap at `m`.
pub fn compute_ell(n: u64, m: u64, epsilon: f64, t_hat: u64, r: u64, d_r: u64, c_ell: f64) -> Result<u64> {
    if t_hat == 0 {
        return Err(Error::Config("T_hat must be at least 1".into()));
    }
    if d_r == 0 || r == 0 {
        return Err(Error::Input("d_R must be positive".into()));
    }
    let assigned = assigned_fraction_floor(epsilon) * t_hat as f64;
    let ell = c_ell * log2n(n) / (epsilon * epsilon) * (m as f64 * d_r as f64) / (r as f64 * assigned);
    Ok(ell.ceil().max(1.0) as u64)
}

/// Diagnostic conditions attached to a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    EmptyStream,
    ExactFallback,
    SparseSample,
    EllCapped,
    WedgeCap,
    Aborted,
    SubTheoretical,
    ExperimentalRestart,
}

/// The multiset `R` with exact edge degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledEdgeSet {
    pub edges: Vec<Edge>,
    pub degrees: Vec<EdgeDegree>,
    pub d_r: u64,
}

impl SampledEdgeSet {
    pub fn new(edges: Vec<Edge>, mut degree: impl FnMut(VertexId) -> u64) -> Self {
        let degrees: Vec<EdgeDegree> = edges
            .iter()
            .map(|&e| {
                let (du, dv) = (degree(e.u), degree(e.v));
                EdgeDegree {
                    value: du.min(dv),
                    anchor: crate::graph::anchor_of(e, du, dv),
                }
            })
            .collect();
        let d_r = degrees.iter().map(|d| d.value).sum();
        SampledEdgeSet { edges, degrees, d_r }
    }

    pub fn weights(&self) -> Vec<u64> {
        self.degrees.iter().map(|d| d.value).collect()
    }

    /// The triangle closed by draw `i` with neighbour `w`, if any.
    pub fn closed_triangle(&self, i: usize, w: VertexId, is_edge: impl Fn(VertexId, VertexId) -> bool) -> Option<Triangle> {
        let e = self.edges[i];
        let other = e.other(self.degrees[i].anchor);
        (w != other && !e.contains(w) && is_edge(other, w)).then(|| Triangle::new(e.u, e.v, w))
    }

    /// `Y_i` for draw `i` with neighbour `w` under a fixed assignment table.
    pub fn draw_indicator(
        &self,
        i: usize,
        w: VertexId,
        is_edge: impl Fn(VertexId, VertexId) -> bool,
        table: &AssignmentTable,
    ) -> bool {
        self.closed_triangle(i, w, is_edge)
            .is_some_and(|t| table.get(&t) == Some(Some(self.edges[i])))
    }
}

/// Outcome of the whole run. Serializes to the frozen report schema.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub estimate: f64,
    /// Estimator passes, excluding any stats pass made by the caller.
    pub passes: u64,
    /// Largest number of edges, counters and samples held at once. Summed
    /// over repetitions when they share passes, maximum otherwise.
    pub stored_edges_peak: u64,
    pub r: u64,
    /// Largest `ell` over repetitions.
    pub ell: u64,
    pub s: u64,
    /// Total over repetitions.
    pub assignment_calls: u64,
    /// Total over repetitions.
    pub memo_size: u64,
    pub seed: u64,
    pub config: ReportConfig,
    #[serde(skip)]
    pub repetition_estimates: Vec<f64>,
    #[serde(skip)]
    pub assignment_tables: Vec<AssignmentTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    pub mode: String,
    pub epsilon: f64,
    pub t_hat: u64,
    pub kappa_hat: u64,
    pub c_r: f64,
    pub c_ell: f64,
    pub c_s: f64,
    pub scale: f64,
    pub repetitions: usize,
    pub share_passes: bool,
    pub abort_multiplier: Option<f64>,
    /// Passes spent learning `n` and `m` before estimation.
    pub stats_passes: u64,
    /// `passes + stats_passes`.
    pub total_passes: u64,
    pub flags: Vec<Flag>,
    /// Degree-oracle queries, in ideal mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_queries: Option<u64>,
}

impl RunReport {
    /// Records a stats pass made before the estimator ran.
    pub fn with_stats_passes(mut self, stats_passes: u64) -> Self {
        self.config.stats_passes = stats_passes;
        self.config.total_passes = self.passes + stats_passes;
        self
    }

    pub fn has_flag(&self, f: Flag) -> bool {
        self.config.flags.contains(&f)
    }
}

/// Median of an odd-length (or any non-empty) slice; mean of the middle pair when even.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

#[derive(Clone, Debug, Default)]
struct RepOutcome {
    x: f64,
    ell: u64,
    stored_peak: u64,
    assignment_calls: u64,
    flags: BTreeSet<Flag>,
    table: AssignmentTable,
}

/// Per-repetition working state across the six passes.
struct Rep {
    seed: u64,
    out: RepOutcome,
    live: u64,
    done: bool,
    sample: Option<SampledEdgeSet>,
    draws: Vec<usize>,
    hits: Vec<Option<usize>>,
    records: Vec<TriangleRecord>,
}

impl Rep {
    fn new(seed: u64) -> Self {
        Rep {
            seed,
            out: RepOutcome::default(),
            live: 0,
            done: false,
            sample: None,
            draws: Vec::new(),
            hits: Vec::new(),
            records: Vec::new(),
        }
    }

    fn key(&self, role: Role) -> SubstreamKey {
        SubstreamKey::new(self.seed, role)
    }

    fn hold(&mut self, items: u64) {
        self.out.stored_peak = self.out.stored_peak.max(self.live + items);
    }

    fn finish(&mut self, x: f64, flag: Option<Flag>) {
        self.out.x = x;
        self.out.flags.extend(flag);
        self.done = true;
    }
}

struct Plan {
    n: u64,
    m: u64,
    r: u64,
    s: u64,
    params: AssignmentParams,
    cfg: EstimatorConfig,
}

/// Runs a single repetition (repetition index 0).
pub fn estimate_once(stream: &mut EdgeStream, stats: StreamStats, config: &EstimatorConfig) -> Result<(f64, RunReport)> {
    let cfg = EstimatorConfig {
        repetitions: 1,
        ..config.clone()
    };
    estimate(stream, stats, &cfg)
}

/// Runs `repetitions` independent repetitions and returns their median.
pub fn estimate(stream: &mut EdgeStream, stats: StreamStats, config: &EstimatorConfig) -> Result<(f64, RunReport)> {
    config.validate()?;
    let scaled = |c: f64| c * config.scale;
    let r = compute_r(stats.n, stats.m, config.epsilon, config.t_hat, config.kappa_hat, scaled(config.c_r))?;
    let s = compute_s(stats.n, stats.m, config.epsilon, config.t_hat, config.kappa_hat, scaled(config.c_s))?;
    let plan = Plan {
        n: stats.n,
        m: stats.m,
        r: r.min(stats.m),
        s,
        params: config.assignment_params(stats.m),
        cfg: config.clone(),
    };
    let start = stream.passes();
    let reps: Vec<u64> = (0..config.repetitions as u64).collect();
    let outcomes = if config.share_passes {
        run_batch(stream, &plan, &reps)?
    } else {
        let mut all = Vec::with_capacity(reps.len());
        for &rep in &reps {
            all.extend(run_batch(stream, &plan, &[rep])?);
        }
        all
    };
    let passes = stream.passes() - start;

    let xs: Vec<f64> = outcomes.iter().map(|o| o.x).collect();
    let estimate = median(&xs);
    let mut flags: BTreeSet<Flag> = outcomes.iter().flat_map(|o| o.flags.iter().copied()).collect();
    if config.sub_theoretical() {
        flags.insert(Flag::SubTheoretical);
    }
    let stored_edges_peak = if config.share_passes {
        outcomes.iter().map(|o| o.stored_peak).sum()
    } else {
        outcomes.iter().map(|o| o.stored_peak).max().unwrap_or(0)
    };
    let report = RunReport {
        estimate,
        passes,
        stored_edges_peak,
        r: plan.r,
        ell: outcomes.iter().map(|o| o.ell).max().unwrap_or(0),
        s: plan.s,
        assignment_calls: outcomes.iter().map(|o| o.assignment_calls).sum(),
        memo_size: outcomes.iter().map(|o| o.table.len() as u64).sum(),
        seed: config.seed,
        config: ReportConfig {
            mode: "main".into(),
            epsilon: config.epsilon,
            t_hat: config.t_hat,
            kappa_hat: config.kappa_hat,
            c_r: config.c_r,
            c_ell: config.c_ell,
            c_s: config.c_s,
            scale: config.scale,
            repetitions: config.repetitions,
            share_passes: config.share_passes,
            abort_multiplier: config.abort_multiplier,
            stats_passes: 0,
            total_passes: passes,
            flags: flags.into_iter().collect(),
            oracle_queries: None,
        },
        repetition_estimates: xs,
        assignment_tables: outcomes.into_iter().map(|o| o.table).collect(),
    };
    Ok((estimate, report))
}

fn run_batch(stream: &mut EdgeStream, plan: &Plan, reps: &[u64]) -> Result<Vec<RepOutcome>> {
    let mut reps: Vec<Rep> = reps.iter().map(|&i| Rep::new(plan.cfg.repetition_seed(i))).collect();
    if plan.m == 0 {
        for rep in &mut reps {
            rep.finish(0.0, Some(Flag::EmptyStream));
        }
        return Ok(reps.into_iter().map(|r| r.out).collect());
    }
    if plan.r >= plan.m && plan.cfg.exact_fallback {
        let g = stored_graph(stream.collect_pass()?);
        let t = triangles_exact_cn(&g) as f64;
        for rep in &mut reps {
            rep.hold(plan.m);
            rep.finish(t, Some(Flag::ExactFallback));
        }
        return Ok(reps.into_iter().map(|r| r.out).collect());
    }

    // pass 1: R
    let mut banks: Vec<ReservoirBank<Edge>> = reps
        .iter_mut()
        .map(|rep| {
            rep.hold(plan.r);
            uniform_edge_bank(plan.r as usize, rep.key(Role::EdgeSample))
        })
        .collect();
    stream.pass(|e| banks.iter_mut().for_each(|b| b.offer(&e, 1)))?;
    let samples: Vec<Vec<Edge>> = banks
        .into_iter()
        .map(|b| b.into_picks().into_iter().map(|p| p.expect("m > 0")).collect())
        .collect();

    // pass 2: degrees of R's endpoints
    let mut queries: Vec<ClosureQuery> = samples
        .iter()
        .map(|r| {
            let mut q = ClosureQuery::new();
            for e in r {
                q.add_vertex(e.u);
                q.add_vertex(e.v);
            }
            q
        })
        .collect();
    for (rep, q) in reps.iter_mut().zip(&queries) {
        rep.live = plan.r;
        rep.hold(q.stored_items() as u64);
    }
    stream.pass(|e| queries.iter_mut().for_each(|q| q.observe(e)))?;
    let degrees: Vec<ClosureAnswer> = queries.into_iter().map(ClosureQuery::finish).collect();

    // degree-proportional draws from R, no pass
    for ((rep, r), deg) in reps.iter_mut().zip(samples).zip(&degrees) {
        let set = SampledEdgeSet::new(r, |v| deg.degree(v).expect("queried"));
        rep.live = plan.r + deg.degrees().len() as u64;
        if set.d_r == 0 {
            rep.finish(0.0, Some(Flag::SparseSample));
            continue;
        }
        let mut ell = compute_ell(plan.n, plan.m, plan.cfg.epsilon, plan.cfg.t_hat, plan.r, set.d_r, plan.cfg.c_ell * plan.cfg.scale)?;
        if ell > plan.m {
            ell = plan.m;
            rep.out.flags.insert(Flag::EllCapped);
        }
        rep.out.ell = ell;
        rep.draws = weighted_pick(&set.weights(), ell as usize, rep.key(Role::DegreePick))?;
        rep.live += ell;
        rep.hold(0);
        rep.sample = Some(set);
    }

    // pass 3: one neighbour per draw
    let mut neighbor_banks: Vec<Option<NeighborBank>> = reps
        .iter_mut()
        .map(|rep| {
            if rep.done {
                return None;
            }
            let set = rep.sample.as_ref().unwrap();
            let requests = rep
                .draws
                .iter()
                .map(|&i| NeighborRequest {
                    edge: set.edges[i],
                    anchor: set.degrees[i].anchor,
                    want: Want::Samples(1),
                })
                .collect();
            let bank = NeighborBank::new(requests, rep.key(Role::Neighbor));
            rep.hold(bank.stored_items() as u64);
            Some(bank)
        })
        .collect();
    stream.pass(|e| neighbor_banks.iter_mut().flatten().for_each(|b| b.observe(e)))?;
    let wedges: Vec<Option<Vec<VertexId>>> = neighbor_banks
        .into_iter()
        .map(|b| {
            b.map(|b| {
                b.finish()
                    .into_iter()
                    .map(|ws| ws.first().copied().expect("anchor has an incident edge"))
                    .collect()
            })
        })
        .collect();

    // pass 4: closure of each wedge and the degree of every third vertex
    let mut queries: Vec<Option<ClosureQuery>> = reps
        .iter_mut()
        .zip(&wedges)
        .map(|(rep, ws)| {
            let ws = ws.as_ref()?;
            let set = rep.sample.as_ref().unwrap();
            let mut q = ClosureQuery::new();
            for (&i, &w) in rep.draws.iter().zip(ws) {
                let other = set.edges[i].other(set.degrees[i].anchor);
                q.add_pair(other, w);
                q.add_vertex(w);
            }
            rep.hold(ws.len() as u64 + q.stored_items() as u64);
            Some(q)
        })
        .collect();
    stream.pass(|e| queries.iter_mut().flatten().for_each(|q| q.observe(e)))?;

    for (((rep, q), ws), deg) in reps.iter_mut().zip(queries).zip(&wedges).zip(&degrees) {
        let (Some(q), Some(ws)) = (q, ws) else { continue };
        let ans = q.finish();
        let set = rep.sample.as_ref().unwrap();
        let vertex_degree = |v: VertexId| ans.degree(v).or_else(|| deg.degree(v)).expect("degree was queried");
        let mut index: HashMap<Triangle, usize> = HashMap::new();
        rep.hits = rep
            .draws
            .iter()
            .zip(ws)
            .enumerate()
            .map(|(draw, (&i, &w))| {
                let t = set.closed_triangle(i, w, |a, b| ans.is_edge(a, b))?;
                let next = rep.records.len();
                let slot = *index.entry(t).or_insert(next);
                if slot == next {
                    let degrees = t.0.map(vertex_degree);
                    rep.records.push(TriangleRecord { triangle: t, degrees, origin: draw });
                }
                Some(slot)
            })
            .collect();
        rep.live += 3 * rep.records.len() as u64;
        rep.hold(0);
    }

    // passes 5 and 6: assignment sampling for every discovered triangle
    let mut samplers: Vec<Option<WedgeSampler>> = Vec::with_capacity(reps.len());
    let mut capped: Vec<bool> = vec![false; reps.len()];
    for (k, rep) in reps.iter_mut().enumerate() {
        if rep.done {
            samplers.push(None);
            continue;
        }
        let pending: Vec<TriangleRecord> =
            rep.records.iter().filter(|t| !rep.out.table.contains(&t.triangle)).copied().collect();
        let sampler = WedgeSampler::new(pending, &plan.params, plan.s, rep.key(Role::AssignmentNeighbor));
        let needed = sampler.planned_capacity(plan.s);
        if over_budget(rep.live + 2 * needed, expected_items(plan, rep), plan.cfg.abort_multiplier) {
            rep.finish(0.0, Some(Flag::Aborted));
            samplers.push(None);
            continue;
        }
        if needed > plan.m {
            capped[k] = true;
            rep.out.flags.insert(Flag::WedgeCap);
        }
        samplers.push(Some(sampler));
    }
    let any_capped = capped.iter().any(|&c| c);
    let mut stored_edges: Vec<Edge> = Vec::new();
    stream.pass(|e| {
        if any_capped {
            stored_edges.push(e);
        }
        for (s, &c) in samplers.iter_mut().zip(&capped) {
            if let (Some(s), false) = (s, c) {
                s.observe(e);
            }
        }
    })?;
    let full_graph = any_capped.then(|| stored_graph_with_map(stored_edges));

    let mut checkers: Vec<Option<WedgeChecker>> = Vec::with_capacity(reps.len());
    for ((rep, sampler), &c) in reps.iter_mut().zip(samplers).zip(&capped) {
        let Some(sampler) = sampler else {
            checkers.push(None);
            continue;
        };
        if c {
            let (g, map) = full_graph.as_ref().unwrap();
            rep.hold(plan.m);
            let t_of = |e: Edge| {
                let (a, b) = (map[&e.u], map[&e.v]);
                let na = g.neighbors(a);
                let nb = g.neighbors(b);
                na.iter().filter(|x| nb.binary_search(x).is_ok()).count() as u64
            };
            for rec in sampler.records() {
                crate::assignment::assignment(
                    rec,
                    |e| Some(WedgeTally { samples: 0, closed: t_of(e), exhaustive: true }),
                    &plan.params,
                    &mut rep.out.table,
                )?;
            }
            checkers.push(None);
        } else {
            rep.hold(sampler.stored_items() as u64);
            let checker = sampler.into_checker();
            rep.hold(checker.stored_items() as u64);
            checkers.push(Some(checker));
        }
    }
    stream.pass(|e| checkers.iter_mut().flatten().for_each(|c| c.observe(e)))?;
    for (rep, checker) in reps.iter_mut().zip(checkers) {
        if let Some(checker) = checker {
            checker.resolve(&plan.params, &mut rep.out.table)?;
        }
    }

    // Y and X
    for rep in reps.iter_mut().filter(|r| !r.done) {
        let set = rep.sample.as_ref().unwrap();
        let mut yes = 0u64;
        for (draw, hit) in rep.hits.iter().enumerate() {
            let Some(slot) = *hit else { continue };
            rep.out.assignment_calls += 1;
            let edge = set.edges[rep.draws[draw]];
            let record = rep.records[slot];
            if is_assigned(&record, edge, |_| None, &plan.params, &mut rep.out.table)? {
                yes += 1;
            }
        }
        let y = yes as f64 / rep.out.ell as f64;
        let x = plan.m as f64 / plan.r as f64 * set.d_r as f64 * y;
        rep.live += rep.out.table.len() as u64;
        rep.hold(0);
        rep.finish(x, None);
    }
    Ok(reps.into_iter().map(|r| r.out).collect())
}

fn over_budget(projected: u64, expected: f64, multiplier: Option<f64>) -> bool {
    multiplier.is_some_and(|k| projected as f64 > k * expected)
}

/// Storage a repetition is expected to need: `R`, its degree table, the
/// draws and their wedges, plus the assignment work of the expected number
/// of triangle discoveries (`3 r T / m` triangle incidences in `R`).
fn expected_items(plan: &Plan, rep: &Rep) -> f64 {
    let set = rep.sample.as_ref().unwrap();
    let ell = rep.out.ell as f64;
    let hit_rate = (3.0 * plan.r as f64 * plan.cfg.t_hat as f64 / (plan.m as f64 * set.d_r as f64)).min(1.0);
    let calls = ell * hit_rate;
    3.0 * plan.r as f64 + 3.0 * ell + calls * (4.0 + 6.0 * plan.s as f64)
}

fn stored_graph_with_map(edges: Vec<Edge>) -> (Graph, HashMap<VertexId, VertexId>) {
    let ids: BTreeSet<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    let map: HashMap<VertexId, VertexId> = ids.iter().enumerate().map(|(i, &v)| (v, i as VertexId)).collect();
    // the map is monotone, so canonical edges stay canonical
    let dense = edges.iter().map(|e| Edge { u: map[&e.u], v: map[&e.v] }).collect();
    (Graph::from_canonical(ids.len(), dense), map)
}

fn stored_graph(edges: Vec<Edge>) -> Graph {
    stored_graph_with_map(edges).0
}

/// Starts from `config.t_hat` and halves it until the estimate reaches the
/// current guess or the guess reaches 1. Experimental: the accuracy
/// guarantee only covers a single run with a valid lower bound.
pub fn estimate_with_restarts(
    stream: &mut EdgeStream,
    stats: StreamStats,
    config: &EstimatorConfig,
) -> Result<(f64, RunReport)> {
    let mut cfg = config.clone();
    let mut passes = 0;
    loop {
        let (est, mut report) = estimate(stream, stats, &cfg)?;
        passes += report.passes;
        if est >= cfg.t_hat as f64 || cfg.t_hat == 1 {
            report.passes = passes;
            report.config.total_passes = passes + report.config.stats_passes;
            report.config.flags.push(Flag::ExperimentalRestart);
            report.config.flags.sort();
            return Ok((est, report));
        }
        cfg.t_hat /= 2;
    }
}
