//! Manifest-driven benchmark tables.
//!
//! A manifest lists experiments; each experiment names a graph family,
//! an estimator configuration and a trial count. Trial `i` uses seed
//! `seed + i` for both the stream order and the estimator, so a manifest
//! always reproduces the same table.
//!
//! ```json
//! {"experiments": [
//!   {"family": "book", "k": 998, "epsilon": 0.2, "scale": 0.005,
//!    "repetitions": 11, "share_passes": true, "trials": 30, "seed": 1}
//! ]}
//! ```

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{estimate, EstimatorConfig};
use crate::generators::{
    gen_book, gen_erdos_renyi, gen_lb_instance, gen_preferential_attachment, gen_wheel, GroundTruth, LbInstanceSpec,
    LbKind,
};
use crate::graph::Graph;
use crate::ideal::{ideal_estimate, GraphOracle};
use crate::stream::{EdgeStream, StreamStats};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Wheel {
        n: usize,
    },
    Book {
        k: usize,
    },
    Lb {
        p: usize,
        q: usize,
        #[serde(rename = "N")]
        blocks: usize,
        kind: LbKind,
        #[serde(default = "one")]
        shared: usize,
    },
    Pa {
        n: usize,
        attach: usize,
    },
    Er {
        n: usize,
        prob: f64,
    },
}

fn one() -> usize {
    1
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Wheel { .. } => "wheel",
            Family::Book { .. } => "book",
            Family::Lb { .. } => "lb",
            Family::Pa { .. } => "pa",
            Family::Er { .. } => "er",
        }
    }

    /// Builds the graph; random families draw from `seed`.
    pub fn generate(&self, seed: u64) -> Result<(Graph, GroundTruth)> {
        match *self {
            Family::Wheel { n } => gen_wheel(n),
            Family::Book { k } => gen_book(k),
            Family::Lb { p, q, blocks, kind, shared } => {
                gen_lb_instance(&LbInstanceSpec::random(p, q, blocks, kind, shared, seed)?)
            }
            Family::Pa { n, attach } => {
                let g = gen_preferential_attachment(n, attach, seed)?;
                let t = GroundTruth::compute("pa", &g);
                Ok((g, t))
            }
            Family::Er { n, prob } => {
                let g = gen_erdos_renyi(n, prob, seed)?;
                let t = GroundTruth::compute("er", &g);
                Ok((g, t))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    #[default]
    Main,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub mode: Mode,
    pub epsilon: f64,
    /// Defaults to the exact triangle count.
    #[serde(default)]
    pub t_hat: Option<u64>,
    /// Defaults to the exact degeneracy.
    #[serde(default)]
    pub kappa_hat: Option<u64>,
    #[serde(default = "unit")]
    pub scale: f64,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub share_passes: bool,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiments: Vec<Experiment>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

/// One trial. Field names are the CSV header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: u64,
    pub m: u64,
    #[serde(rename = "T_exact")]
    pub t_exact: u64,
    pub kappa: u64,
    pub epsilon: f64,
    pub t_hat: u64,
    pub kappa_hat: u64,
    pub estimate: f64,
    /// Empty when the exact count is zero.
    pub relative_error: Option<f64>,
    pub passes: u64,
    pub stored_edges_peak: u64,
    pub r: u64,
    pub ell: u64,
    pub s: u64,
    pub seed: u64,
    /// Empty unless timing was requested.
    pub wall_time_ms: Option<f64>,
}

fn trial(g: &Graph, truth: &GroundTruth, exp: &Experiment, seed: u64, timing: bool) -> Result<BenchRow> {
    let t_hat = exp.t_hat.unwrap_or(truth.triangles).max(1);
    let kappa_hat = exp.kappa_hat.unwrap_or(truth.kappa).max(1);
    let start = Instant::now();
    let mut stream = EdgeStream::from_graph(g, Some(seed));
    let stats = StreamStats { n: g.n() as u64, m: g.m() as u64 };
    let (est, passes, peak, r, ell, s) = match exp.mode {
        Mode::Main => {
            let cfg = EstimatorConfig {
                scale: exp.scale,
                repetitions: exp.repetitions,
                share_passes: exp.share_passes,
                seed,
                ..EstimatorConfig::new(exp.epsilon, t_hat, kappa_hat)
            };
            let (est, rep) = estimate(&mut stream, stats, &cfg)?;
            (est, rep.passes, rep.stored_edges_peak, rep.r, rep.ell, rep.s)
        }
        Mode::Ideal => {
            let oracle = GraphOracle::new(g);
            let run = ideal_estimate(&mut stream, &oracle, exp.epsilon, t_hat, seed)?;
            (run.estimate, run.passes, 3 * run.instances as u64, 0, run.instances as u64, 0)
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRow {
        family: exp.family.name().to_string(),
        n: truth.n,
        m: truth.m,
        t_exact: truth.triangles,
        kappa: truth.kappa,
        epsilon: exp.epsilon,
        t_hat,
        kappa_hat,
        estimate: est,
        relative_error: (truth.triangles > 0)
            .then(|| (est - truth.triangles as f64).abs() / truth.triangles as f64),
        passes,
        stored_edges_peak: peak,
        r,
        ell,
        s,
        seed,
        wall_time_ms: timing.then_some(elapsed),
    })
}

/// Runs every trial of every experiment; rows come back in manifest order.
pub fn run_manifest(manifest: &Manifest, timing: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for exp in &manifest.experiments {
        let (g, truth) = exp.family.generate(exp.seed)?;
        let batch: Vec<BenchRow> = (0..exp.trials as u64)
            .into_par_iter()
            .map(|i| trial(&g, &truth, exp, exp.seed + i, timing))
            .collect::<Result<_>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

pub fn write_csv(out: impl Write, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))
}

pub const BENCH_HEADER: [&str; 17] = [
    "family",
    "n",
    "m",
    "T_exact",
    "kappa",
    "epsilon",
    "t_hat",
    "kappa_hat",
    "estimate",
    "relative_error",
    "passes",
    "stored_edges_peak",
    "r",
    "ell",
    "s",
    "seed",
    "wall_time_ms",
];
