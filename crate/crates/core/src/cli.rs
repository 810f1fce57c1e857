//! The `triad` command-line tool: `gen`, `exact`, `estimate`, `bench`.
//!
//! Every flag can also be set through an environment variable named
//! `TRIAD_<FLAG>` (for example `TRIAD_SEED`, `TRIAD_EPSILON`). Exit codes:
//! 0 on success, 2 for a bad configuration or command line, 3 for a
//! malformed input file, 1 for anything else.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_manifest, write_csv, Manifest};
use crate::edgelist::{load_graph, save_graph, write_edges};
use crate::error::{Error, Result};
use crate::estimator::{estimate, estimate_with_restarts, EstimatorConfig, ReportConfig, RunReport};
use crate::generators::{
    gen_book, gen_erdos_renyi, gen_lb_instance, gen_preferential_attachment, gen_wheel, GroundTruth, LbInstanceSpec,
    LbKind,
};
use crate::graph::Graph;
use crate::ideal::{ideal_estimate, GraphOracle};
use crate::stream::EdgeStream;
use crate::triangles::triangles_exact_cn;

#[derive(Parser, Debug)]
#[command(name = "triad", version, about = "Streaming triangle counting for low-degeneracy graphs")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0, env = "TRIAD_SEED")]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "TRIAD_FORMAT")]
    pub format: Format,

    /// Skip the ground-truth summary `gen --out` prints.
    #[arg(long, global = true, env = "TRIAD_QUIET")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph and its ground-truth sidecar.
    Gen(GenArgs),
    /// Count triangles and degeneracy exactly.
    Exact {
        path: PathBuf,
    },
    /// Estimate the triangle count of an edge-list file.
    Estimate(EstimateArgs),
    /// Run a benchmark manifest and write one CSV row per trial.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: GenFamily,

    /// Edge-list output; `<out>.truth.json` receives the ground truth.
    /// Without it the edge list goes to stdout.
    #[arg(long, short, global = true, env = "TRIAD_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    Wheel {
        #[arg(long)]
        n: usize,
    },
    Book {
        #[arg(long)]
        k: usize,
    },
    /// Disjointness instance; `--kind no` shares `--shared` indices.
    Lb {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "N")]
        blocks: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        shared: usize,
    },
    /// Preferential attachment.
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        attach: usize,
    },
    /// Erdos-Renyi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prob: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Main,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    pub path: PathBuf,

    #[arg(long, value_enum, default_value_t = ModeArg::Main, env = "TRIAD_MODE")]
    pub mode: ModeArg,

    #[arg(long, default_value_t = 0.2, env = "TRIAD_EPSILON")]
    pub epsilon: f64,

    /// Lower bound on the triangle count.
    #[arg(long, env = "TRIAD_T_HAT")]
    pub t_hat: u64,

    /// Upper bound on the degeneracy (main mode).
    #[arg(long, env = "TRIAD_KAPPA_HAT")]
    pub kappa_hat: Option<u64>,

    #[arg(long, default_value_t = 1, env = "TRIAD_REPETITIONS")]
    pub repetitions: usize,

    /// Multiplier in (0, 1] on the sample-size constants.
    #[arg(long, default_value_t = 1.0, env = "TRIAD_SCALE")]
    pub scale: f64,

    /// Run all repetitions on the same six passes.
    #[arg(long, env = "TRIAD_SHARE_PASSES")]
    pub share_passes: bool,

    /// Abort a repetition past this many times its expected storage; 0 disables.
    #[arg(long, default_value_t = 10.0, env = "TRIAD_ABORT_MULTIPLIER")]
    pub abort_multiplier: f64,

    /// Write every repetition's assignment table as JSON.
    #[arg(long, env = "TRIAD_DEBUG_DUMP_ASSIGNMENTS")]
    pub debug_dump_assignments: Option<PathBuf>,

    /// Shuffle the stream order with this seed.
    #[arg(long, env = "TRIAD_ORDER_SEED")]
    pub order_seed: Option<u64>,

    #[arg(long, default_value_t = 7.0, env = "TRIAD_C_R")]
    pub c_r: f64,
    #[arg(long, default_value_t = 21.0, env = "TRIAD_C_ELL")]
    pub c_ell: f64,
    #[arg(long, default_value_t = 61.0, env = "TRIAD_C_S")]
    pub c_s: f64,

    /// Sample even when `r >= m` instead of counting exactly.
    #[arg(long, env = "TRIAD_NO_EXACT_FALLBACK")]
    pub no_exact_fallback: bool,

    /// Experimental: halve `--t-hat` until the estimate reaches it.
    #[arg(long, env = "TRIAD_RESTART")]
    pub restart: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    pub manifest: PathBuf,

    /// Write the table here instead of stdout.
    #[arg(long, short, env = "TRIAD_OUT")]
    pub out: Option<PathBuf>,

    /// Fill the wall_time_ms column (makes output run-dependent).
    #[arg(long, env = "TRIAD_TIMING")]
    pub timing: bool,
}

#[derive(Serialize)]
struct ExactReport {
    n: u64,
    m: u64,
    #[serde(rename = "T")]
    triangles: u64,
    kappa: u64,
    #[serde(rename = "d_E")]
    d_e: u64,
}

#[derive(Serialize)]
struct DumpEntry {
    triangle: [u32; 3],
    edge: Option<[u32; 2]>,
}

/// Parses `args` and runs the command, writing results to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    execute(&cli, out)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(cli, args, out),
        Command::Exact { path } => cmd_exact(cli, path, out),
        Command::Estimate(args) => cmd_estimate(cli, args, out),
        Command::Bench(args) => cmd_bench(cli, args, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn emit<S: Serialize>(cli: &Cli, out: &mut dyn Write, value: &S) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(value)?;
            String::from_utf8(w.into_inner().map_err(|e| Error::Internal(e.to_string()))?)
                .map_err(|e| Error::Internal(e.to_string()))?
        }
    };
    write_out(out, &text)
}

fn cmd_gen(cli: &Cli, args: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let (g, truth): (Graph, GroundTruth) = match args.family {
        GenFamily::Wheel { n } => gen_wheel(n)?,
        GenFamily::Book { k } => gen_book(k)?,
        GenFamily::Lb { p, q, blocks, kind, shared } => {
            let kind = match kind {
                KindArg::Yes => LbKind::Yes,
                KindArg::No => LbKind::No,
            };
            gen_lb_instance(&LbInstanceSpec::random(p, q, blocks, kind, shared, cli.seed)?)?
        }
        GenFamily::Pa { n, attach } => {
            let g = gen_preferential_attachment(n, attach, cli.seed)?;
            let t = GroundTruth::compute("pa", &g);
            (g, t)
        }
        GenFamily::Er { n, prob } => {
            let g = gen_erdos_renyi(n, prob, cli.seed)?;
            let t = GroundTruth::compute("er", &g);
            (g, t)
        }
    };
    match &args.out {
        Some(path) => {
            save_graph(path, &g)?;
            truth.save(&GroundTruth::sidecar_path(path))?;
            if !cli.quiet {
                emit(cli, out, &truth)?;
            }
            Ok(())
        }
        None => write_edges(&mut *out, g.edges()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn cmd_exact(cli: &Cli, path: &Path, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(path)?;
    let report = ExactReport {
        n: g.n() as u64,
        m: g.m() as u64,
        triangles: triangles_exact_cn(&g),
        kappa: g.degeneracy() as u64,
        d_e: g.sum_edge_degrees(),
    };
    emit(cli, out, &report)
}

fn cmd_estimate(cli: &Cli, args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let report = match args.mode {
        ModeArg::Main => estimate_main(cli, args)?,
        ModeArg::Ideal => estimate_ideal(cli, args)?,
    };
    if let Some(path) = &args.debug_dump_assignments {
        let dump: Vec<Vec<DumpEntry>> = report
            .assignment_tables
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(tri, e)| DumpEntry { triangle: tri.0, edge: e.map(|e| [e.u, e.v]) })
                    .collect()
            })
            .collect();
        let text = serde_json::to_string_pretty(&dump)? + "\n";
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    match cli.format {
        Format::Json => emit(cli, out, &report),
        Format::Csv => emit(cli, out, &CsvReport::from(&report)),
    }
}

fn estimate_main(cli: &Cli, args: &EstimateArgs) -> Result<RunReport> {
    let kappa_hat = args
        .kappa_hat
        .ok_or_else(|| Error::Config("--kappa-hat is required in main mode".into()))?;
    let cfg = EstimatorConfig {
        c_r: args.c_r,
        c_ell: args.c_ell,
        c_s: args.c_s,
        scale: args.scale,
        repetitions: args.repetitions,
        seed: cli.seed,
        share_passes: args.share_passes,
        abort_multiplier: (args.abort_multiplier > 0.0).then_some(args.abort_multiplier),
        exact_fallback: !args.no_exact_fallback,
        ..EstimatorConfig::new(args.epsilon, args.t_hat, kappa_hat)
    };
    cfg.validate()?;
    let mut stream = EdgeStream::open(&args.path, args.order_seed)?;
    let stats = stream.stats()?;
    let (_, report) = if args.restart {
        estimate_with_restarts(&mut stream, stats, &cfg)?
    } else {
        estimate(&mut stream, stats, &cfg)?
    };
    Ok(report.with_stats_passes(1))
}

fn estimate_ideal(cli: &Cli, args: &EstimateArgs) -> Result<RunReport> {
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0, 1), got {}", args.epsilon)));
    }
    let g = load_graph(&args.path)?;
    let oracle = GraphOracle::new(&g);
    let mut stream = EdgeStream::from_graph(&g, args.order_seed);
    let run = ideal_estimate(&mut stream, &oracle, args.epsilon, args.t_hat, cli.seed)?;
    let closed = run.values.iter().filter(|&&x| x > 0.0).count() as u64;
    Ok(RunReport {
        estimate: run.estimate,
        passes: run.passes,
        // per instance: the picked edge, its neighbour and one closure pair
        stored_edges_peak: 3 * run.instances as u64,
        r: 0,
        ell: run.instances as u64,
        s: 0,
        assignment_calls: closed,
        memo_size: 0,
        seed: cli.seed,
        config: ReportConfig {
            mode: "ideal".into(),
            epsilon: args.epsilon,
            t_hat: args.t_hat,
            kappa_hat: args.kappa_hat.unwrap_or(0),
            c_r: 0.0,
            c_ell: 0.0,
            c_s: 0.0,
            scale: 1.0,
            repetitions: run.groups,
            share_passes: true,
            abort_multiplier: None,
            stats_passes: 0,
            total_passes: run.passes,
            flags: Vec::new(),
            oracle_queries: Some(oracle.queries()),
        },
        repetition_estimates: Vec::new(),
        assignment_tables: Vec::new(),
    })
}

#[derive(Serialize)]
struct CsvReport {
    mode: String,
    estimate: f64,
    passes: u64,
    stored_edges_peak: u64,
    r: u64,
    ell: u64,
    s: u64,
    assignment_calls: u64,
    memo_size: u64,
    seed: u64,
}

impl From<&RunReport> for CsvReport {
    fn from(r: &RunReport) -> Self {
        CsvReport {
            mode: r.config.mode.clone(),
            estimate: r.estimate,
            passes: r.passes,
            stored_edges_peak: r.stored_edges_peak,
            r: r.r,
            ell: r.ell,
            s: r.s,
            assignment_calls: r.assignment_calls,
            memo_size: r.memo_size,
            seed: r.seed,
        }
    }
}

fn cmd_bench(_cli: &Cli, args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let manifest = Manifest::load(&args.manifest)?;
    let rows = run_manifest(&manifest, args.timing)?;
    match &args.out {
        Some(path) => write_csv(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?), &rows),
        None => write_csv(out, &rows),
    }
}

/// Runs the process command line and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("triad: {e}");
            e.exit_code()
        }
    }
}
