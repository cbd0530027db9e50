//! The `recolor` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 infeasible parameters.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coloring::{apply_trace, verify_trace, Coloring, Trace};
use crate::error::{Error, Result};
use crate::experiments::{
    run_coupling_experiment, run_density_experiment, run_mis_experiment, run_scaling_experiment,
    ExperimentConfig, Format, Table,
};
use crate::generate::{
    derive_seed, gen_gnm, gen_gnp, gen_planted_m, gen_planted_p, pair_count, random_partition,
    balanced_partition, Partition,
};
use crate::graph::Graph;
use crate::greedy::{default_palette, greedy_recolor, GreedyOptions, Selector};
use crate::io;
use crate::oracle::{build_hq, certify_trace, enumerate_colorings, giant_fraction, DEFAULT_ENUMERATION_CAP};
use crate::params::derive_params;
use crate::transform::{
    connect_pair, greedy_target, resolve_threshold, transform_to_target, work_palette_above,
    Threshold, TransformOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "recolor", version, about = "Recoloring walks between proper colorings of random graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Number of vertices.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Average degree; sets m = round(n d / 2) where m is not given.
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// Number of color classes.
    #[arg(long, global = true)]
    pub q: Option<usize>,
    /// Number of edges.
    #[arg(long, global = true)]
    pub m: Option<u64>,
    /// Edge probability over all pairs.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Base seed; required by every randomized subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of independent trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Primary output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Verify every emitted trace before writing it.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Worker threads for experiments.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Records,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Records => Format::Records,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenModel {
    Gnm,
    Gnp,
    Planted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelectorArg {
    Lowest,
    Degree,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Mis,
    Density,
    Coupling,
    Scaling,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    /// Graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Residual threshold; derived from the start coloring when absent.
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Vertex order within each greedy round.
    #[arg(long, value_enum, default_value_t = SelectorArg::Lowest)]
    pub selector: SelectorArg,
    /// Palette size (work palette for transforms).
    #[arg(long)]
    pub palette_size: Option<usize>,
    /// Key=value run report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// End coloring of the emitted trace.
    #[arg(long)]
    pub end: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph (and, for planted, its partition and coloring).
    Gen {
        #[arg(value_enum)]
        model: GenModel,
        /// Planted only: class sizes differ by at most one.
        #[arg(long)]
        balanced: bool,
        /// Planted only: write the class of each vertex.
        #[arg(long)]
        partition_out: Option<PathBuf>,
        /// Planted only: write the planted coloring.
        #[arg(long)]
        coloring_out: Option<PathBuf>,
    },
    /// Print derived parameters for a graph and partition, or for (n, m, q)
    /// with balanced classes.
    Params {
        /// Graph file.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Partition file; classes default to max id + 1.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Greedy re-coloring from a start coloring.
    Recolor {
        #[command(flatten)]
        walk: WalkArgs,
        /// Start coloring (a partition file works too).
        #[arg(long)]
        coloring: PathBuf,
        /// Per-round candidate counts as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Walk from one proper coloring to another.
    Transform {
        #[command(flatten)]
        walk: WalkArgs,
        /// Start coloring.
        #[arg(long)]
        from: PathBuf,
        /// Target coloring.
        #[arg(long)]
        to: PathBuf,
    },
    /// Walk from `from` to `to` through a common target coloring.
    Connect {
        #[command(flatten)]
        walk: WalkArgs,
        /// Start coloring.
        #[arg(long)]
        from: PathBuf,
        /// Target coloring.
        #[arg(long)]
        to: PathBuf,
        /// Target coloring; a greedy re-coloring of `from` when absent.
        #[arg(long)]
        via: Option<PathBuf>,
    },
    /// Check a trace move by move.
    Verify {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Start coloring of the trace.
        #[arg(long)]
        start: PathBuf,
        /// Trace file.
        #[arg(long)]
        trace: PathBuf,
        /// Expected end coloring.
        #[arg(long)]
        end: Option<PathBuf>,
    },
    /// Enumerate all proper q-colorings and the recoloring graph on them.
    Oracle {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Certify this trace against the exact recoloring graph.
        #[arg(long)]
        certify: Option<PathBuf>,
        /// Start coloring of the certified trace.
        #[arg(long)]
        start: Option<PathBuf>,
        /// `component_id,size` rows.
        #[arg(long)]
        components_out: Option<PathBuf>,
        /// Refuse to enumerate when q^n exceeds this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Seeded statistical experiments.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        /// Constant c of q >= c d / ln d, echoed as a diagnostic.
        #[arg(long)]
        c: Option<f64>,
        /// Random subsets per density trial.
        #[arg(long, default_value_t = 10_000)]
        subsets: usize,
        /// Comma-separated degrees for the scaling sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [16.0, 32.0, 64.0, 128.0])]
        d_sweep: Vec<f64>,
        /// Calibration band LO,HI on the experiment's size ratio.
        #[arg(long, value_name = "LO,HI", value_delimiter = ',')]
        band: Option<Vec<f64>>,
        /// Coupling only: pointwise medians as CSV.
        #[arg(long)]
        medians_out: Option<PathBuf>,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok,
    VerifyFailed,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn need<T>(x: Option<T>, flag: &str) -> Result<T> {
    x.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => io::write_atomic(p, contents),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders `key=value` lines in the requested format.
fn render_records(records: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Records => records.to_string(),
        OutputFormat::Csv => {
            let mut out = String::from("key,value\n");
            for line in records.lines() {
                let (k, v) = line.split_once('=').unwrap_or((line, ""));
                out.push_str(&format!("{},{}\n", csv_field(k), csv_field(v)));
            }
            out
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::VerifyFailed) => EXIT_VERIFY,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_infeasible() {
        EXIT_INFEASIBLE
    } else if matches!(e, Error::Trace(_) | Error::Internal(_)) {
        EXIT_VERIFY
    } else {
        EXIT_USAGE
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen {
            model,
            balanced,
            partition_out,
            coloring_out,
        } => gen(g, *model, *balanced, partition_out.as_deref(), coloring_out.as_deref()),
        Command::Params { graph, partition } => params(g, graph.as_deref(), partition.as_deref()),
        Command::Recolor {
            walk,
            coloring,
            trajectory,
        } => recolor(g, walk, coloring, trajectory.as_deref()),
        Command::Transform { walk, from, to } => transform(g, walk, from, to),
        Command::Connect { walk, from, to, via } => connect(g, walk, from, to, via.as_deref()),
        Command::Verify {
            graph,
            start,
            trace,
            end,
        } => verify(graph, start, trace, end.as_deref()),
        Command::Oracle {
            graph,
            certify,
            start,
            components_out,
            cap,
        } => oracle(g, graph, certify.as_deref(), start.as_deref(), components_out.as_deref(), *cap),
        Command::Experiment {
            kind,
            c,
            subsets,
            d_sweep,
            band,
            medians_out,
        } => experiment(g, *kind, *c, *subsets, d_sweep, band.as_deref(), medians_out.as_deref()),
    }
}

/// `m` from `--m`, else `round(n d / 2)` from `--d`.
fn edge_count(g: &Global, n: usize) -> Option<u64> {
    g.m.or_else(|| g.d.map(|d| (n as f64 * d / 2.0).round() as u64))
}

fn gen(
    g: &Global,
    model: GenModel,
    balanced: bool,
    partition_out: Option<&Path>,
    coloring_out: Option<&Path>,
) -> Result<Outcome> {
    let seed = need(g.seed, "seed")?;
    let n = need(g.n, "n")?;
    if model != GenModel::Planted && (partition_out.is_some() || coloring_out.is_some() || balanced) {
        return Err(usage("--balanced, --partition-out and --coloring-out need the planted model"));
    }
    let graph = match model {
        GenModel::Gnm => gen_gnm(n, need(edge_count(g, n), "m or --d")?, seed)?,
        GenModel::Gnp => {
            let p = match (g.p, g.d) {
                (Some(p), _) => p,
                (None, Some(d)) if n > 1 => d / (n - 1) as f64,
                (None, Some(_)) => 0.0,
                (None, None) => return Err(usage("--p or --d is required for gnp")),
            };
            gen_gnp(n, p, seed)?
        }
        GenModel::Planted => {
            let q = need(g.q, "q")?;
            let m = edge_count(g, n);
            let partition = if balanced {
                balanced_partition(n, q, derive_seed(seed, 0))?
            } else {
                random_partition(n, q, m.unwrap_or(0), derive_seed(seed, 0))?
            };
            let inst = match (m, g.p) {
                (Some(m), None) => gen_planted_m(&partition, m, derive_seed(seed, 1))?,
                (None, Some(p)) => gen_planted_p(&partition, p, derive_seed(seed, 1))?,
                _ => return Err(usage("planted needs exactly one of --m/--d or --p")),
            };
            if let Some(path) = partition_out {
                io::write_atomic(path, &io::format_partition(&inst.partition))?;
            }
            if let Some(path) = coloring_out {
                io::write_atomic(path, &io::format_coloring(&inst.sigma))?;
            }
            inst.graph
        }
    };
    emit(g.out.as_deref(), &io::format_graph(&graph))?;
    Ok(Outcome::Ok)
}

fn params(g: &Global, graph: Option<&Path>, partition: Option<&Path>) -> Result<Outcome> {
    let (n, m, part) = match (graph, partition) {
        (Some(gp), Some(pp)) => {
            let graph = io::read_graph(gp)?;
            let part = io::read_partition(pp, g.q)?;
            (graph.n(), graph.m() as u64, part)
        }
        (None, None) => {
            let n = need(g.n, "n")?;
            let m = need(edge_count(g, n), "m or --d")?;
            if m > pair_count(n) {
                return Err(Error::TooManyEdges {
                    m,
                    max: pair_count(n),
                });
            }
            (n, m, Partition::blocks(n, need(g.q, "q")?)?)
        }
        _ => return Err(usage("give both --graph and --partition, or neither")),
    };
    let p = derive_params(n, m, &part)?;
    emit(
        g.out.as_deref(),
        &render_records(&p.to_records(), g.format.unwrap_or(OutputFormat::Records)),
    )?;
    Ok(Outcome::Ok)
}

fn selector(arg: SelectorArg, seed: Option<u64>) -> Result<Selector> {
    Ok(match arg {
        SelectorArg::Lowest => Selector::LowestId,
        SelectorArg::Degree => Selector::HighestDegree,
        SelectorArg::Random => Selector::Random {
            seed: need(seed, "seed")?,
        },
    })
}

fn threshold(walk: &WalkArgs) -> Threshold {
    walk.threshold.map_or(Threshold::Derived, Threshold::Fixed)
}

/// Writes the trace (and optional end coloring and report), verifying first under `--strict`.
fn finish_walk(
    g: &Global,
    walk: &WalkArgs,
    graph: &Graph,
    trace: &Trace,
    end: &Coloring,
    records: &str,
) -> Result<Outcome> {
    if g.strict {
        if let Err(fault) = verify_trace(graph, trace) {
            eprintln!("verification failed: {fault}");
            return Ok(Outcome::VerifyFailed);
        }
    }
    emit(g.out.as_deref(), &io::format_trace(graph.n(), &trace.moves))?;
    if let Some(path) = &walk.end {
        io::write_atomic(path, &io::format_coloring(end))?;
    }
    let report = render_records(records, g.format.unwrap_or(OutputFormat::Records));
    match (&walk.report, &g.out) {
        (Some(path), _) => io::write_atomic(path, &report)?,
        (None, Some(_)) => emit(None, &report)?,
        (None, None) => eprint!("{report}"),
    }
    Ok(Outcome::Ok)
}

fn recolor(g: &Global, walk: &WalkArgs, coloring: &Path, trajectory: Option<&Path>) -> Result<Outcome> {
    let graph = io::read_graph(&walk.graph)?;
    let sigma = io::read_coloring(coloring)?;
    let palette = match walk.palette_size {
        Some(k) => (0..k as u32).collect(),
        None => default_palette(sigma.palette_hint() as usize, graph.max_degree()),
    };
    let opts = GreedyOptions {
        palette,
        threshold: resolve_threshold(&graph, &sigma, threshold(walk))?,
        selector: selector(walk.selector, g.seed)?,
    };
    let report = greedy_recolor(&graph, &sigma, &opts)?;
    if let Some(path) = trajectory {
        io::write_atomic(path, &report.trajectory_csv())?;
    }
    finish_walk(g, walk, &graph, &report.trace, &report.end, &report.to_records())
}

fn walk_inputs(walk: &WalkArgs, from: &Path) -> Result<(Graph, Coloring)> {
    Ok((io::read_graph(&walk.graph)?, io::read_coloring(from)?))
}

fn work_palette(walk: &WalkArgs, graph: &Graph, tau: &Coloring) -> Vec<u32> {
    let size = walk.palette_size.unwrap_or(2 * graph.max_degree() + 2);
    work_palette_above(tau, size)
}

fn transform(g: &Global, walk: &WalkArgs, from: &Path, to: &Path) -> Result<Outcome> {
    let (graph, sigma) = walk_inputs(walk, from)?;
    let tau = io::read_coloring(to)?;
    let opts = TransformOptions {
        threshold: threshold(walk),
        selector: selector(walk.selector, g.seed)?,
    };
    let rep = transform_to_target(&graph, &sigma, &tau, &work_palette(walk, &graph, &tau), &opts)?;
    finish_walk(g, walk, &graph, &rep.trace, &tau, &rep.to_records())
}

fn connect(g: &Global, walk: &WalkArgs, from: &Path, to: &Path, via: Option<&Path>) -> Result<Outcome> {
    let (graph, sigma) = walk_inputs(walk, from)?;
    let sigma_prime = io::read_coloring(to)?;
    let tau = match via {
        Some(p) => io::read_coloring(p)?,
        None => greedy_target(
            &graph,
            &sigma,
            &default_palette(sigma.palette_hint() as usize, graph.max_degree()),
        )?,
    };
    let opts = TransformOptions {
        threshold: threshold(walk),
        selector: selector(walk.selector, g.seed)?,
    };
    let rep = connect_pair(&graph, &sigma, &sigma_prime, &tau, &work_palette(walk, &graph, &tau), &opts)?;
    let records = format!(
        "trace_length={}\nfirst_leg={}\nsecond_leg={}\n",
        rep.trace.len(),
        rep.first_leg,
        rep.second_leg
    );
    finish_walk(g, walk, &graph, &rep.trace, &sigma_prime, &records)
}

fn verify(graph: &Path, start: &Path, trace: &Path, end: Option<&Path>) -> Result<Outcome> {
    let graph = io::read_graph(graph)?;
    let start = io::read_coloring(start)?;
    let (n, moves) = io::read_trace(trace)?;
    if n != graph.n() {
        println!("FAIL trace header has n={n}, graph has n={}", graph.n());
        return Ok(Outcome::VerifyFailed);
    }
    let t = Trace::new(start, moves);
    if let Err(fault) = verify_trace(&graph, &t) {
        match fault.step() {
            Some(step) => println!("FAIL step={step} {fault}"),
            None => println!("FAIL {fault}"),
        }
        return Ok(Outcome::VerifyFailed);
    }
    if let Some(path) = end {
        let expected = io::read_coloring(path)?;
        let reached = apply_trace(&graph, &t, true)?;
        if reached != expected {
            println!("FAIL trace ends at a different coloring than {}", path.display());
            return Ok(Outcome::VerifyFailed);
        }
    }
    println!("ok steps={}", t.len());
    Ok(Outcome::Ok)
}

fn oracle(
    g: &Global,
    graph: &Path,
    certify: Option<&Path>,
    start: Option<&Path>,
    components_out: Option<&Path>,
    cap: u128,
) -> Result<Outcome> {
    let graph = io::read_graph(graph)?;
    if let Some(n) = g.n {
        if n != graph.n() {
            return Err(usage(format!("--n {n} but the graph has {} vertices", graph.n())));
        }
    }
    let q = u32::try_from(need(g.q, "q")?).map_err(|_| usage("q too large"))?;
    let colorings = enumerate_colorings(&graph, q, cap)?;
    let h = build_hq(colorings, q);
    let mut records = format!(
        "Z_q={}\ncomponents={}\ngiant={:.4}\n",
        h.z(),
        h.components(),
        giant_fraction(&h)?
    );
    if let Some(path) = components_out {
        io::write_atomic(path, &h.components_csv())?;
    }
    let mut outcome = Outcome::Ok;
    if let Some(tp) = certify {
        let start = io::read_coloring(need(start, "start")?)?;
        let (_, moves) = io::read_trace(tp)?;
        let ok = certify_trace(&h, &Trace::new(start, moves))?;
        records.push_str(&format!("certified={ok}\n"));
        if !ok {
            outcome = Outcome::VerifyFailed;
        }
    }
    emit(
        g.out.as_deref(),
        &render_records(&records, g.format.unwrap_or(OutputFormat::Records)),
    )?;
    Ok(outcome)
}

#[allow(clippy::too_many_arguments)]
fn experiment(
    g: &Global,
    kind: ExperimentKind,
    c: Option<f64>,
    subsets: usize,
    d_sweep: &[f64],
    band: Option<&[f64]>,
    medians_out: Option<&Path>,
) -> Result<Outcome> {
    let seed = need(g.seed, "seed")?;
    let n = need(g.n, "n")?;
    let d = match kind {
        ExperimentKind::Scaling => g.d.unwrap_or(0.0),
        _ => need(g.d, "d")?,
    };
    let mut cfg = ExperimentConfig::new(n, d, g.trials.unwrap_or(1), seed);
    cfg.q = g.q;
    cfg.c = c;
    cfg.jobs = g.jobs;
    cfg.subsets = subsets;
    cfg.d_sweep = d_sweep.to_vec();
    match band {
        None => {}
        Some(&[lo, hi]) => cfg.band = Some((lo, hi)),
        Some(_) => return Err(usage("--band takes exactly two values, LO,HI")),
    }
    if medians_out.is_some() && kind != ExperimentKind::Coupling {
        return Err(usage("--medians-out applies to the coupling experiment only"));
    }
    let mut table: Table = match kind {
        ExperimentKind::Mis => run_mis_experiment(&cfg)?.table(),
        ExperimentKind::Density => run_density_experiment(&cfg)?.table(),
        ExperimentKind::Coupling => {
            let rep = run_coupling_experiment(&cfg)?;
            if let Some(path) = medians_out {
                io::write_atomic(path, &rep.medians_csv())?;
            }
            rep.table()
        }
        ExperimentKind::Scaling => run_scaling_experiment(&cfg)?.table(),
    };
    if let Some(tq) = cfg.gate_q() {
        table.notes.push(("gate_q".into(), format!("{tq:.6}")));
        if let Some(q) = cfg.q {
            table.notes.push(("q_meets_gate".into(), (q as f64 >= tq).to_string()));
        }
    }
    let format: Format = g.format.unwrap_or(OutputFormat::Csv).into();
    emit(g.out.as_deref(), &table.render(format))?;
    Ok(Outcome::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn records_to_csv() {
        let csv = render_records("a=1\nb=x, y\n", OutputFormat::Csv);
        assert_eq!(csv, "key,value\na,1\nb,\"x, y\"\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["recolor", "gen", "gnm", "--n", "5", "--m", "2"]), EXIT_USAGE);
        assert_eq!(run(["recolor", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["recolor", "gen", "gnm", "--bogus"]), EXIT_USAGE);
    }

    #[test]
    fn infeasible_exits_3() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.txt");
        let out = out.to_str().unwrap();
        let args = ["recolor", "gen", "gnm", "--n", "4", "--m", "7", "--seed", "1", "--out", out];
        assert_eq!(run(args), EXIT_INFEASIBLE);
        assert!(!Path::new(out).exists());
    }
}
