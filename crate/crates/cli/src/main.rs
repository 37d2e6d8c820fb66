use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcore::graph::{read_coreness, write_coreness, write_edge_list};
use kcore::metrics::{activation_report, edge_access_report, write_records};
use kcore::{
    decompose, first_mismatch, generate_graph, load_graph, Algorithm, Error, Format, Graph,
    GraphSpec, MetricsFormat, MetricsRecord, Options,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "kcore",
    version,
    about = "k-core decomposition with instrumented parallel engines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute coreness with one algorithm.
    Decompose(DecomposeArgs),
    /// Check algorithms (or a coreness file) against the serial oracle.
    Verify(VerifyArgs),
    /// Run every (algorithm, workers) pair and emit one CSV of metrics.
    Bench(BenchArgs),
    /// Activation and edge-access distributions of one traced run.
    Stats(StatsArgs),
    /// Write a synthetic graph as an edge list.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// edgelist | matrix-market; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct WorkerArgs {
    /// Worker threads.
    #[arg(long, env = "KCORE_WORKERS", default_value_t = default_workers(),
          value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
}

#[derive(Args)]
struct EngineArgs {
    /// Vertices per work chunk handed to a worker.
    #[arg(long, default_value_t = kcore::runtime::DEFAULT_CHUNK as u32,
          value_parser = clap::value_parser!(u32).range(1..))]
    chunk: u32,
    /// Run the per-iteration brute-force invariant sweeps.
    #[arg(long)]
    debug_invariants: bool,
}

impl EngineArgs {
    fn options(&self, workers: u32, trace: bool) -> Options {
        Options {
            workers: workers as usize,
            chunk: self.chunk as usize,
            trace,
            check_invariants: self.debug_invariants,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    workers: WorkerArgs,
    #[arg(long)]
    algo: Algorithm,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Coreness file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Metrics record destination.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    metrics_format: MetricsFormat,
    /// Collect per-vertex and per-entry counters.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    workers: WorkerArgs,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Algorithms to compare; all parallel ones by default.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algorithm>,
    /// Compare this coreness file instead of running algorithms.
    #[arg(long)]
    coreness: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    algo: Vec<Algorithm>,
    /// Comma-separated worker counts.
    #[arg(long, value_delimiter = ',', default_value = "1",
          value_parser = clap::value_parser!(u32).range(1..))]
    workers: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    workers: WorkerArgs,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    algo: Algorithm,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Er,
    ChungLu,
    StarTail,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Vertex count (er, chung-lu) or number of concurrent removers (star-tail).
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 2.5)]
    exponent: f64,
    #[arg(long, default_value_t = 8.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Star-tail: hub residual degree above k when the removers leave.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Star-tail: coreness of the removers and of the hub.
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn default_workers() -> u32 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u32)
}

/// Failures that are not library errors: a verification mismatch.
enum Failure {
    Error(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(e.into())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn infer_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mtx" | "mm") => Format::MatrixMarket,
        _ => Format::EdgeList,
    }
}

fn load(input: &InputArgs) -> kcore::Result<Graph> {
    let format = input.format.unwrap_or_else(|| infer_format(&input.input));
    let file = File::open(&input.input)?;
    load_graph(BufReader::new(file), format)
}

fn graph_name(input: &InputArgs) -> String {
    input
        .input
        .file_stem()
        .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned())
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_decompose(a: DecomposeArgs) -> CmdResult {
    let g = load(&a.input)?;
    let result = decompose(&g, a.algo, &a.engine.options(a.workers.workers, a.trace))?;
    write_coreness(&g, &result.coreness, sink(a.output.as_deref())?)?;

    let record = MetricsRecord::new(&result, &graph_name(&a.input), &g);
    match &a.metrics {
        Some(path) => write_records(
            &[record],
            BufWriter::new(File::create(path)?),
            a.metrics_format,
        )?,
        // keep stdout for coreness when it is used
        None if a.output.is_none() => {
            write_records(&[record], io::stderr().lock(), a.metrics_format)?
        }
        None => write_records(&[record], io::stdout().lock(), a.metrics_format)?,
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let g = match load(&a.input) {
        Ok(g) => g,
        Err(Error::EmptyInput) => Graph::empty(),
        Err(e) => return Err(e.into()),
    };
    let oracle = decompose(&g, Algorithm::Bz, &Options::default())?.coreness;

    if let Some(path) = &a.coreness {
        let claimed = read_coreness(BufReader::new(File::open(path)?))?;
        let mut by_label: Vec<(u64, u32)> = g
            .vertices()
            .map(|v| (g.label(v), oracle[v as usize]))
            .collect();
        by_label.sort_unstable();
        if claimed.len() != by_label.len() {
            return Err(Failure::Mismatch(format!(
                "{} lists {} vertices, graph has {}",
                path.display(),
                claimed.len(),
                by_label.len()
            )));
        }
        let mut claimed = claimed;
        claimed.sort_unstable_by_key(|&(label, _)| label);
        for (&(want_label, want), &(label, got)) in by_label.iter().zip(&claimed) {
            if label != want_label {
                return Err(Failure::Mismatch(format!(
                    "vertex {want_label} missing from {}",
                    path.display()
                )));
            }
            if got != want {
                return Err(Failure::Mismatch(format!(
                    "vertex {label}: file has {got}, expected {want}"
                )));
            }
        }
        println!("ok {} vertices", by_label.len());
        return Ok(());
    }

    let algos = if a.algo.is_empty() {
        Algorithm::PARALLEL.to_vec()
    } else {
        a.algo
    };
    let opts = a.engine.options(a.workers.workers, false);
    for algo in algos {
        let got = decompose(&g, algo, &opts)?.coreness;
        if let Some(v) = first_mismatch(&oracle, &got) {
            return Err(Failure::Mismatch(format!(
                "{algo}: vertex {}: got {}, expected {}",
                g.label(v as u32),
                got[v],
                oracle[v]
            )));
        }
        println!("ok {algo}");
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let g = load(&a.input)?;
    let name = graph_name(&a.input);
    let mut records = Vec::new();
    for &algo in &a.algo {
        for &workers in &a.workers {
            for _ in 0..a.reps {
                let result = decompose(&g, algo, &a.engine.options(workers, false))?;
                records.push(MetricsRecord::new(&result, &name, &g));
            }
        }
    }
    write_records(&records, sink(a.output.as_deref())?, MetricsFormat::Csv)?;
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> CmdResult {
    let g = load(&a.input)?;
    let result = decompose(&g, a.algo, &a.engine.options(a.workers.workers, true))?;
    let report = json!({
        "algorithm": a.algo.name(),
        "graph": graph_name(&a.input),
        "iterations": result.metrics.iterations,
        "activation": activation_report(&result.metrics)?,
        "edge_access": edge_access_report(&result.metrics)?,
    });
    let mut w = sink(a.output.as_deref())?;
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(&report).map_err(Error::from)?
    )?;
    w.flush()?;
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let spec = match a.model {
        Model::Er => GraphSpec::ErdosRenyi {
            n: a.n,
            p: a.p,
            seed: a.seed,
        },
        Model::ChungLu => GraphSpec::ChungLu {
            n: a.n,
            exponent: a.exponent,
            avg_degree: a.avg_degree,
            seed: a.seed,
        },
        Model::StarTail => GraphSpec::StarTail {
            removers: a.n,
            m: a.m,
            k: a.k,
        },
    };
    let g = generate_graph(&spec)?;
    write_edge_list(&g, sink(a.output.as_deref())?)?;
    Ok(())
}
