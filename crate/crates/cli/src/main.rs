//! `hyperrcd` command-line interface.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperrcd::flow::{DEFAULT_ALPHA, DEFAULT_ETA, DEFAULT_ITERATIONS};
use hyperrcd::io::{self, Format, IngestOptions};
use hyperrcd::{
    all_curvatures, build_measure, check_budget, clique_expansion, generate, nmi, run_flow_with, select, series,
    GenParams, Hypergraph, Mode, Partition, RunConfig, RunReport, Series,
};
use serde::Serialize;

/// Failure reported as `error[Code]: message` on one line.
#[derive(Debug)]
struct CliError {
    code: String,
    message: String,
}

impl From<hyperrcd::Error> for CliError {
    fn from(e: hyperrcd::Error) -> Self {
        Self {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: "IoError".into(),
        message: format!("{}: {e}", path.display()),
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: "UsageError".into(),
        message: message.into(),
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "hyperrcd", version, about = "Ricci curvature, Ricci flow and community detection on hypergraphs")]
struct Cli {
    /// Worker threads for curvature batches; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    HgText,
    HgJson,
    HyperedgeList,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::HgText => Format::HgText,
            FormatArg::HgJson => Format::HgJson,
            FormatArg::HyperedgeList => Format::HyperedgeList,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Supervised,
    Unsupervised,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Supervised => Mode::Supervised,
            ModeArg::Unsupervised => Mode::Unsupervised,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    D1,
    D2,
    D3,
}

impl From<SeriesArg> for Series {
    fn from(s: SeriesArg) -> Self {
        match s {
            SeriesArg::D1 => Series::D1,
            SeriesArg::D2 => Series::D2,
            SeriesArg::D3 => Series::D3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpandFormat {
    Dot,
    Csv,
}

#[derive(Args)]
struct Input {
    /// Hypergraph file.
    input: PathBuf,
    /// Input format [default: from the extension; .hg is hg-text, .json is
    /// hg-json, anything else a hyperedge list]
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Discard hyperedges with fewer than two members [default: off]
    #[arg(long)]
    drop_singletons: bool,
}

impl Input {
    fn load(&self) -> CliResult<Hypergraph> {
        let text = read(&self.input)?;
        let format = self.format.map_or_else(|| Format::from_path(&self.input), Format::from);
        let opts = IngestOptions {
            drop_singletons: self.drop_singletons,
        };
        Ok(io::parse(&text, format, opts)?)
    }
}

#[derive(Args, Clone, Copy)]
struct FlowArgs {
    /// Laziness of the random walk.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Flow step size.
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    /// Number of flow steps.
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    /// Lower clamp for weights [default: 1e-6 times the smallest initial weight]
    #[arg(long)]
    floor: Option<f64>,
}

#[derive(Args, Clone, Copy)]
struct DetectArgs {
    #[command(flatten)]
    flow: FlowArgs,
    /// How the cutoff is chosen; supervised needs labels.
    #[arg(long, value_enum, default_value = "supervised")]
    mode: ModeArg,
    /// Sweep every flow iterate and keep the best, not only the last [default: off]
    #[arg(long)]
    sweep_every_iteration: bool,
    /// Refuse inputs with more member pairs than this [default: no limit]
    #[arg(long)]
    pair_budget: Option<u64>,
}

impl DetectArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            alpha: self.flow.alpha,
            eta: self.flow.eta,
            iterations: self.flow.iterations,
            floor: self.flow.floor,
            mode: self.mode.into(),
            sweep_every_iteration: self.sweep_every_iteration,
            pair_budget: self.pair_budget,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Benchmark series.
    #[arg(long, value_enum, default_value = "d1")]
    series: SeriesArg,
    /// Point within the series, from 0.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the vertex count [default: from the series]
    #[arg(long)]
    n: Option<usize>,
    /// Override the number of blocks [default: from the series]
    #[arg(long)]
    q: Option<usize>,
    /// Override the average vertex degree [default: from the series]
    #[arg(long)]
    avg_degree: Option<f64>,
    /// Override the intra-block hyperedge probability [default: from the series]
    #[arg(long)]
    p_intra: Option<f64>,
}

impl GenArgs {
    fn params(&self) -> CliResult<GenParams> {
        let points = series(self.series.into());
        let base = *points
            .get(self.index)
            .ok_or_else(|| usage(format!("series has {} points, index {} given", points.len(), self.index)))?;
        Ok(GenParams {
            n: self.n.unwrap_or(base.n),
            q: self.q.unwrap_or(base.q),
            avg_degree: self.avg_degree.unwrap_or(base.avg_degree),
            p_intra: self.p_intra.unwrap_or(base.p_intra),
            seed: self.seed,
            ..base
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a hypergraph; prints its shape.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Print the random-walk measure of one vertex as JSON.
    Measure {
        #[command(flatten)]
        input: Input,
        /// Vertex whose measure is printed.
        #[arg(long)]
        vertex: usize,
        /// Laziness of the random walk.
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Curvature of every hyperedge as CSV.
    Curvature {
        #[command(flatten)]
        input: Input,
        /// Laziness of the random walk.
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight and curvature trajectory of the flow as CSV.
    Flow {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flow: FlowArgs,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flow, then cut heavy hyperedges into communities.
    Detect {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        detect: DetectArgs,
        /// Ground-truth labels file.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Where to write the detected partition [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the sweep curve as CSV [default: not written]
        #[arg(long)]
        sweep: Option<PathBuf>,
    },
    /// NMI between two labels files.
    Eval {
        /// Ground-truth labels file.
        #[arg(long)]
        truth: PathBuf,
        /// Predicted labels file.
        #[arg(long)]
        pred: PathBuf,
    },
    /// Sample a planted-partition hypergraph; writes PREFIX.hg and PREFIX.labels.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export the clique expansion for external tools.
    Expand {
        #[command(flatten)]
        input: Input,
        /// Export format.
        #[arg(long, value_enum, default_value = "dot")]
        to: ExpandFormat,
        /// Labels attached to DOT vertices.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Output file [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline on a file or on generated instances; writes a results directory.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Hypergraph file; omit to run on generated instances.
    input: Option<PathBuf>,
    /// Input format [default: from the extension]
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Discard hyperedges with fewer than two members [default: off]
    #[arg(long)]
    drop_singletons: bool,
    /// Ground-truth labels for a file input.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    detect: DetectArgs,
    #[command(flatten)]
    gen: GenArgs,
    /// Generated instances, with consecutive seeds from --seed.
    #[arg(long, default_value_t = 5)]
    repeat: usize,
    /// Results root.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Results subdirectory [default: the input file stem, or SERIES-INDEX]
    #[arg(long)]
    run_id: Option<String>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn emit(out: Option<&Path>, contents: &str) -> CliResult {
    match out {
        Some(path) => write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn load_labels(path: &Path) -> CliResult<Partition> {
    Ok(io::parse_labels(&read(path)?)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error[Internal]: {e}");
            return ExitCode::FAILURE;
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Validate { input } => {
            let g = input.load()?;
            let shape = io::shape(g.num_vertices(), g.edges());
            println!(
                "ok vertices={} hyperedges={} avg_hyperedge_size={:.2} avg_node_degree={:.2} member_pairs={}",
                shape.vertices,
                shape.hyperedges,
                shape.avg_hyperedge_size,
                shape.avg_node_degree,
                g.member_pairs()
            );
            Ok(())
        }
        Command::Measure { input, vertex, alpha } => {
            let g = input.load()?;
            print!("{}", to_json(&build_measure(&g, vertex, alpha)?));
            Ok(())
        }
        Command::Curvature { input, alpha, out } => {
            let g = input.load()?;
            let report = all_curvatures(&g, alpha)?;
            emit(out.as_deref(), &output::curvature_csv(&report))
        }
        Command::Flow { input, flow, out } => {
            let g = input.load()?;
            let params = RunConfig {
                alpha: flow.alpha,
                eta: flow.eta,
                iterations: flow.iterations,
                floor: flow.floor,
                ..RunConfig::default()
            }
            .flow_params();
            let trajectory = run_flow_with(&g, &params)?;
            emit(out.as_deref(), &output::flow_csv(&trajectory))
        }
        Command::Detect {
            input,
            detect,
            labels,
            out,
            sweep,
        } => {
            let g = input.load()?;
            let truth = labels.as_deref().map(load_labels).transpose()?;
            let config = detect.config();
            check_budget(&g, &config)?;
            let trajectory = run_flow_with(&g, &config.flow_params())?;
            let detection = select(&g, trajectory, &config, truth.as_ref())?;
            if let Some(path) = sweep {
                write(&path, &output::sweep_csv(&detection.sweep, truth.as_ref())?)?;
            }
            emit(out.as_deref(), &io::to_labels(detection.partition()))?;
            let best = detection.sweep.best_entry();
            eprintln!(
                "iteration={} cutoff={} communities={} score={:.6}",
                detection.iteration,
                best.cutoff,
                best.partition.num_communities(),
                best.score
            );
            Ok(())
        }
        Command::Eval { truth, pred } => {
            let score = nmi(&load_labels(&pred)?, &load_labels(&truth)?)?;
            println!("{score:.6}");
            Ok(())
        }
        Command::Generate { gen, out } => {
            let (g, truth) = generate(&gen.params()?)?;
            write(&out.with_extension("hg"), &io::to_hg_text(&g))?;
            write(&out.with_extension("labels"), &io::to_labels(&truth))
        }
        Command::Expand { input, to, labels, out } => {
            let g = input.load()?;
            let communities = labels.as_deref().map(load_labels).transpose()?;
            let ce = clique_expansion(&g);
            let text = match to {
                ExpandFormat::Dot => io::clique_to_dot(&ce, communities.as_ref()),
                ExpandFormat::Csv => io::clique_to_csv(&ce),
            };
            emit(out.as_deref(), &text)
        }
        Command::Run(args) => run(args),
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    input: Option<&'a Path>,
    labels: Option<&'a Path>,
    generator: Option<GenParams>,
    repeat: usize,
    config: RunConfig,
}

#[derive(Serialize, Default)]
struct Timings {
    ingest_seconds: f64,
    flow_seconds: f64,
    sweep_seconds: f64,
}

#[derive(Serialize)]
struct Aggregate<'a> {
    seeds: Vec<u64>,
    scores: Vec<f64>,
    mean_nmi: f64,
    runs: &'a [RunReport],
}

/// One pipeline pass; writes flow.csv, sweep.csv, partition.labels and
/// report.json into `dir`.
fn run_once(
    g: &Hypergraph,
    truth: Option<&Partition>,
    config: &RunConfig,
    seed: Option<u64>,
    dir: &Path,
    timings: &mut Timings,
) -> CliResult<RunReport> {
    check_budget(g, config)?;
    let start = Instant::now();
    let trajectory = run_flow_with(g, &config.flow_params())?;
    timings.flow_seconds += start.elapsed().as_secs_f64();
    let start = Instant::now();
    let detection = select(g, trajectory, config, truth)?;
    timings.sweep_seconds += start.elapsed().as_secs_f64();
    let report = RunReport::new(g, config, &detection, truth, seed)?;
    write(&dir.join("flow.csv"), &output::flow_csv(&detection.trajectory))?;
    write(&dir.join("sweep.csv"), &output::sweep_csv(&detection.sweep, truth)?)?;
    write(&dir.join("partition.labels"), &io::to_labels(detection.partition()))?;
    write(&dir.join("report.json"), &to_json(&report))?;
    Ok(report)
}

fn run(args: RunArgs) -> CliResult {
    let config = args.detect.config();
    let generator = match args.input {
        Some(_) => None,
        None => Some(args.gen.params()?),
    };
    let run_id = match (&args.run_id, &args.input) {
        (Some(id), _) => id.clone(),
        (None, Some(path)) => path
            .file_stem()
            .map_or_else(|| "run".to_string(), |s| s.to_string_lossy().into_owned()),
        (None, None) => format!("{}-{}", Series::from(args.gen.series), args.gen.index),
    };
    let dir = args.out_dir.join(run_id);
    fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
    let manifest = RunManifest {
        input: args.input.as_deref(),
        labels: args.labels.as_deref(),
        generator,
        repeat: if generator.is_some() { args.repeat } else { 1 },
        config,
    };
    write(&dir.join("config.json"), &to_json(&manifest))?;

    let mut timings = Timings::default();
    match (&args.input, generator) {
        (Some(path), _) => {
            let start = Instant::now();
            let input = Input {
                input: path.clone(),
                format: args.format,
                drop_singletons: args.drop_singletons,
            };
            let g = input.load()?;
            let truth = args.labels.as_deref().map(load_labels).transpose()?;
            timings.ingest_seconds = start.elapsed().as_secs_f64();
            let report = run_once(&g, truth.as_ref(), &config, None, &dir, &mut timings)?;
            summarize(&report);
        }
        (None, Some(params)) => {
            if args.repeat == 0 {
                return Err(usage("--repeat must be at least 1"));
            }
            let mut reports = Vec::with_capacity(args.repeat);
            for i in 0..args.repeat as u64 {
                let seed = params.seed.wrapping_add(i);
                let start = Instant::now();
                let (g, truth) = generate(&params.with_seed(seed))?;
                timings.ingest_seconds += start.elapsed().as_secs_f64();
                let sub = dir.join(format!("seed-{seed}"));
                fs::create_dir_all(&sub).map_err(|e| io_error(&sub, e))?;
                let report = run_once(&g, Some(&truth), &config, Some(seed), &sub, &mut timings)?;
                summarize(&report);
                reports.push(report);
            }
            let scores: Vec<f64> = reports.iter().map(|r| r.nmi.expect("generated truth")).collect();
            let aggregate = Aggregate {
                seeds: reports.iter().map(|r| r.seed.expect("generated seed")).collect(),
                mean_nmi: scores.iter().sum::<f64>() / scores.len() as f64,
                scores,
                runs: &reports,
            };
            write(&dir.join("report.json"), &to_json(&aggregate))?;
            println!("mean_nmi={:.6}", aggregate.mean_nmi);
        }
        (None, None) => unreachable!("generator is set when there is no input"),
    }
    write(&dir.join("timings.json"), &to_json(&timings))?;
    eprintln!("results in {}", dir.display());
    Ok(())
}

fn summarize(report: &RunReport) {
    let seed = report.seed.map_or_else(String::new, |s| format!("seed={s} "));
    let nmi = report.nmi.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"));
    println!(
        "{seed}iteration={} cutoff={} communities={} nmi={nmi}",
        report.iteration, report.cutoff, report.communities
    );
}
