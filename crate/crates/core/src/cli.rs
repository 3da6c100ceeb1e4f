//! The `hopim` command line: `select`, `evaluate`, `bounds`,
//! `alpha-surface` and `bench`.
//!
//! Exit codes: 0 on success, 1 for configuration errors (bad flags or flag
//! combinations), 2 for data errors (unreadable or invalid graphs and seed
//! files).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{self, DEFAULT_TRUNCATION};
use crate::bounds::upper_bounds;
use crate::error::Error;
use crate::generate::power_law_digraph;
use crate::graph::{load_edge_list_sized, Graph, NodeId, WeightKind, WeightModel};
use crate::hop::{Diffusion, Hops};
use crate::oracle::estimate_spread;
use crate::selection::{self, Bootstrap, DegreeKind, HopConfig, SeedResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Default Monte-Carlo budget for `evaluate`.
pub const DEFAULT_SIMULATIONS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "hopim", version, about = "Hop-based influence maximization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select k seeds with a hop-based greedy or a degree heuristic.
    Select(SelectArgs),
    /// Monte-Carlo spread of a seed set.
    Evaluate(EvaluateArgs),
    /// Single-seed spread upper bounds for every node.
    Bounds(BoundsArgs),
    /// Approximation lower bound alpha over a (p, seed ratio) grid, as CSV.
    AlphaSurface(AlphaArgs),
    /// Time selection algorithms across k values and probability scale factors.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Onehop,
    Twohop,
    #[value(name = "twohop-o")]
    TwohopO,
    Highdegree,
    Degreediscount,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Onehop => "onehop",
            Algo::Twohop => "twohop",
            Algo::TwohopO => "twohop-o",
            Algo::Highdegree => "highdegree",
            Algo::Degreediscount => "degreediscount",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiffusionArg {
    Ic,
    Lt,
}

impl From<DiffusionArg> for Diffusion {
    fn from(d: DiffusionArg) -> Self {
        match d {
            DiffusionArg::Ic => Diffusion::Ic,
            DiffusionArg::Lt => Diffusion::Lt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DegreeArg {
    Out,
    In,
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list: `u v` or `u v p` per line, `#` comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Probability model: wc | tri[:<seed>] | uniform:<p> | file.
    #[arg(long, default_value = "wc")]
    pub model: String,
    /// Multiply every probability by this factor (clamped to 1).
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Force |V| to at least this many nodes (ids 0..n).
    #[arg(long)]
    pub num_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "twohop")]
    pub algo: Algo,
    #[arg(long)]
    pub k: usize,
    /// Hop limit of the estimator; implied by --algo.
    #[arg(long)]
    pub hops: Option<u32>,
    #[arg(long, value_enum, default_value = "ic")]
    pub diffusion: DiffusionArg,
    /// Propagation probability assumed by DegreeDiscount.
    #[arg(long, default_value_t = 0.01)]
    pub dd_p: f64,
    /// Degree used by HighDegree.
    #[arg(long, value_enum, default_value = "out")]
    pub degree: DegreeArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// JSON list of node ids, a `select` JSON output, or one id per line.
    #[arg(long)]
    pub seeds: PathBuf,
    #[arg(long, value_enum, default_value = "ic")]
    pub diffusion: DiffusionArg,
    #[arg(long, default_value_t = DEFAULT_SIMULATIONS)]
    pub n_sims: usize,
    /// Stop propagation after this many hops (default: unlimited).
    #[arg(long)]
    pub hop_limit: Option<u32>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 2)]
    pub hops: u32,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[arg(long, default_value_t = 3.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_max: f64,
    #[arg(long, default_value_t = 10)]
    pub p_steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 10)]
    pub ratio_steps: usize,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Edge list to benchmark on.
    #[arg(long, conflicts_with = "synthetic")]
    pub graph: Option<PathBuf>,
    /// Generate a power-law digraph instead: `n,m,gamma`.
    #[arg(long)]
    pub synthetic: Option<String>,
    #[arg(long, default_value = "wc")]
    pub model: String,
    #[arg(long)]
    pub num_nodes: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "onehop")]
    pub algos: Vec<Algo>,
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub scales: Vec<f64>,
    #[arg(long, value_enum, default_value = "ic")]
    pub diffusion: DiffusionArg,
    /// Monte-Carlo runs per row for the spread column; 0 skips it.
    #[arg(long, default_value_t = 1000)]
    pub n_sims: usize,
    #[arg(long)]
    pub hop_limit: Option<u32>,
    #[arg(long, default_value_t = 0.01)]
    pub dd_p: f64,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a CLI run, tagged with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::KOutOfRange { .. } | Error::InvalidParameter(_) | Error::WeightModel(_) => EXIT_CONFIG,
            _ => EXIT_DATA,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (text, out) = match execute(&cli) {
        Ok(res) => res,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: writing {}: {e}", path.display());
                return EXIT_DATA;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_DATA;
            }
        }
    }
    EXIT_OK
}

/// Runs a parsed command and returns its output text and destination.
pub fn execute(cli: &Cli) -> CliResult<(String, Option<PathBuf>)> {
    match &cli.command {
        Command::Select(a) => Ok((cmd_select(a)?, a.output.out.clone())),
        Command::Evaluate(a) => Ok((cmd_evaluate(a)?, a.output.out.clone())),
        Command::Bounds(a) => Ok((cmd_bounds(a)?, a.output.out.clone())),
        Command::AlphaSurface(a) => Ok((cmd_alpha_surface(a)?, a.out.clone())),
        Command::Bench(a) => Ok((cmd_bench(a)?, a.out.clone())),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn weight_model(spec: &str, scale: f64, rng_seed: u64) -> CliResult<WeightModel> {
    let kind = if spec == "tri" { WeightKind::Trivalency { seed: rng_seed } } else { spec.parse()? };
    Ok(WeightModel::new(kind).with_scale(scale))
}

fn read_graph(path: &Path, num_nodes: Option<usize>) -> CliResult<Graph> {
    let file = File::open(path).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("opening {}: {e}", path.display()),
    })?;
    load_edge_list_sized(BufReader::new(file), num_nodes).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_weighted(args: &GraphArgs, rng_seed: u64) -> CliResult<Graph> {
    let model = weight_model(&args.model, args.scale, rng_seed)?;
    Ok(read_graph(&args.graph, args.num_nodes)?.apply_weight_model(&model)?)
}

fn hops_for(algo: Algo, hops: Option<u32>) -> CliResult<Option<Hops>> {
    let implied = match algo {
        Algo::Onehop => Some(Hops::One),
        Algo::Twohop | Algo::TwohopO => Some(Hops::Two),
        Algo::Highdegree | Algo::Degreediscount => None,
    };
    match (implied, hops) {
        (Some(h), Some(given)) if h.get() != given => Err(CliError::config(format!(
            "--algo {} runs with {} hop(s), not --hops {given}",
            algo.name(),
            h.get()
        ))),
        _ => Ok(implied),
    }
}

struct Selector {
    diffusion: Diffusion,
    dd_p: f64,
    degree: DegreeKind,
    workers: usize,
}

impl Selector {
    fn run(&self, g: &Graph, algo: Algo, k: usize) -> CliResult<SeedResult> {
        let celf = |hops, bootstrap| {
            selection::greedy_celf(g, HopConfig::new(self.diffusion, hops), k, bootstrap, self.workers)
        };
        Ok(match algo {
            Algo::Onehop => celf(Hops::One, Bootstrap::UpperBounds)?,
            Algo::Twohop => celf(Hops::Two, Bootstrap::UpperBounds)?,
            Algo::TwohopO => celf(Hops::Two, Bootstrap::None)?,
            Algo::Highdegree => selection::high_degree(g, k, self.degree)?,
            Algo::Degreediscount => selection::degree_discount(g, k, self.dd_p)?,
        })
    }
}

fn degree_kind(d: DegreeArg) -> DegreeKind {
    match d {
        DegreeArg::Out => DegreeKind::Out,
        DegreeArg::In => DegreeKind::In,
        DegreeArg::Total => DegreeKind::Total,
    }
}

fn check_workers(workers: usize) -> CliResult<()> {
    if workers == 0 {
        return Err(CliError::config("--workers must be at least 1"));
    }
    Ok(())
}

pub fn cmd_select(a: &SelectArgs) -> CliResult<String> {
    if a.k == 0 {
        return Err(CliError::config("--k must be at least 1"));
    }
    check_workers(a.workers)?;
    let hops = hops_for(a.algo, a.hops)?;
    let rng_seed = resolve_seed(a.rng_seed);
    let g = load_weighted(&a.graph, rng_seed)?;
    let selector = Selector {
        diffusion: a.diffusion.into(),
        dd_p: a.dd_p,
        degree: degree_kind(a.degree),
        workers: a.workers,
    };
    let result = selector.run(&g, a.algo, a.k)?;
    let seeds: Vec<u64> = result.seeds.iter().map(|&s| g.label(s)).collect();

    if a.output.format == Some(Format::Csv) {
        let mut out = String::from("rank,seed,marginal_gain\n");
        for (i, s) in seeds.iter().enumerate() {
            let gain = result.marginal_gains.get(i).map(|x| x.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{}", i + 1, s, gain).unwrap();
        }
        return Ok(out);
    }
    let doc = json!({
        "algorithm": result.algorithm,
        "seeds": seeds,
        "marginal_gains": result.marginal_gains,
        "elapsed_seconds": result.elapsed,
        "evaluations": result.evaluations,
        "rng_seed": rng_seed,
        "config": {
            "graph": a.graph.graph.display().to_string(),
            "model": a.graph.model,
            "scale": a.graph.scale,
            "num_nodes": a.graph.num_nodes,
            "algo": a.algo.name(),
            "k": a.k,
            "hops": hops.map(Hops::get),
            "diffusion": Diffusion::from(a.diffusion),
            "workers": a.workers,
        },
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

/// Seed labels from a JSON list, a JSON object with a `seeds` list, or
/// whitespace/line separated integers.
pub fn parse_seed_labels(text: &str) -> crate::Result<Vec<u64>> {
    let from_values = |items: &[Value]| -> crate::Result<Vec<u64>> {
        items
            .iter()
            .map(|v| {
                v.as_u64().ok_or_else(|| Error::Parse { line: 1, reason: format!("seed `{v}` is not a node id") })
            })
            .collect()
    };
    if let Ok(value) = serde_json::from_str::<Value>(text) {
        return match &value {
            Value::Array(items) => from_values(items),
            Value::Object(map) => match map.get("seeds") {
                Some(Value::Array(items)) => from_values(items),
                _ => Err(Error::Parse { line: 1, reason: "JSON object without a `seeds` list".into() }),
            },
            Value::Number(n) => n
                .as_u64()
                .map(|x| vec![x])
                .ok_or_else(|| Error::Parse { line: 1, reason: format!("`{n}` is not a node id") }),
            _ => Err(Error::Parse { line: 1, reason: "unsupported JSON seed file".into() }),
        };
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            out.push(tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                reason: format!("invalid node id `{tok}`"),
            })?);
        }
    }
    Ok(out)
}

fn read_seeds(path: &Path, g: &Graph) -> CliResult<Vec<NodeId>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("reading {}: {e}", path.display()),
    })?;
    let labels = parse_seed_labels(&text).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })?;
    let mut seeds = Vec::with_capacity(labels.len());
    for l in labels {
        let id = g.node_by_label(l).ok_or(Error::UnknownNode(l))?;
        if !seeds.contains(&id) {
            seeds.push(id);
        }
    }
    Ok(seeds)
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> CliResult<String> {
    if a.n_sims == 0 {
        return Err(CliError::config("--n-sims must be at least 1"));
    }
    check_workers(a.workers)?;
    let rng_seed = resolve_seed(a.rng_seed);
    let g = load_weighted(&a.graph, rng_seed)?;
    let diffusion: Diffusion = a.diffusion.into();
    if diffusion == Diffusion::Lt {
        let bad = g.validate_lt();
        if !bad.is_empty() {
            return Err(Error::LtViolation(bad).into());
        }
    }
    let seeds = read_seeds(&a.seeds, &g)?;
    let est = estimate_spread(&g, &seeds, diffusion, a.hop_limit, a.n_sims, rng_seed, a.workers)?;
    if a.output.format == Some(Format::Csv) {
        let hop = est.hop_limit.map(|h| h.to_string()).unwrap_or_else(|| "inf".into());
        return Ok(format!(
            "mean,std_error,simulations,hop_limit\n{},{},{},{}\n",
            est.mean, est.std_error, est.simulations, hop
        ));
    }
    let labels: Vec<u64> = seeds.iter().map(|&s| g.label(s)).collect();
    let doc = json!({
        "mean": est.mean,
        "std_error": est.std_error,
        "simulations": est.simulations,
        "hop_limit": est.hop_limit,
        "diffusion": diffusion,
        "seeds": labels,
        "rng_seed": rng_seed,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

pub fn cmd_bounds(a: &BoundsArgs) -> CliResult<String> {
    let rng_seed = resolve_seed(a.rng_seed);
    let g = load_weighted(&a.graph, rng_seed)?;
    let b = upper_bounds(&g, a.hops);
    if a.output.format == Some(Format::Json) {
        let rows: Vec<Value> = g.nodes().map(|v| json!({"node": g.label(v), "bound": b.get(v)})).collect();
        let doc = json!({"hops": a.hops, "bounds": rows});
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }
    let mut out = String::from("node,bound\n");
    for v in g.nodes() {
        writeln!(out, "{},{}", g.label(v), b.get(v)).unwrap();
    }
    Ok(out)
}

pub fn cmd_alpha_surface(a: &AlphaArgs) -> CliResult<String> {
    let ps = analysis::linspace(0.0, a.p_max, a.p_steps);
    let rs = analysis::linspace(0.0, a.ratio_max, a.ratio_steps);
    let points = analysis::alpha_surface(a.gamma, &ps, &rs, a.truncation)?;
    let mut buf = Vec::new();
    analysis::write_surface_csv(&points, &mut buf).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("ascii output"))
}

fn parse_synthetic(spec: &str) -> CliResult<(usize, usize, f64)> {
    let bad = || CliError::config(format!("--synthetic expects n,m,gamma, got `{spec}`"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

pub fn cmd_bench(a: &BenchArgs) -> CliResult<String> {
    if a.algos.is_empty() || a.k.is_empty() || a.scales.is_empty() {
        return Err(CliError::config("bench needs at least one algorithm, k and scale factor"));
    }
    if a.k.contains(&0) {
        return Err(CliError::config("--k values must be at least 1"));
    }
    check_workers(a.workers)?;
    let rng_seed = resolve_seed(a.rng_seed);
    let base = match (&a.graph, &a.synthetic) {
        (Some(path), None) => read_graph(path, a.num_nodes)?,
        (None, Some(spec)) => {
            let (n, m, gamma) = parse_synthetic(spec)?;
            power_law_digraph(n, m, gamma, rng_seed)?
        }
        _ => return Err(CliError::config("bench needs exactly one of --graph or --synthetic")),
    };
    let diffusion: Diffusion = a.diffusion.into();
    let selector = Selector { diffusion, dd_p: a.dd_p, degree: DegreeKind::Out, workers: a.workers };

    let mut out = String::from("algorithm,k,scale_factor,seconds,evaluations,spread_estimate\n");
    for &scale in &a.scales {
        let model = weight_model(&a.model, scale, rng_seed)?;
        let g = base.clone().apply_weight_model(&model)?;
        for &algo in &a.algos {
            for &k in &a.k {
                let r = selector.run(&g, algo, k)?;
                let spread = if a.n_sims > 0 {
                    let e = estimate_spread(&g, &r.seeds, diffusion, a.hop_limit, a.n_sims, rng_seed, a.workers)?;
                    e.mean.to_string()
                } else {
                    String::new()
                };
                writeln!(out, "{},{},{},{:.6},{},{}", algo.name(), k, scale, r.elapsed, r.evaluations, spread)
                    .unwrap();
            }
        }
    }
    Ok(out)
}
