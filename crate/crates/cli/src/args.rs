use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netkrig_core::heuristics::AlgorithmKind;
use netkrig_core::Criterion;

#[derive(Debug, Parser)]
#[command(
    name = "netkrig",
    version,
    about = "Choose which links to monitor for kriging-based traffic prediction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology and write its edge list, flow list and routing-matrix CSV.
    Generate(GenerateArgs),
    /// Select K links with one algorithm.
    Solve(SolveArgs),
    /// Best of several seeded runs of a randomized algorithm.
    Ensemble(EnsembleArgs),
    /// PCA lower bounds for k = 0..=K.
    Bound(BoundArgs),
    /// Time algorithms over instances; one CSV row per (instance, algorithm).
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Barabási–Albert preferential attachment.
    Ba,
    /// Heavy-tailed graph with an exact link count.
    Inet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct GeneratorArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    /// Links added per new node (ba).
    #[arg(long, default_value_t = 2)]
    pub attach: usize,
    /// Total link count (inet).
    #[arg(long)]
    pub links: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub flows: usize,
    #[arg(long = "gen-seed", default_value_t = 0)]
    pub gen_seed: u64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["matrix", "edges", "model"])))]
pub struct SourceArgs {
    /// Routing-matrix CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Edge list; needs --flow-list.
    #[arg(long, requires = "flow_list")]
    pub edges: Option<PathBuf>,
    #[arg(long = "flow-list", requires = "edges")]
    pub flow_list: Option<PathBuf>,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Positive link weights, one per link (comma or whitespace separated).
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    #[arg(long, default_value_t = 2)]
    pub attach: usize,
    #[arg(long)]
    pub links: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub flows: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix: writes PREFIX.edges, PREFIX.flows and PREFIX.csv.
    #[arg(long, default_value = "topology")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: AlgorithmKind,
    #[arg(long, value_parser = parse_criterion, default_value = "trace")]
    pub criterion: Criterion,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop power iterations once the Rayleigh quotient settles.
    #[arg(long)]
    pub early_stop: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_parser = parse_algorithm, default_value = "fgr")]
    pub algo: AlgorithmKind,
    #[arg(long, value_parser = parse_criterion, default_value = "spectral")]
    pub criterion: Criterion,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    #[arg(long, default_value_t = 128)]
    pub runs: usize,
    /// Member i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub early_stop: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_parser = parse_criterion, default_value = "trace")]
    pub criterion: Criterion,
    /// Largest k; defaults to min(L, J).
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Matrix CSV path, `gaussian:LxJ`, `ba:NODES:ATTACH:FLOWS` or `inet:NODES:LINKS:FLOWS`. Repeatable.
    #[arg(long = "instance", required = true)]
    pub instances: Vec<String>,
    /// Comma-separated algorithm names; an empty list yields a header-only table.
    #[arg(long, value_delimiter = ',', default_value = "pcaph,fgr,fge,fgp")]
    pub algos: Vec<String>,
    /// Criterion for every row; by default FGE, greedy and exact use trace, the others spectral.
    #[arg(long, value_parser = parse_criterion)]
    pub criterion: Option<Criterion>,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Timed repetitions per row; the median is reported.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_algorithm(s: &str) -> Result<AlgorithmKind, String> {
    s.parse().map_err(|e: netkrig_core::Error| e.to_string())
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: netkrig_core::Error| e.to_string())
}
