mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const THREADS_ENV: &str = "ETANET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "etanet", version, about = "Grow and measure η-model networks")]
pub struct Cli {
    /// Print timings and progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow a network and write its edge list.
    Generate(GenerateArgs),
    /// Measure an edge-list file.
    Metrics(MetricsArgs),
    /// Print closed-form predictions.
    Theory(TheoryArgs),
    /// Run replicated experiments from a preset or a spec file.
    Experiment(ExperimentArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of growth steps.
    #[arg(long = "T")]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value model config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge-list file used as the initial graph.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// Transitivity sweep: thinned or scan.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Pair rule for selected vertices: resample or drop.
    #[arg(long)]
    pub pair_policy: Option<String>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct DistanceArgs {
    /// BFS from every vertex of the largest component (default).
    #[arg(long, conflicts_with_all = ["sample_sources", "skip_paths"])]
    pub exact_paths: bool,
    /// BFS from N uniformly chosen sources.
    #[arg(long, value_name = "N", conflicts_with = "skip_paths")]
    pub sample_sources: Option<usize>,
    /// Do not measure distances.
    #[arg(long)]
    pub skip_paths: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Seed for source sampling.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Lower degree cutoff for the power-law fit.
    #[arg(long)]
    pub kmin: Option<usize>,
    /// Write the metrics CSV (header and one row) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the degree histogram CSV here.
    #[arg(long)]
    pub hist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub m: usize,
    /// Network age for the edge-count and degree laws.
    #[arg(long = "T")]
    pub steps: Option<u64>,
    /// Birth time of a tracked vertex (needs --T).
    #[arg(long, requires = "steps")]
    pub tv: Option<u64>,
    /// Birth-time cutoff for the asymptotic degree law.
    #[arg(long, default_value_t = etanet::theory::DEFAULT_CUTOFF)]
    pub cutoff: u64,
    /// Print a CSV header and row instead of key=value text.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["preset", "spec"]))]
pub struct ExperimentArgs {
    /// Preset or preset group name (see `etanet presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Experiment spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Replicates per run, overriding the defaults.
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Output directory; results go to <out>/<name>/.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Base seed; replicate i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Experiment name (defaults to the preset name).
    #[arg(long)]
    pub name: Option<String>,
    #[command(flatten)]
    pub distance: DistanceArgs,
    /// Skip writing per-run edge lists.
    #[arg(long)]
    pub no_edge_lists: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
