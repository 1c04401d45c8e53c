use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use etanet::config::{
    initial_graph_from_file, parse_pair_policy, parse_sweep_mode, read_experiment_spec,
    read_model_params,
};
use etanet::experiments::{
    edge_list_with_header, resolve_preset, run_experiment, builtin_presets, ExperimentResult,
    ExperimentSpec,
};
use etanet::io::{read_edge_list_file, write_edge_list, write_edge_list_file};
use etanet::metrics::{compute_metrics, histogram_csv};
use etanet::theory::{self, DegreeForm};
use etanet::{generate, DistanceMode, Error, MetricsConfig, MetricsReport, ModelParams};

use crate::{Cli, Command, DistanceArgs, ExperimentArgs, GenerateArgs, MetricsArgs, TheoryArgs, THREADS_ENV};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_RUNTIME: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    /// Failure while loading user-supplied files.
    fn input(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::UnknownPreset { .. } => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }

    fn write(path: &Path, e: io::Error) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::UnknownPreset { .. } => EXIT_USAGE,
            Error::Parse { .. } => EXIT_INPUT,
            _ => EXIT_RUNTIME,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    let start = Instant::now();
    match cli.command {
        Command::Generate(args) => generate_cmd(args)?,
        Command::Metrics(args) => metrics_cmd(args)?,
        Command::Theory(args) => theory_cmd(args)?,
        Command::Experiment(args) => experiment_cmd(args, cli.verbose)?,
        Command::Presets => presets_cmd()?,
    }
    if cli.verbose {
        eprintln!("done in {:.2?}", start.elapsed());
    }
    Ok(())
}

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer (got '{value}')")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError { code: EXIT_RUNTIME, message: e.to_string() })
}

fn print_stdout(text: &str) -> CliResult {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::write(Path::new("<stdout>"), e))
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::write(path, e))
}

fn model_params(args: &GenerateArgs) -> CliResult<ModelParams> {
    let mut params = match &args.config {
        Some(path) => read_model_params(path).map_err(CliError::input)?,
        None => {
            let (Some(m), Some(steps)) = (args.m, args.steps) else {
                return Err(CliError::usage("generate needs --m and --T (or --config)"));
            };
            ModelParams::new(0.0, m, steps, 0)
        }
    };
    if let Some(eta) = args.eta {
        params.eta = eta;
    }
    if let Some(m) = args.m {
        params.m = m;
    }
    if let Some(steps) = args.steps {
        params.steps = steps;
    }
    if let Some(seed) = args.seed {
        params.seed = seed;
    }
    if let Some(path) = &args.initial {
        params.initial_graph = initial_graph_from_file(path).map_err(CliError::input)?;
    }
    if let Some(s) = &args.sweep {
        params.sweep = parse_sweep_mode(s)
            .ok_or_else(|| CliError::usage(format!("--sweep must be 'thinned' or 'scan', got '{s}'")))?;
    }
    if let Some(s) = &args.pair_policy {
        params.pair_policy = parse_pair_policy(s)
            .ok_or_else(|| CliError::usage(format!("--pair-policy must be 'resample' or 'drop', got '{s}'")))?;
    }
    params.validate()?;
    Ok(params)
}

fn generate_cmd(args: GenerateArgs) -> CliResult {
    let params = model_params(&args)?;
    let g0 = params.initial_graph.build()?;
    let (graph, stats) = generate(&params)?;
    let list = edge_list_with_header(graph, &params, &stats, g0.num_vertices(), g0.num_edges());
    match &args.out {
        Some(path) => write_edge_list_file(path, &list)?,
        None => {
            let mut out = io::stdout().lock();
            write_edge_list(&mut out, &list)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::write(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn distance_mode(args: DistanceArgs, seed: u64) -> Option<DistanceMode> {
    if args.skip_paths {
        Some(DistanceMode::Skip)
    } else if let Some(sources) = args.sample_sources {
        Some(DistanceMode::Sampled { sources, seed })
    } else if args.exact_paths {
        Some(DistanceMode::Exact)
    } else {
        None
    }
}

fn metrics_cmd(args: MetricsArgs) -> CliResult {
    let list = read_edge_list_file(&args.input).map_err(CliError::input)?;
    let m = match list.meta("m") {
        Some(v) => Some(v.parse().map_err(|_| {
            CliError::input(Error::Parse {
                line: 0,
                message: format!("header m={v} is not an integer"),
            })
        })?),
        None => None,
    };
    let config = MetricsConfig {
        distance: distance_mode(args.distance, args.seed).unwrap_or_default(),
        k_min: args.kmin,
        m,
        ..MetricsConfig::default()
    };
    let report = compute_metrics(&list.graph, &config)?;
    if let Some(path) = &args.out {
        write_file(path, &format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.to_csv_row()))?;
    }
    if let Some(path) = &args.hist {
        write_file(path, &histogram_csv(&report.degree_histogram))?;
    }
    print_stdout(&report.to_text())
}

fn theory_cmd(args: TheoryArgs) -> CliResult {
    let pred = theory::predict_with_cutoff(args.eta, args.m, args.cutoff)?;
    let mut fields = pred.fields();
    fields.push(("avg_degree", pred.avg_degree().to_string()));
    if let Some(steps) = args.steps {
        fields.push(("T", steps.to_string()));
        fields.push(("expected_edges", theory::expected_edges(steps, args.eta, args.m, 1).to_string()));
        if let Some(tv) = args.tv {
            let full = theory::expected_degree(tv, steps, args.eta, args.m, DegreeForm::Full)?;
            let asym = theory::expected_degree(tv, steps, args.eta, args.m, DegreeForm::Asymptotic)?;
            let cc = theory::expected_cc_v_lower_bound(tv, steps, args.eta, args.m)?;
            fields.push(("tv", tv.to_string()));
            fields.push(("expected_degree", full.to_string()));
            fields.push(("expected_degree_asymptotic", asym.to_string()));
            fields.push(("cc_v_lower_bound", cc.to_string()));
        }
    }
    let mut out = String::new();
    if args.csv {
        let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        let _ = writeln!(out, "{}", keys.join(","));
        let _ = writeln!(out, "{}", values.join(","));
    } else {
        let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &fields {
            let _ = writeln!(out, "{k:<width$} = {v}");
        }
    }
    print_stdout(&out)
}

fn experiment_spec(args: &ExperimentArgs) -> CliResult<ExperimentSpec> {
    let mut spec = match (&args.preset, &args.spec) {
        (Some(name), None) => {
            let presets = resolve_preset(name)?;
            ExperimentSpec::from_presets(name, &presets)
        }
        (None, Some(path)) => read_experiment_spec(path).map_err(CliError::input)?,
        _ => return Err(CliError::usage("give exactly one of --preset or --spec")),
    };
    if let Some(name) = &args.name {
        spec.name = name.clone();
    }
    if let Some(r) = args.replicates {
        if r == 0 {
            return Err(CliError::usage("--replicates must be ≥ 1"));
        }
        spec.runs.iter_mut().for_each(|run| run.replicates = r);
    }
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    if let Some(mode) = distance_mode(args.distance, spec.base_seed) {
        spec.metrics.distance = mode;
    }
    spec.output_path = Some(args.out.clone());
    spec.write_edge_lists = !args.no_edge_lists;
    spec.validate()?;
    Ok(spec)
}

fn experiment_cmd(args: ExperimentArgs, verbose: bool) -> CliResult {
    let spec = experiment_spec(&args)?;
    if verbose {
        let total: usize = spec.runs.iter().map(|r| r.replicates).sum();
        eprintln!("running {} ({} runs, {} graphs)", spec.name, spec.runs.len(), total);
    }
    let result = run_experiment(&spec)?;
    print_stdout(&summary_table(&result))?;
    if verbose {
        eprintln!("wrote {}", args.out.join(&spec.name).display());
    }
    Ok(())
}

fn cell(mean: f64, count: usize) -> String {
    if count == 0 {
        "NA".to_string()
    } else {
        format!("{mean:.4}")
    }
}

fn summary_table(result: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<22} {:>4} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}",
        "label", "reps", "edges", "avg_deg", "cc", "dist", "gamma", "pred_g", "B", "cc>=B"
    );
    for a in &result.aggregates {
        let _ = writeln!(
            out,
            "{:<22} {:>4} {:>10.1} {:>8.4} {:>8.4} {:>8} {:>8} {:>8.4} {:>8.4} {:>6}",
            a.label,
            a.replicates,
            a.edges.mean,
            a.avg_degree.mean,
            a.avg_clustering.mean,
            cell(a.mean_distance.mean, a.mean_distance.count),
            cell(a.gamma_mle.mean, a.gamma_mle.count),
            a.predictions.gamma,
            a.predictions.b,
            format!("{}/{}", a.runs_above_bound, a.replicates),
        );
    }
    out
}

fn presets_cmd() -> CliResult {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<22} {:<7} {:>7} {:>3} {:>5} {:>7} {:>5}",
        "name", "group", "n", "m", "eta", "T", "reps"
    );
    for p in builtin_presets() {
        let _ = writeln!(
            out,
            "{:<22} {:<7} {:>7} {:>3} {:>5} {:>7} {:>5}",
            p.name,
            p.group.name(),
            p.n,
            p.m,
            p.eta,
            p.steps(),
            p.default_replicates()
        );
    }
    print_stdout(&out)
}
