//! Replicated runs of the generator, the built-in parameter presets, and the
//! comparison of measured statistics with the closed-form predictions.
//!
//! Output layout under `<output_path>/<name>/`:
//!
//! * `run_<i>.edges`: edge list of the `i`-th run (global index, in run order)
//! * `metrics.csv`: one `run` row per replicate, then one `aggregate` row per
//!   run label holding replicate means and sample standard deviations
//! * `theory.txt`: predictions for every run label

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::config::{pair_policy_name, sweep_mode_name};
use crate::error::{Error, Result};
use crate::generator::{generate, GenerationStats, ModelParams};
use crate::io::{self, EdgeList};
use crate::metrics::{compute_metrics, DistanceMode, MetricsConfig, MetricsReport};
use crate::theory::{self, TheoryPredictions};

pub const DEFAULT_BASE_SEED: u64 = 1;
pub const DEFAULT_REPLICATES: usize = 10;
/// Replicates for presets with at most [`SMALL_PRESET_MAX_N`] vertices.
pub const SMALL_PRESET_REPLICATES: usize = 30;
pub const SMALL_PRESET_MAX_N: usize = 1_022;
/// Size of the default initial graph.
pub const INITIAL_VERTICES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetGroup {
    /// Simulations of real-world networks.
    RealWorld,
    /// `m = 2`, `n = 10^4`, varying `η`.
    EtaSweep,
    /// `η = 1`, `n = 10^4`, varying `m`.
    MSweep,
}

impl PresetGroup {
    pub fn name(self) -> &'static str {
        match self {
            PresetGroup::RealWorld => "table1",
            PresetGroup::EtaSweep => "table2",
            PresetGroup::MSweep => "table3",
        }
    }
}

/// Reference measurements for a preset, where known.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Reference {
    pub edges: Option<usize>,
    pub clustering: Option<f64>,
    pub clustering_ba: Option<f64>,
    pub mean_distance: Option<f64>,
    pub avg_degree: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub group: PresetGroup,
    /// Final vertex count.
    pub n: usize,
    pub m: usize,
    pub eta: f64,
    pub reference: Reference,
}

impl Preset {
    /// `T = n - |G0|` with the two-vertex initial graph.
    pub fn steps(&self) -> usize {
        self.n - INITIAL_VERTICES
    }

    pub fn default_replicates(&self) -> usize {
        if self.n <= SMALL_PRESET_MAX_N {
            SMALL_PRESET_REPLICATES
        } else {
            DEFAULT_REPLICATES
        }
    }

    pub fn params(&self, seed: u64) -> ModelParams {
        ModelParams::new(self.eta, self.m, self.steps(), seed)
    }

    pub fn run_spec(&self) -> RunSpec {
        RunSpec {
            label: self.name.clone(),
            params: self.params(DEFAULT_BASE_SEED),
            replicates: self.default_replicates(),
        }
    }
}

fn real_world(name: &str, n: usize, m: usize, eta: f64, edges: usize, cc: f64, cc_ba: f64) -> Preset {
    Preset {
        name: name.to_string(),
        group: PresetGroup::RealWorld,
        n,
        m,
        eta,
        reference: Reference {
            edges: Some(edges),
            clustering: Some(cc),
            clustering_ba: Some(cc_ba),
            ..Reference::default()
        },
    }
}

fn sweep_point(name: String, group: PresetGroup, m: usize, eta: f64, dist: f64, cc: f64, deg: f64) -> Preset {
    Preset {
        name,
        group,
        n: 10_000,
        m,
        eta,
        reference: Reference {
            clustering: Some(cc),
            mean_distance: Some(dist),
            avg_degree: Some(deg),
            ..Reference::default()
        },
    }
}

pub fn builtin_presets() -> Vec<Preset> {
    let mut out = vec![
        real_world("electronic-circuits", 24_097, 2, 0.23, 53_121, 0.034, 0.009),
        real_world("email", 16_881, 3, 0.5, 58_041, 0.11, 0.0047),
        real_world("marine-food-web", 135, 4, 0.54, 599, 0.24, 0.148),
        real_world("neural", 307, 5, 2.8, 2_341, 0.29, 0.098),
        real_world("roget", 1_022, 4, 1.4, 5_389, 0.14, 0.038),
    ];
    let eta_rows = [
        (0.0, 5.28, 0.0045, 4.0),
        (0.4, 4.91, 0.108, 4.701),
        (0.8, 4.72, 0.171, 5.432),
        (1.2, 4.21, 0.204, 6.149),
        (1.6, 3.67, 0.244, 6.900),
        (2.0, 3.25, 0.27, 7.679),
    ];
    for (eta, dist, cc, deg) in eta_rows {
        out.push(sweep_point(format!("table2-eta{eta}"), PresetGroup::EtaSweep, 2, eta, dist, cc, deg));
    }
    let m_rows = [
        (2, 4.34, 0.19, 5.826),
        (3, 3.88, 0.09, 7.804),
        (4, 3.32, 0.0638, 9.91),
        (5, 3.47, 0.05, 11.928),
    ];
    for (m, dist, cc, deg) in m_rows {
        out.push(sweep_point(format!("table3-m{m}"), PresetGroup::MSweep, m, 1.0, dist, cc, deg));
    }
    out
}

/// A single preset by name, or every preset of a group (`table1`, `table2`,
/// `table3`).
pub fn resolve_preset(name: &str) -> Result<Vec<Preset>> {
    let all = builtin_presets();
    let group: Vec<Preset> = all.iter().filter(|p| p.group.name() == name).cloned().collect();
    if !group.is_empty() {
        return Ok(group);
    }
    match all.iter().find(|p| p.name == name) {
        Some(p) => Ok(vec![p.clone()]),
        None => Err(Error::UnknownPreset {
            name: name.to_string(),
            valid: preset_names().join(", "),
        }),
    }
}

pub fn preset_names() -> Vec<String> {
    let mut names: Vec<String> = ["table1", "table2", "table3"].map(String::from).to_vec();
    names.extend(builtin_presets().into_iter().map(|p| p.name));
    names
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub label: String,
    /// The seed is replaced by `base_seed + replicate`.
    pub params: ModelParams,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub runs: Vec<RunSpec>,
    pub metrics: MetricsConfig,
    pub base_seed: u64,
    /// Directory receiving `<name>/...`; `None` keeps everything in memory.
    pub output_path: Option<PathBuf>,
    pub write_edge_lists: bool,
}

impl ExperimentSpec {
    pub fn from_presets(name: &str, presets: &[Preset]) -> Self {
        Self {
            name: name.to_string(),
            runs: presets.iter().map(Preset::run_spec).collect(),
            metrics: MetricsConfig::default(),
            base_seed: DEFAULT_BASE_SEED,
            output_path: None,
            write_edge_lists: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config(format!("invalid experiment name '{}'", self.name)));
        }
        if self.runs.is_empty() {
            return Err(Error::config("experiment has no runs"));
        }
        for run in &self.runs {
            if run.replicates < 1 {
                return Err(Error::config(format!("{}: replicates must be ≥ 1", run.label)));
            }
            run.params.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryComparison {
    pub measured_cc: f64,
    pub bound_b: f64,
    pub cc_above_bound: bool,
    pub fitted_gamma: Option<f64>,
    pub predicted_gamma: f64,
    pub gamma_abs_diff: Option<f64>,
    pub avg_degree: f64,
    pub predicted_avg_degree: f64,
    pub degree_ratio: f64,
}

pub fn compare_with_theory(report: &MetricsReport, pred: &TheoryPredictions) -> TheoryComparison {
    let fitted_gamma = report.power_law.map(|f| f.gamma_mle);
    TheoryComparison {
        measured_cc: report.avg_clustering,
        bound_b: pred.b,
        cc_above_bound: report.avg_clustering >= pred.b,
        fitted_gamma,
        predicted_gamma: pred.gamma,
        gamma_abs_diff: fitted_gamma.map(|g| (g - pred.gamma).abs()),
        avg_degree: report.avg_degree,
        predicted_avg_degree: pred.avg_degree(),
        degree_ratio: report.avg_degree / pred.avg_degree(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub label: String,
    pub replicate: usize,
    /// Global run index, used for `run_<index>.edges`.
    pub index: usize,
    pub params: ModelParams,
    pub stats: GenerationStats,
    pub report: MetricsReport,
    pub comparison: TheoryComparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub sd: f64,
    pub count: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, sd, count }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub label: String,
    pub eta: f64,
    pub m: usize,
    pub n: usize,
    pub replicates: usize,
    pub edges: Summary,
    pub avg_degree: Summary,
    pub avg_clustering: Summary,
    pub global_transitivity: Summary,
    /// Over replicates where distance was measured.
    pub mean_distance: Summary,
    /// Over replicates where the fit succeeded.
    pub gamma_mle: Summary,
    pub gamma_regression: Summary,
    pub predictions: TheoryPredictions,
    /// Edge-count law evaluated at the final step.
    pub expected_edges: f64,
    pub runs_above_bound: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub name: String,
    pub base_seed: u64,
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentResult {
    pub fn aggregate(&self, label: &str) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.label == label)
    }
}

struct Job<'a> {
    run: &'a RunSpec,
    replicate: usize,
    index: usize,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let dir = match &spec.output_path {
        Some(root) => {
            let dir = root.join(&spec.name);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            Some(dir)
        }
        None => None,
    };

    let mut jobs = Vec::new();
    for run in &spec.runs {
        for replicate in 0..run.replicates {
            let index = jobs.len();
            jobs.push(Job { run, replicate, index });
        }
    }
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|job| execute(spec, job, dir.as_ref()))
        .collect::<Result<_>>()?;

    let aggregates = spec
        .runs
        .iter()
        .map(|run| {
            let mine: Vec<&RunRecord> = records.iter().filter(|r| r.label == run.label).collect();
            aggregate(run, &mine)
        })
        .collect::<Result<Vec<_>>>()?;

    let result = ExperimentResult {
        name: spec.name.clone(),
        base_seed: spec.base_seed,
        runs: records,
        aggregates,
    };
    if let Some(dir) = dir {
        let csv = dir.join("metrics.csv");
        fs::write(&csv, metrics_csv(&result)).map_err(|e| Error::io(&csv, e))?;
        let txt = dir.join("theory.txt");
        fs::write(&txt, theory_text(&result)).map_err(|e| Error::io(&txt, e))?;
    }
    Ok(result)
}

fn execute(spec: &ExperimentSpec, job: &Job<'_>, dir: Option<&PathBuf>) -> Result<RunRecord> {
    let seed = spec.base_seed + job.replicate as u64;
    let params = ModelParams {
        seed,
        ..job.run.params.clone()
    };
    let (graph, stats) = generate(&params)?;
    let mut metrics = MetricsConfig {
        m: Some(params.m),
        ..spec.metrics
    };
    if let DistanceMode::Sampled { sources, .. } = metrics.distance {
        metrics.distance = DistanceMode::Sampled { sources, seed };
    }
    let report = compute_metrics(&graph, &metrics)?;
    let pred = theory::predict(params.eta, params.m)?;
    let comparison = compare_with_theory(&report, &pred);
    if let (Some(dir), true) = (dir, spec.write_edge_lists) {
        let path = dir.join(format!("run_{}.edges", job.index));
        let g0 = params.initial_graph.build()?;
        let list = edge_list_with_header(graph, &params, &stats, g0.num_vertices(), g0.num_edges());
        io::write_edge_list_file(&path, &list)?;
    }
    Ok(RunRecord {
        label: job.run.label.clone(),
        replicate: job.replicate,
        index: job.index,
        params,
        stats,
        report,
        comparison,
    })
}

/// Edge list with the generation parameters, statistics and the edge-count
/// prediction as header comments.
pub fn edge_list_with_header(
    graph: crate::graph::Graph,
    params: &ModelParams,
    stats: &GenerationStats,
    g0_vertices: usize,
    g0_edges: usize,
) -> EdgeList {
    let mut meta: Vec<(&str, String)> = vec![
        ("eta", params.eta.to_string()),
        ("m", params.m.to_string()),
        ("T", params.steps.to_string()),
        ("seed", params.seed.to_string()),
        ("initial", params.initial_graph.label()),
        ("sweep", sweep_mode_name(params.sweep).to_string()),
        ("pair_policy", pair_policy_name(params.pair_policy).to_string()),
        (io::KEY_INITIAL_VERTICES, g0_vertices.to_string()),
    ];
    meta.extend(stats.fields().iter().map(|&(k, v)| (k, v.to_string())));
    let expected = theory::expected_edges(params.steps as u64, params.eta, params.m, g0_edges);
    meta.push(("expected_edges", expected.to_string()));
    EdgeList::new(graph, meta)
}

fn aggregate(run: &RunSpec, records: &[&RunRecord]) -> Result<Aggregate> {
    let collect = |f: &dyn Fn(&RunRecord) -> Option<f64>| -> Summary {
        Summary::of(&records.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
    };
    let g0 = run.params.initial_graph.build()?;
    let p = &run.params;
    Ok(Aggregate {
        label: run.label.clone(),
        eta: p.eta,
        m: p.m,
        n: g0.num_vertices() + p.steps,
        replicates: records.len(),
        edges: collect(&|r| Some(r.report.num_edges as f64)),
        avg_degree: collect(&|r| Some(r.report.avg_degree)),
        avg_clustering: collect(&|r| Some(r.report.avg_clustering)),
        global_transitivity: collect(&|r| Some(r.report.global_transitivity)),
        mean_distance: collect(&|r| r.report.mean_distance.map(|d| d.value)),
        gamma_mle: collect(&|r| r.report.power_law.map(|f| f.gamma_mle)),
        gamma_regression: collect(&|r| r.report.power_law.map(|f| f.gamma_regression)),
        predictions: theory::predict(p.eta, p.m)?,
        expected_edges: theory::expected_edges(p.steps as u64, p.eta, p.m, g0.num_edges()),
        runs_above_bound: records.iter().filter(|r| r.comparison.cc_above_bound).count(),
    })
}

pub const METRICS_CSV_COLUMNS: &str = "kind,label,replicate,seed,eta,m,n,\
edges,edges_sd,avg_degree,avg_degree_sd,avg_clustering,avg_clustering_sd,\
global_transitivity,global_transitivity_sd,mean_distance,mean_distance_sd,\
gamma_mle,gamma_mle_sd,gamma_regression,gamma_regression_sd,\
bound_b,predicted_gamma,cc_above_bound";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn summary_cells(s: &Summary) -> String {
    if s.count == 0 {
        "NA,NA".to_string()
    } else {
        format!("{},{}", s.mean, s.sd)
    }
}

/// `metrics.csv` contents: a comment line documenting the columns, the header
/// row, run rows, then aggregate rows. For aggregate rows `replicate` holds the
/// replicate count, `seed` the base seed and `cc_above_bound` the number of
/// replicates at or above the bound.
pub fn metrics_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# experiment={} base_seed={} columns: {}",
        result.name, result.base_seed, METRICS_CSV_COLUMNS
    );
    let _ = writeln!(out, "{METRICS_CSV_COLUMNS}");
    for r in &result.runs {
        let rep = &r.report;
        let fit = rep.power_law;
        let _ = writeln!(
            out,
            "run,{},{},{},{},{},{},{},,{},,{},,{},,{},,{},,{},,{},{},{}",
            r.label,
            r.replicate,
            r.params.seed,
            r.params.eta,
            r.params.m,
            rep.num_vertices,
            rep.num_edges,
            rep.avg_degree,
            rep.avg_clustering,
            rep.global_transitivity,
            opt(rep.mean_distance.map(|d| d.value)),
            opt(fit.map(|f| f.gamma_mle)),
            opt(fit.map(|f| f.gamma_regression)),
            r.comparison.bound_b,
            r.comparison.predicted_gamma,
            r.comparison.cc_above_bound,
        );
    }
    for a in &result.aggregates {
        let _ = writeln!(
            out,
            "aggregate,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            a.label,
            a.replicates,
            result.base_seed,
            a.eta,
            a.m,
            a.n,
            summary_cells(&a.edges),
            summary_cells(&a.avg_degree),
            summary_cells(&a.avg_clustering),
            summary_cells(&a.global_transitivity),
            summary_cells(&a.mean_distance),
            summary_cells(&a.gamma_mle),
            summary_cells(&a.gamma_regression),
            a.predictions.b,
            a.predictions.gamma,
            a.runs_above_bound,
        );
    }
    out
}

pub fn theory_text(result: &ExperimentResult) -> String {
    let mut out = String::new();
    for a in &result.aggregates {
        let _ = writeln!(out, "[{}]", a.label);
        for (k, v) in a.predictions.fields() {
            let _ = writeln!(out, "{k}={v}");
        }
        let _ = writeln!(out, "n={}", a.n);
        let _ = writeln!(out, "predicted_avg_degree={}", a.predictions.avg_degree());
        let _ = writeln!(out, "expected_edges={}", a.expected_edges);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_table() {
        let all = builtin_presets();
        let find = |name: &str| all.iter().find(|p| p.name == name).unwrap();
        let ec = find("electronic-circuits");
        assert_eq!((ec.n, ec.m, ec.eta), (24_097, 2, 0.23));
        assert_eq!(ec.steps(), 24_095);
        let r = find("roget");
        assert_eq!((r.n, r.m, r.eta), (1_022, 4, 1.4));
        assert_eq!(find("email").reference.edges, Some(58_041));
        assert_eq!(find("marine-food-web").n, 135);
        assert_eq!((find("neural").n, find("neural").steps()), (307, 305));
        assert_eq!(resolve_preset("table2").unwrap().len(), 6);
        assert_eq!(resolve_preset("table3").unwrap().len(), 4);
        assert_eq!(resolve_preset("table1").unwrap().len(), 5);
        let etas: Vec<f64> = resolve_preset("table2").unwrap().iter().map(|p| p.eta).collect();
        assert_eq!(etas, [0.0, 0.4, 0.8, 1.2, 1.6, 2.0]);
        assert!(all.iter().filter(|p| p.group != PresetGroup::RealWorld).all(|p| p.n == 10_000));
    }

    #[test]
    fn replicate_defaults() {
        let all = builtin_presets();
        for p in &all {
            let want = if p.n <= 1_022 { 30 } else { 10 };
            assert_eq!(p.default_replicates(), want, "{}", p.name);
        }
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let err = resolve_preset("unknown").unwrap_err().to_string();
        assert!(err.contains("table2") && err.contains("roget"), "{err}");
    }

    #[test]
    fn summary_statistics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Summary::of(&[7.0]).sd, 0.0);
        assert_eq!(Summary::of(&[]).count, 0);
    }

    #[test]
    fn comparison_flags() {
        let g = crate::graph::Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let report = compute_metrics(&g, &MetricsConfig::default()).unwrap();
        let c = compare_with_theory(&report, &theory::predict(0.0, 2).unwrap());
        assert_eq!(c.bound_b, 0.0);
        assert!(c.cc_above_bound);
        assert_eq!(c.predicted_avg_degree, 4.0);
        assert_eq!(c.degree_ratio, 0.5);
        assert_eq!(c.fitted_gamma, None);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = ExperimentSpec::from_presets("x", &resolve_preset("neural").unwrap());
        spec.runs[0].replicates = 0;
        assert!(run_experiment(&spec).is_err());
        let mut spec = ExperimentSpec::from_presets("a/b", &resolve_preset("neural").unwrap());
        assert!(spec.validate().is_err());
        spec.name = "ok".into();
        spec.runs.clear();
        assert!(spec.validate().is_err());
    }
}
