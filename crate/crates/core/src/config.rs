//! `key=value` text configuration.
//!
//! Model parameters:
//!
//! ```text
//! # comment
//! eta=1.2
//! m=2
//! T=9998
//! seed=7
//! initial=two-vertices        # or a path to an edge-list file
//! sweep=thinned               # or scan
//! pair_policy=resample        # or drop
//! ```
//!
//! Experiment specs add `name`, `base_seed`, `replicates`, `distance`
//! (`exact`, `sampled:<sources>` or `skip`), `k_min`, and any number of
//! `preset=<name>` or `run=<key=value ...>` lines. A `run` line takes `eta`,
//! `m`, either `n` (final vertex count) or `T`, and optionally `label` and
//! `replicates`.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentSpec, RunSpec};
use crate::generator::{InitialGraph, ModelParams, PairPolicy, SweepMode};
use crate::io;
use crate::metrics::{DistanceMode, MetricsConfig};

/// `(line number, key, value)` for every non-comment line.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected key=value, got '{line}'"),
            });
        };
        out.push((idx + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Parse {
        line,
        message: format!("{key}={value}: {e}"),
    })
}

pub fn parse_sweep_mode(s: &str) -> Option<SweepMode> {
    match s {
        "thinned" => Some(SweepMode::Thinned),
        "scan" => Some(SweepMode::Scan),
        _ => None,
    }
}

pub fn parse_pair_policy(s: &str) -> Option<PairPolicy> {
    match s {
        "resample" => Some(PairPolicy::ResampleOpenPair),
        "drop" => Some(PairPolicy::DropDuplicate),
        _ => None,
    }
}

pub fn sweep_mode_name(mode: SweepMode) -> &'static str {
    match mode {
        SweepMode::Thinned => "thinned",
        SweepMode::Scan => "scan",
    }
}

pub fn pair_policy_name(policy: PairPolicy) -> &'static str {
    match policy {
        PairPolicy::ResampleOpenPair => "resample",
        PairPolicy::DropDuplicate => "drop",
    }
}

/// `exact`, `skip`, or `sampled:<sources>`; sampled sources are drawn with `seed`.
pub fn parse_distance_mode(s: &str, seed: u64) -> Option<DistanceMode> {
    match s {
        "exact" => Some(DistanceMode::Exact),
        "skip" => Some(DistanceMode::Skip),
        _ => {
            let sources = s.strip_prefix("sampled:")?.parse().ok()?;
            Some(DistanceMode::Sampled { sources, seed })
        }
    }
}

/// Loads an edge list as an initial graph.
pub fn initial_graph_from_file(path: impl AsRef<Path>) -> Result<InitialGraph> {
    let list = io::read_edge_list_file(path)?;
    Ok(InitialGraph::EdgeList {
        num_vertices: list.graph.num_vertices(),
        edges: list.graph.edges(),
    })
}

/// Applies one model key to `params`. Returns `false` for unknown keys.
fn apply_model_key(params: &mut ModelParams, line: usize, key: &str, value: &str, base: &Path) -> Result<bool> {
    match key {
        "eta" => params.eta = parse_value(line, key, value)?,
        "m" => params.m = parse_value(line, key, value)?,
        "T" => params.steps = parse_value(line, key, value)?,
        "seed" => params.seed = parse_value(line, key, value)?,
        "initial" => {
            params.initial_graph = if value == "two-vertices" {
                InitialGraph::TwoVerticesOneEdge
            } else {
                initial_graph_from_file(base.join(value))?
            }
        }
        "sweep" => {
            params.sweep = parse_sweep_mode(value).ok_or_else(|| Error::Parse {
                line,
                message: format!("sweep must be 'thinned' or 'scan', got '{value}'"),
            })?
        }
        "pair_policy" => {
            params.pair_policy = parse_pair_policy(value).ok_or_else(|| Error::Parse {
                line,
                message: format!("pair_policy must be 'resample' or 'drop', got '{value}'"),
            })?
        }
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses model parameters. Relative `initial=` paths resolve against `base`.
pub fn parse_model_params(text: &str, base: &Path) -> Result<ModelParams> {
    let mut params = ModelParams::new(0.0, 1, 1, 0);
    let mut seen_m = false;
    let mut seen_t = false;
    for (line, key, value) in parse_pairs(text)? {
        if !apply_model_key(&mut params, line, &key, &value, base)? {
            return Err(Error::Parse {
                line,
                message: format!("unknown key '{key}'"),
            });
        }
        seen_m |= key == "m";
        seen_t |= key == "T";
    }
    if !seen_m || !seen_t {
        return Err(Error::config("model config needs both m and T"));
    }
    Ok(params)
}

pub fn read_model_params(path: impl AsRef<Path>) -> Result<ModelParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model_params(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses an experiment spec. `replicates` overrides the per-run default when
/// present; relative paths resolve against `base`.
pub fn parse_experiment_spec(text: &str, base: &Path) -> Result<ExperimentSpec> {
    let mut name = None;
    let mut base_seed = experiments::DEFAULT_BASE_SEED;
    let mut replicates: Option<usize> = None;
    let mut distance = "exact".to_string();
    let mut distance_line = 0;
    let mut k_min = None;
    let mut runs: Vec<RunSpec> = Vec::new();

    for (line, key, value) in parse_pairs(text)? {
        match key.as_str() {
            "name" => name = Some(value),
            "base_seed" => base_seed = parse_value(line, &key, &value)?,
            "replicates" => replicates = Some(parse_value(line, &key, &value)?),
            "distance" => {
                distance = value;
                distance_line = line;
            }
            "k_min" => k_min = Some(parse_value(line, &key, &value)?),
            "preset" => {
                for preset in experiments::resolve_preset(&value)? {
                    runs.push(preset.run_spec());
                }
            }
            "run" => runs.push(parse_run(line, &value, base)?),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key '{key}'"),
                })
            }
        }
    }
    let distance = parse_distance_mode(&distance, base_seed).ok_or_else(|| Error::Parse {
        line: distance_line,
        message: format!("distance must be exact, skip or sampled:<n>, got '{distance}'"),
    })?;
    if runs.is_empty() {
        return Err(Error::config("experiment spec has no run= or preset= lines"));
    }
    let runs = runs
        .into_iter()
        .map(|mut run| {
            if let Some(r) = replicates {
                run.replicates = r;
            }
            run
        })
        .collect();
    Ok(ExperimentSpec {
        name: name.unwrap_or_else(|| "experiment".to_string()),
        runs,
        metrics: MetricsConfig {
            distance,
            k_min,
            ..MetricsConfig::default()
        },
        base_seed,
        output_path: None,
        write_edge_lists: true,
    })
}

fn parse_run(line: usize, value: &str, base: &Path) -> Result<RunSpec> {
    let mut params = ModelParams::new(0.0, 0, 0, 0);
    let mut label = None;
    let mut n: Option<usize> = None;
    let mut replicates = experiments::DEFAULT_REPLICATES;
    for field in value.split_ascii_whitespace() {
        let Some((k, v)) = field.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("run field '{field}' is not key=value"),
            });
        };
        match k {
            "label" => label = Some(v.to_string()),
            "n" => n = Some(parse_value(line, k, v)?),
            "replicates" => replicates = parse_value(line, k, v)?,
            _ => {
                if !apply_model_key(&mut params, line, k, v, base)? {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown run field '{k}'"),
                    });
                }
            }
        }
    }
    if let Some(n) = n {
        let g0 = params.initial_graph.build()?.num_vertices();
        if n <= g0 {
            return Err(Error::Parse {
                line,
                message: format!("n={n} must exceed the initial graph size {g0}"),
            });
        }
        params.steps = n - g0;
    }
    let label = label.unwrap_or_else(|| format!("eta{}-m{}-T{}", params.eta, params.m, params.steps));
    Ok(RunSpec {
        label,
        params,
        replicates,
    })
}

pub fn read_experiment_spec(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_experiment_spec(&text, &base)
}
