//! Measured statistics: clustering, mean distance, degree histogram and
//! power-law exponent estimates.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Default ratio between consecutive logarithmic bin edges.
pub const DEFAULT_BIN_RATIO: f64 = 1.3;
/// Minimum number of degrees at or above `k_min` for a fit.
pub const MIN_FIT_SAMPLES: usize = 50;

pub type DegreeHistogram = BTreeMap<usize, usize>;

/// Number of triangles through each vertex, i.e. edges among its neighbors.
pub fn triangles_per_vertex(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut stamp = vec![usize::MAX; n];
    let mut out = vec![0; n];
    for v in 0..n {
        let nbrs = g.neighbors(v);
        for &u in nbrs {
            stamp[u] = v;
        }
        let mut links = 0;
        for &u in nbrs {
            links += g.neighbors(u).iter().filter(|&&x| stamp[x] == v).count();
        }
        // each neighbor-neighbor edge was seen from both ends
        out[v] = links / 2;
    }
    out
}

fn pairs(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

fn ratio(links: usize, d: usize) -> f64 {
    if d < 2 {
        0.0
    } else {
        links as f64 / pairs(d) as f64
    }
}

/// Edges among the neighbors of `v` over `C(d_v, 2)`; 0 when `d_v < 2`.
pub fn local_clustering(g: &Graph, v: VertexId) -> Result<f64> {
    if v >= g.num_vertices() {
        return Err(Error::InvalidVertex {
            vertex: v,
            num_vertices: g.num_vertices(),
        });
    }
    let nbrs = g.neighbors(v);
    let mut links = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            links += g.has_edge(a, b) as usize;
        }
    }
    Ok(ratio(links, nbrs.len()))
}

/// Mean of the local clustering over all vertices, degree < 2 counted as 0.
pub fn average_clustering(g: &Graph) -> Result<f64> {
    if g.num_vertices() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(average_from_triangles(g, &triangles_per_vertex(g)))
}

fn average_from_triangles(g: &Graph, tri: &[usize]) -> f64 {
    let sum: f64 = tri
        .iter()
        .zip(g.degrees())
        .map(|(&t, &d)| ratio(t, d))
        .sum();
    sum / g.num_vertices() as f64
}

/// `3 × triangles / connected triples`; 0 when there are no triples.
pub fn global_transitivity(g: &Graph) -> Result<f64> {
    if g.num_vertices() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(transitivity_from_triangles(g, &triangles_per_vertex(g)))
}

fn transitivity_from_triangles(g: &Graph, tri: &[usize]) -> f64 {
    // Σ_v triangles(v) counts every triangle three times
    let closed: usize = tri.iter().sum();
    let triples: usize = g.degrees().iter().map(|&d| pairs(d)).sum();
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Vertices of the largest connected component, ascending. Ties go to the
/// component holding the smallest vertex id.
pub fn largest_component(g: &Graph) -> Vec<VertexId> {
    let n = g.num_vertices();
    let mut label = vec![usize::MAX; n];
    let mut best: Vec<VertexId> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        label[s] = s;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if label[w] == usize::MAX {
                    label[w] = s;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        if members.len() > best.len() {
            best = members;
        }
    }
    best.sort_unstable();
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// BFS from every vertex of the largest component.
    #[default]
    Exact,
    /// BFS from `sources` distinct vertices chosen uniformly with `seed`.
    Sampled { sources: usize, seed: u64 },
    /// Do not measure distances.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanDistance {
    pub value: f64,
    pub mode: DistanceMode,
    /// Number of BFS sources actually used.
    pub sources: usize,
    pub component_size: usize,
}

impl MeanDistance {
    pub fn method_label(&self) -> &'static str {
        match self.mode {
            DistanceMode::Exact => "exact",
            DistanceMode::Sampled { .. } => "sampled",
            DistanceMode::Skip => "skipped",
        }
    }
}

/// Mean shortest-path distance between distinct vertices of the largest
/// connected component. Returns `Ok(None)` for [`DistanceMode::Skip`].
pub fn mean_distance(g: &Graph, mode: DistanceMode) -> Result<Option<MeanDistance>> {
    if g.num_vertices() == 0 {
        return Err(Error::EmptyGraph);
    }
    let comp = largest_component(g);
    let c = comp.len();
    if c < 2 {
        return Err(Error::NoEdges);
    }
    let sources: Vec<VertexId> = match mode {
        DistanceMode::Skip => return Ok(None),
        DistanceMode::Exact => comp,
        DistanceMode::Sampled { sources, seed } => {
            if sources == 0 {
                return Err(Error::config("sampled mean distance needs at least one source"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<VertexId> =
                rand::seq::index::sample(&mut rng, c, sources.min(c))
                    .into_iter()
                    .map(|i| comp[i])
                    .collect();
            picked.sort_unstable();
            picked
        }
    };
    let n = g.num_vertices();
    let totals: Vec<u64> = sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), &s| bfs_distance_sum(g, s, dist, queue),
        )
        .collect();
    let total: u64 = totals.iter().sum();
    let value = total as f64 / (sources.len() as f64 * (c - 1) as f64);
    Ok(Some(MeanDistance {
        value,
        mode,
        sources: sources.len(),
        component_size: c,
    }))
}

fn bfs_distance_sum(g: &Graph, s: VertexId, dist: &mut [u32], queue: &mut VecDeque<VertexId>) -> u64 {
    let mut visited = vec![s];
    dist[s] = 0;
    queue.push_back(s);
    let mut total = 0u64;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        total += du as u64;
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = du + 1;
                visited.push(w);
                queue.push_back(w);
            }
        }
    }
    for v in visited {
        dist[v] = u32::MAX;
    }
    total
}

pub fn degree_histogram(g: &Graph) -> DegreeHistogram {
    let mut hist = DegreeHistogram::new();
    for &d in g.degrees() {
        *hist.entry(d).or_default() += 1;
    }
    hist
}

/// Two-column `degree,count` CSV.
pub fn histogram_csv(hist: &DegreeHistogram) -> String {
    let mut out = String::from("degree,count\n");
    for (d, c) in hist {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub k_min: usize,
    /// Degrees at or above `k_min`.
    pub samples: usize,
    pub gamma_mle: f64,
    pub gamma_regression: f64,
}

/// Estimates `γ` in `Pr[k] ~ k^-γ` from the tail `k >= k_min`.
///
/// The MLE uses the discrete approximation
/// `γ = 1 + N / Σ ln(k_i / (k_min - 1/2))`. The regression estimate is minus
/// the least-squares slope of log density against log degree over integer
/// bins whose edges grow by `bin_ratio`.
pub fn fit_power_law(hist: &DegreeHistogram, k_min: usize, bin_ratio: f64) -> Result<PowerLawFit> {
    if k_min < 1 {
        return Err(Error::config("k_min must be ≥ 1"));
    }
    if bin_ratio.is_nan() || bin_ratio <= 1.0 {
        return Err(Error::config(format!("bin ratio must be > 1 (got {bin_ratio})")));
    }
    let tail: Vec<(usize, usize)> = hist
        .range(k_min..)
        .filter(|(_, &c)| c > 0)
        .map(|(&k, &c)| (k, c))
        .collect();
    let samples: usize = tail.iter().map(|&(_, c)| c).sum();
    if samples < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: samples,
            needed: MIN_FIT_SAMPLES,
            k_min,
        });
    }
    if tail.len() < 2 {
        return Err(Error::DegenerateHistogram(format!(
            "all {samples} degrees >= {k_min} are equal"
        )));
    }

    let shift = k_min as f64 - 0.5;
    let log_sum: f64 = tail
        .iter()
        .map(|&(k, c)| c as f64 * (k as f64 / shift).ln())
        .sum();
    let gamma_mle = 1.0 + samples as f64 / log_sum;

    let k_max = tail.last().map(|&(k, _)| k).unwrap_or(k_min);
    let mut points = Vec::new();
    let mut lo = k_min;
    while lo <= k_max {
        let hi = ((lo as f64 * bin_ratio).ceil() as usize).max(lo + 1);
        let count: usize = hist.range(lo..hi).map(|(_, &c)| c).sum();
        if count > 0 {
            let width = (hi - lo) as f64;
            let density = count as f64 / (samples as f64 * width);
            let center = (lo as f64 * (hi - 1) as f64).sqrt();
            points.push((center.ln(), density.ln()));
        }
        lo = hi;
    }
    if points.len() < 2 {
        return Err(Error::DegenerateHistogram(
            "fewer than two non-empty logarithmic bins".into(),
        ));
    }
    let gamma_regression = -least_squares_slope(&points);
    Ok(PowerLawFit {
        k_min,
        samples,
        gamma_mle,
        gamma_regression,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig {
    pub distance: DistanceMode,
    /// Lower cutoff for the power-law fit; defaults to [`default_k_min`].
    pub k_min: Option<usize>,
    /// Edges per step of the generating process, if known.
    pub m: Option<usize>,
    pub bin_ratio: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            distance: DistanceMode::Exact,
            k_min: None,
            m: None,
            bin_ratio: DEFAULT_BIN_RATIO,
        }
    }
}

/// `m + 1` when `m` is known, otherwise one more than the smallest positive
/// degree (which is `m` for graphs grown by preferential attachment).
pub fn default_k_min(hist: &DegreeHistogram, m: Option<usize>) -> usize {
    match m {
        Some(m) => m + 1,
        None => hist.keys().find(|&&d| d > 0).map_or(1, |d| d + 1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub avg_degree: f64,
    pub avg_clustering: f64,
    pub global_transitivity: f64,
    pub mean_distance: Option<MeanDistance>,
    pub degree_histogram: DegreeHistogram,
    /// `None` when the tail is too small or degenerate.
    pub power_law: Option<PowerLawFit>,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "n,e,avg_degree,avg_clustering,global_transitivity,\
mean_distance,distance_method,distance_sources,gamma_mle,gamma_regression,k_min";

    pub fn to_csv_row(&self) -> String {
        let (dist, method, sources) = match &self.mean_distance {
            Some(d) => (d.value.to_string(), d.method_label(), d.sources.to_string()),
            None => ("NA".into(), "skipped", "0".into()),
        };
        let (mle, reg, kmin) = match &self.power_law {
            Some(f) => (
                f.gamma_mle.to_string(),
                f.gamma_regression.to_string(),
                f.k_min.to_string(),
            ),
            None => ("NA".into(), "NA".into(), "NA".into()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.num_vertices,
            self.num_edges,
            self.avg_degree,
            self.avg_clustering,
            self.global_transitivity,
            dist,
            method,
            sources,
            mle,
            reg,
            kmin
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices            {}", self.num_vertices);
        let _ = writeln!(out, "edges               {}", self.num_edges);
        let _ = writeln!(out, "avg_degree          {:.6}", self.avg_degree);
        let _ = writeln!(out, "avg_clustering      {:.6}", self.avg_clustering);
        let _ = writeln!(out, "global_transitivity {:.6}", self.global_transitivity);
        match &self.mean_distance {
            Some(d) => {
                let _ = writeln!(
                    out,
                    "mean_distance       {:.6} ({}, {} sources, component {})",
                    d.value,
                    d.method_label(),
                    d.sources,
                    d.component_size
                );
            }
            None => {
                let _ = writeln!(out, "mean_distance       skipped");
            }
        }
        match &self.power_law {
            Some(f) => {
                let _ = writeln!(
                    out,
                    "gamma_mle           {:.6} (k_min {}, {} samples)",
                    f.gamma_mle, f.k_min, f.samples
                );
                let _ = writeln!(out, "gamma_regression    {:.6}", f.gamma_regression);
            }
            None => {
                let _ = writeln!(out, "gamma               not fitted");
            }
        }
        out
    }
}

pub fn compute_metrics(g: &Graph, config: &MetricsConfig) -> Result<MetricsReport> {
    if g.num_vertices() == 0 {
        return Err(Error::EmptyGraph);
    }
    let tri = triangles_per_vertex(g);
    let hist = degree_histogram(g);
    let k_min = config.k_min.unwrap_or_else(|| default_k_min(&hist, config.m));
    let mean_distance = if g.num_edges() == 0 {
        None
    } else {
        mean_distance(g, config.distance)?
    };
    Ok(MetricsReport {
        num_vertices: g.num_vertices(),
        num_edges: g.num_edges(),
        avg_degree: 2.0 * g.num_edges() as f64 / g.num_vertices() as f64,
        avg_clustering: average_from_triangles(g, &tri),
        global_transitivity: transitivity_from_triangles(g, &tri),
        mean_distance,
        power_law: fit_power_law(&hist, k_min, config.bin_ratio).ok(),
        degree_histogram: hist,
    })
}
