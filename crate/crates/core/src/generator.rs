//! The η model growth process.
//!
//! Starting from a small initial graph, every time step
//!
//! 1. adds a vertex `v` (growth),
//! 2. links `v` to `m` distinct existing vertices drawn proportionally to degree
//!    (preferential attachment),
//! 3. selects every vertex `w` independently with probability
//!    `min(1, η·d_w / 2e)` and, for each selected `w`, joins a uniformly random
//!    pair of its neighbors (transitivity).
//!
//! Selection probabilities in step 3 use the degrees and edge count as they are
//! when the sweep starts, so the expected number of selections is exactly `η`
//! whenever no probability is clamped.
//!
//! With `η = 0` the process is the Barabási–Albert model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InitialGraph {
    /// Two vertices joined by one edge.
    #[default]
    TwoVerticesOneEdge,
    EdgeList {
        num_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
    },
}

impl InitialGraph {
    pub fn build(&self) -> Result<Graph> {
        match self {
            InitialGraph::TwoVerticesOneEdge => Graph::from_edges(2, &[(0, 1)]),
            InitialGraph::EdgeList {
                num_vertices,
                edges,
            } => Graph::from_edges(*num_vertices, edges),
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialGraph::TwoVerticesOneEdge => "two-vertices".to_string(),
            InitialGraph::EdgeList {
                num_vertices,
                edges,
            } => format!("edge-list(n={num_vertices},e={})", edges.len()),
        }
    }
}

/// How the transitivity sweep draws its selections.
///
/// Both modes select every vertex independently with the same probability;
/// they consume the random stream differently, so a seed reproduces a graph
/// only within one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// One Bernoulli trial per vertex in ascending id order.
    Scan,
    /// Geometric skips with rate `q = η·d_max / 2e`, then each candidate `w` is
    /// kept with probability `d_w / d_max`. Falls back to `Scan` whenever
    /// `q >= 1`.
    #[default]
    Thinned,
}

/// What a selected vertex does when its drawn neighbor pair is already linked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairPolicy {
    /// Skip the selection.
    DropDuplicate,
    /// Draw uniformly among the neighbor pairs that are not yet linked; skip
    /// only when the neighborhood is already a clique.
    #[default]
    ResampleOpenPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub eta: f64,
    pub m: usize,
    /// Number of time steps `T`.
    pub steps: usize,
    pub seed: u64,
    pub initial_graph: InitialGraph,
    pub sweep: SweepMode,
    pub pair_policy: PairPolicy,
}

impl ModelParams {
    pub fn new(eta: f64, m: usize, steps: usize, seed: u64) -> Self {
        Self {
            eta,
            m,
            steps,
            seed,
            initial_graph: InitialGraph::default(),
            sweep: SweepMode::default(),
            pair_policy: PairPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || self.eta < 0.0 {
            return Err(Error::config(format!("eta must be ≥ 0 (got {})", self.eta)));
        }
        if self.m < 1 {
            return Err(Error::config("m must be ≥ 1"));
        }
        if self.steps < 1 {
            return Err(Error::config("T must be ≥ 1"));
        }
        let g0 = self.initial_graph.build()?;
        if g0.num_edges() == 0 {
            return Err(Error::config("initial graph must have at least one edge"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenerationStats {
    pub pa_edges_added: usize,
    pub transitivity_edges_added: usize,
    pub transitivity_selections: usize,
    /// Selected vertex's neighbor pair was already connected.
    pub duplicate_skips: usize,
    /// Selected vertex had fewer than two neighbors.
    pub degree_deficient_skips: usize,
    /// Vertices whose raw selection probability exceeded 1.
    pub clamped_selections: usize,
}

impl GenerationStats {
    /// `(name, value)` pairs in a fixed order, for headers and reports.
    pub fn fields(&self) -> [(&'static str, usize); 6] {
        [
            ("pa_edges_added", self.pa_edges_added),
            ("transitivity_edges_added", self.transitivity_edges_added),
            ("transitivity_selections", self.transitivity_selections),
            ("duplicate_skips", self.duplicate_skips),
            ("degree_deficient_skips", self.degree_deficient_skips),
            ("clamped_selections", self.clamped_selections),
        ]
    }
}

pub fn generate(params: &ModelParams) -> Result<(Graph, GenerationStats)> {
    params.validate()?;
    let mut g = params.initial_graph.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut stats = GenerationStats::default();
    let mut selected = Vec::new();
    for t in 1..=params.steps {
        let v = g.add_vertex(t as u64);
        stats.pa_edges_added += pa_step(&mut g, v, params.m, &mut rng)?;
        selected.clear();
        select_for_transitivity(&g, params.eta, params.sweep, &mut rng, &mut stats, &mut selected);
        close_pairs(&mut g, &selected, params.pair_policy, &mut rng, &mut stats)?;
    }
    Ok((g, stats))
}

/// The Barabási–Albert baseline, i.e. [`generate`] with `η = 0`.
pub fn generate_ba(m: usize, steps: usize, seed: u64) -> Result<(Graph, GenerationStats)> {
    generate(&ModelParams::new(0.0, m, steps, seed))
}

/// Connects the fresh vertex `v` to `min(m, candidates)` distinct vertices,
/// where candidates are the vertices that currently have an edge. All targets
/// are drawn against the degrees at the start of the step and inserted
/// afterwards. Returns the number of edges added.
pub fn pa_step<R: Rng + ?Sized>(g: &mut Graph, v: VertexId, m: usize, rng: &mut R) -> Result<usize> {
    if g.degree(v) != 0 {
        return Err(Error::config(format!("vertex {v} already has edges")));
    }
    if g.num_edges() == 0 {
        return Err(Error::NoEdges);
    }
    let k = m.min(g.num_non_isolated());
    let mut targets: Vec<VertexId> = Vec::with_capacity(k);
    while targets.len() < k {
        let w = g.sample_vertex_by_degree(rng)?;
        if !targets.contains(&w) {
            targets.push(w);
        }
    }
    let mut added = 0;
    for w in targets {
        added += g.add_edge(v, w)? as usize;
    }
    Ok(added)
}

/// One transitivity sweep with the default [`SweepMode`]. Returns the number
/// of edges added.
pub fn transitivity_sweep<R: Rng + ?Sized>(
    g: &mut Graph,
    eta: f64,
    rng: &mut R,
    stats: &mut GenerationStats,
) -> Result<usize> {
    transitivity_sweep_with(g, eta, SweepMode::default(), PairPolicy::default(), rng, stats)
}

pub fn transitivity_sweep_with<R: Rng + ?Sized>(
    g: &mut Graph,
    eta: f64,
    mode: SweepMode,
    policy: PairPolicy,
    rng: &mut R,
    stats: &mut GenerationStats,
) -> Result<usize> {
    let mut selected = Vec::new();
    select_for_transitivity(g, eta, mode, rng, stats, &mut selected);
    close_pairs(g, &selected, policy, rng, stats)
}

/// Appends to `out`, in ascending order, the vertices selected for this sweep.
/// Vertex `w` is selected with probability `min(1, η·d_w / 2e)`, independently
/// of every other vertex.
pub fn select_for_transitivity<R: Rng + ?Sized>(
    g: &Graph,
    eta: f64,
    mode: SweepMode,
    rng: &mut R,
    stats: &mut GenerationStats,
    out: &mut Vec<VertexId>,
) {
    if eta <= 0.0 || g.num_edges() == 0 {
        return;
    }
    let scale = eta / (2 * g.num_edges()) as f64;
    let d_max = g.max_degree();
    let q = scale * d_max as f64;
    let start = out.len();
    if mode == SweepMode::Scan || q >= 1.0 {
        for (w, &d) in g.degrees().iter().enumerate() {
            if d == 0 {
                continue;
            }
            let p = scale * d as f64;
            if p > 1.0 {
                stats.clamped_selections += 1;
            }
            if p >= 1.0 || rng.random::<f64>() < p {
                out.push(w);
            }
        }
    } else {
        // Bernoulli(q) trials at every vertex, located by geometric gaps,
        // each thinned by d_w / d_max: the marginal is q·d_w/d_max = η·d_w/2e.
        let gaps = Geometric::new(q).expect("0 < q < 1");
        let n = g.num_vertices() as u64;
        let mut w = gaps.sample(rng);
        while w < n {
            let d = g.degree(w as usize);
            if d > 0 && rng.random_range(0..d_max) < d {
                out.push(w as usize);
            }
            w = w.saturating_add(1).saturating_add(gaps.sample(rng));
        }
    }
    stats.transitivity_selections += out.len() - start;
}

fn close_pairs<R: Rng + ?Sized>(
    g: &mut Graph,
    selected: &[VertexId],
    policy: PairPolicy,
    rng: &mut R,
    stats: &mut GenerationStats,
) -> Result<usize> {
    let mut added = 0;
    for &w in selected {
        let Some((x, y)) = g.sample_neighbor_pair(w, rng)? else {
            stats.degree_deficient_skips += 1;
            continue;
        };
        let pair = match policy {
            PairPolicy::DropDuplicate => Some((x, y)),
            PairPolicy::ResampleOpenPair if !g.has_edge(x, y) => Some((x, y)),
            PairPolicy::ResampleOpenPair => sample_open_pair(g, w, rng)?,
        };
        match pair {
            Some((x, y)) if g.add_edge(x, y)? => added += 1,
            _ => stats.duplicate_skips += 1,
        }
    }
    stats.transitivity_edges_added += added;
    Ok(added)
}

const OPEN_PAIR_ATTEMPTS: usize = 32;

/// Uniform draw among the unlinked pairs of neighbors of `w`: rejection
/// sampling first, then exhaustive enumeration if every attempt hit a link.
fn sample_open_pair<R: Rng + ?Sized>(
    g: &Graph,
    w: VertexId,
    rng: &mut R,
) -> Result<Option<(VertexId, VertexId)>> {
    for _ in 0..OPEN_PAIR_ATTEMPTS {
        if let Some((x, y)) = g.sample_neighbor_pair(w, rng)? {
            if !g.has_edge(x, y) {
                return Ok(Some((x, y)));
            }
        }
    }
    let nbrs = g.neighbors(w);
    let mut open = Vec::new();
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            if !g.has_edge(x, y) {
                open.push((x, y));
            }
        }
    }
    if open.is_empty() {
        Ok(None)
    } else {
        Ok(Some(open[rng.random_range(0..open.len())]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn pa_step_on_seed_edge() {
        for m in [2, 5] {
            let mut g = Graph::from_edges(2, &[(0, 1)]).unwrap();
            let v = g.add_vertex(1);
            assert_eq!(pa_step(&mut g, v, m, &mut rng(1)).unwrap(), 2);
            assert!(g.has_edge(2, 0) && g.has_edge(2, 1));
            assert_eq!(g.num_edges(), 3);
        }
    }

    #[test]
    fn pa_step_target_distribution_on_path() {
        let trials = 200_000;
        let mut counts = [0usize; 3];
        let mut r = rng(11);
        for _ in 0..trials {
            let mut g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
            let v = g.add_vertex(1);
            assert_eq!(pa_step(&mut g, v, 1, &mut r).unwrap(), 1);
            counts[g.neighbors(v)[0]] += 1;
        }
        for (w, p) in [(0, 0.25), (1, 0.5), (2, 0.25)] {
            let freq = counts[w] as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((freq - p).abs() < 5.0 * sigma, "vertex {w}: {freq}");
        }
    }

    #[test]
    fn pa_step_rejects_bad_preconditions() {
        let mut g = Graph::with_vertices(3);
        assert!(matches!(pa_step(&mut g, 2, 1, &mut rng(0)), Err(Error::NoEdges)));
        let mut g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(pa_step(&mut g, 0, 1, &mut rng(0)).is_err());
    }

    #[test]
    fn zero_eta_sweep_is_a_no_op() {
        for mode in [SweepMode::Scan, SweepMode::Thinned] {
            let mut g = star(4);
            let before = g.clone();
            let mut stats = GenerationStats::default();
            let added = transitivity_sweep_with(&mut g, 0.0, mode, PairPolicy::DropDuplicate, &mut rng(2), &mut stats).unwrap();
            assert_eq!(added, 0);
            assert_eq!(stats, GenerationStats::default());
            assert_eq!(g, before);
        }
    }

    #[test]
    fn closed_triangle_only_produces_duplicates() {
        for mode in [SweepMode::Scan, SweepMode::Thinned] {
            let mut g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
            let mut stats = GenerationStats::default();
            let mut r = rng(3);
            for _ in 0..100 {
                assert_eq!(transitivity_sweep_with(&mut g, 2.5, mode, PairPolicy::DropDuplicate, &mut r, &mut stats).unwrap(), 0);
            }
            assert!(stats.transitivity_selections > 0);
            assert_eq!(stats.duplicate_skips, stats.transitivity_selections);
            assert_eq!(g.num_edges(), 3);
        }
    }

    #[test]
    fn star_sweep_expectation() {
        // Only the center (p = 4/8) can close a pair and every pair is new,
        // so the expected number of edges per sweep is exactly 0.5.
        let sweeps = 100_000;
        for mode in [SweepMode::Scan, SweepMode::Thinned] {
            let base = star(4);
            let mut r = rng(5);
            let mut total = 0usize;
            for _ in 0..sweeps {
                let mut g = base.clone();
                let mut stats = GenerationStats::default();
                total += transitivity_sweep_with(&mut g, 1.0, mode, PairPolicy::DropDuplicate, &mut r, &mut stats).unwrap();
            }
            let mean = total as f64 / sweeps as f64;
            let sigma = 0.5 / (sweeps as f64).sqrt();
            assert!((mean - 0.5).abs() < 3.0 * sigma, "{mode:?}: {mean}");
        }
    }

    #[test]
    fn both_sweep_modes_have_the_same_marginals() {
        // Irregular graph: degrees 5, 3, 2, 2, 1, 1, 1, 1 over e = 8.
        let g = Graph::from_edges(
            9,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 6), (1, 7), (2, 3)],
        )
        .unwrap();
        let eta = 1.3;
        let draws = 200_000;
        for mode in [SweepMode::Scan, SweepMode::Thinned] {
            let mut counts = vec![0usize; g.num_vertices()];
            let mut both_0_and_1 = 0usize;
            let mut r = rng(17);
            let mut out = Vec::new();
            let mut stats = GenerationStats::default();
            for _ in 0..draws {
                out.clear();
                select_for_transitivity(&g, eta, mode, &mut r, &mut stats, &mut out);
                assert!(out.windows(2).all(|w| w[0] < w[1]));
                for &w in &out {
                    counts[w] += 1;
                }
                if out.contains(&0) && out.contains(&1) {
                    both_0_and_1 += 1;
                }
            }
            for (w, &c) in counts.iter().enumerate() {
                let p = (eta * g.degree(w) as f64 / 16.0).min(1.0);
                let freq = c as f64 / draws as f64;
                let sigma = (p * (1.0 - p) / draws as f64).sqrt().max(1e-9);
                assert!((freq - p).abs() <= 5.0 * sigma, "{mode:?} vertex {w}: {freq} vs {p}");
            }
            // independence of the two largest hubs
            let p01 = (eta * 5.0 / 16.0) * (eta * 3.0 / 16.0);
            let freq = both_0_and_1 as f64 / draws as f64;
            let sigma = (p01 * (1.0 - p01) / draws as f64).sqrt();
            assert!((freq - p01).abs() < 5.0 * sigma, "{mode:?} joint: {freq} vs {p01}");
        }
    }

    #[test]
    fn resample_draws_uniformly_among_open_pairs() {
        // w = 0 has neighbors 1, 2, 3 and the pair {1, 2} is already linked.
        let base = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let trials = 60_000;
        let mut r = rng(21);
        let mut with_1 = 0usize;
        for _ in 0..trials {
            let mut g = base.clone();
            let mut stats = GenerationStats::default();
            close_pairs(&mut g, &[0], PairPolicy::ResampleOpenPair, &mut r, &mut stats).unwrap();
            assert_eq!(stats.transitivity_edges_added, 1);
            assert!(!g.has_edge(1, 3) || !g.has_edge(2, 3));
            with_1 += g.has_edge(1, 3) as usize;
        }
        let freq = with_1 as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 5.0 * (0.25 / trials as f64).sqrt(), "{freq}");

        // a clique neighborhood can only be skipped
        let mut g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut stats = GenerationStats::default();
        close_pairs(&mut g, &[0, 1, 2], PairPolicy::ResampleOpenPair, &mut r, &mut stats).unwrap();
        assert_eq!(stats.duplicate_skips, 3);
        assert_eq!(g.num_edges(), 3);
    }

    #[test]
    fn open_pair_enumeration_fallback() {
        // hub whose neighbors are all linked except one pair: rejection
        // sampling will usually exhaust its attempts
        let d = 40;
        let mut g = Graph::with_vertices(d + 1);
        for v in 1..=d {
            g.add_edge(0, v).unwrap();
        }
        for x in 1..=d {
            for y in x + 1..=d {
                if (x, y) != (3, 17) {
                    g.add_edge(x, y).unwrap();
                }
            }
        }
        let mut r = rng(2);
        for _ in 0..20 {
            let (x, y) = sample_open_pair(&g, 0, &mut r).unwrap().unwrap();
            assert_eq!((x.min(y), x.max(y)), (3, 17));
        }
        g.add_edge(3, 17).unwrap();
        assert_eq!(sample_open_pair(&g, 0, &mut r).unwrap(), None);
    }

    #[test]
    fn clamping_is_counted() {
        // Star with 4 leaves and η = 3: center raw probability 1.5.
        let g = star(4);
        for mode in [SweepMode::Scan, SweepMode::Thinned] {
            let mut stats = GenerationStats::default();
            let mut out = Vec::new();
            select_for_transitivity(&g, 3.0, mode, &mut rng(0), &mut stats, &mut out);
            assert_eq!(stats.clamped_selections, 1);
            assert_eq!(out.first(), Some(&0));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = ModelParams::new(1.2, 2, 2_000, 99);
        let a = generate(&p).unwrap();
        let b = generate(&p).unwrap();
        assert_eq!(a, b);
        let c = generate(&ModelParams { seed: 100, ..p }).unwrap();
        assert_ne!(a.0.edges(), c.0.edges());
    }

    #[test]
    fn bookkeeping_invariants() {
        for (eta, m, steps, mode) in [
            (0.0, 2, 100, SweepMode::Thinned),
            (2.8, 5, 305, SweepMode::Thinned),
            (2.8, 5, 305, SweepMode::Scan),
            (0.5, 3, 1_000, SweepMode::Thinned),
        ] {
            let p = ModelParams {
                sweep: mode,
                ..ModelParams::new(eta, m, steps, 4)
            };
            let (g, s) = generate(&p).unwrap();
            assert_eq!(g.num_vertices(), 2 + steps);
            assert_eq!(s.pa_edges_added + s.transitivity_edges_added, g.num_edges() - 1);
            // with a connected 2-vertex seed, step t has t + 1 candidates
            let deficit: usize = (1..=steps).map(|t| m.saturating_sub(t + 1)).sum();
            assert_eq!(s.pa_edges_added, m * steps - deficit);
            assert_eq!(
                s.transitivity_selections,
                s.transitivity_edges_added + s.duplicate_skips + s.degree_deficient_skips
            );
            for v in 2..g.num_vertices() {
                assert_eq!(g.birth_time(v), (v - 1) as u64);
            }
        }
    }

    #[test]
    fn ba_baseline_has_no_transitivity() {
        let (g, s) = generate_ba(2, 500, 8).unwrap();
        assert_eq!(s.transitivity_edges_added, 0);
        assert_eq!(s.transitivity_selections, 0);
        assert_eq!(g.num_edges(), 1 + 2 * 500);
    }

    #[test]
    fn explicit_initial_graph() {
        let p = ModelParams {
            initial_graph: InitialGraph::EdgeList {
                num_vertices: 4,
                edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            },
            ..ModelParams::new(1.0, 3, 50, 1)
        };
        let (g, s) = generate(&p).unwrap();
        assert_eq!(g.num_vertices(), 54);
        assert_eq!(s.pa_edges_added, 150);
        assert_eq!(g.birth_time(3), 0);
        assert_eq!(g.birth_time(4), 1);
    }

    #[test]
    fn invalid_params() {
        let ok = ModelParams::new(1.0, 2, 10, 0);
        let bad = [
            ModelParams { m: 0, ..ok.clone() },
            ModelParams { eta: -0.1, ..ok.clone() },
            ModelParams { eta: f64::NAN, ..ok.clone() },
            ModelParams { steps: 0, ..ok.clone() },
            ModelParams {
                initial_graph: InitialGraph::EdgeList {
                    num_vertices: 3,
                    edges: vec![],
                },
                ..ok.clone()
            },
        ];
        for p in bad {
            assert!(matches!(generate(&p), Err(Error::Config(_))), "{p:?}");
        }
        let msg = generate(&ModelParams { m: 0, ..ok }).unwrap_err().to_string();
        assert!(msg.contains("m must be ≥ 1"), "{msg}");
    }
}
