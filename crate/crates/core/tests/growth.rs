//! Statistical properties of generated networks.

use etanet::metrics::{compute_metrics, mean_distance, MetricsConfig};
use etanet::theory::expected_edges;
use etanet::{generate, DistanceMode, ModelParams};

#[test]
fn average_degree_follows_edge_count_law() {
    let (eta, m, steps) = (1.0, 2, 10_000);
    let degrees: Vec<f64> = (0..20)
        .map(|seed| {
            let (g, _) = generate(&ModelParams::new(eta, m, steps, seed)).unwrap();
            2.0 * g.num_edges() as f64 / g.num_vertices() as f64
        })
        .collect();
    let mean = degrees.iter().sum::<f64>() / degrees.len() as f64;
    let target = 2.0 * (m as f64 + eta);
    assert!(mean >= 0.93 * target && mean <= target, "mean degree {mean}");
}

#[test]
fn edge_counts_track_the_law_across_parameters() {
    for (eta, m) in [(0.0, 1), (0.5, 3), (2.0, 2), (3.0, 4)] {
        let steps = 3_000;
        let (g, stats) = generate(&ModelParams::new(eta, m, steps, 5)).unwrap();
        let ratio = g.num_edges() as f64 / expected_edges(steps as u64, eta, m, 1);
        assert!((0.92..=1.02).contains(&ratio), "eta={eta} m={m}: {ratio}");
        assert_eq!(g.num_edges(), 1 + stats.pa_edges_added + stats.transitivity_edges_added);
    }
}

#[test]
fn sampled_distance_is_close_to_exact() {
    let (g, _) = generate(&ModelParams::new(1.0, 2, 9_998, 42)).unwrap();
    let exact = mean_distance(&g, DistanceMode::Exact).unwrap().unwrap();
    let sampled = mean_distance(&g, DistanceMode::Sampled { sources: 512, seed: 42 })
        .unwrap()
        .unwrap();
    assert_eq!(exact.component_size, 10_000);
    assert_eq!(sampled.sources, 512);
    let rel = (sampled.value - exact.value).abs() / exact.value;
    assert!(rel < 0.03, "exact {} sampled {}", exact.value, sampled.value);
}

#[test]
fn transitivity_raises_clustering() {
    let config = MetricsConfig {
        distance: DistanceMode::Skip,
        ..MetricsConfig::default()
    };
    let cc = |eta: f64| {
        let (g, _) = generate(&ModelParams::new(eta, 2, 3_000, 8)).unwrap();
        compute_metrics(&g, &config).unwrap().avg_clustering
    };
    let (c0, c1, c2) = (cc(0.0), cc(1.0), cc(2.0));
    assert!(c0 < c1 && c1 < c2, "{c0} {c1} {c2}");
}
