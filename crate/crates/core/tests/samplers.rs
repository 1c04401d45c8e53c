//! Goodness of fit for the two random choices the generator relies on.

use etanet::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const DRAWS: usize = 1_000_000;

/// Pearson statistic and its upper-tail p-value.
fn chi_square(observed: &[usize], expected: &[f64]) -> (f64, f64) {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).unwrap();
    (stat, dist.sf(stat))
}

/// Triangle 0-1-2 with a pendant path 2-3-4 and a star on 5.
fn fixture() -> Graph {
    Graph::from_edges(
        9,
        &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 5), (5, 6), (5, 7), (5, 8), (0, 5)],
    )
    .unwrap()
}

#[test]
fn degree_proportional_vertex_sampling() {
    let g = fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = vec![0usize; g.num_vertices()];
    for _ in 0..DRAWS {
        counts[g.sample_vertex_by_degree(&mut rng).unwrap()] += 1;
    }
    let total = 2.0 * g.num_edges() as f64;
    let expected: Vec<f64> = g.degrees().iter().map(|&d| DRAWS as f64 * d as f64 / total).collect();
    let (stat, p) = chi_square(&counts, &expected);
    assert!(p > 0.01, "chi2={stat} p={p}");
}

#[test]
fn uniform_neighbor_pair_sampling() {
    let g = fixture();
    for w in [2, 5] {
        let nbrs = g.neighbors(w).to_vec();
        let d = nbrs.len();
        let pair_index = |x: usize, y: usize| {
            let i = nbrs.iter().position(|&v| v == x).unwrap();
            let j = nbrs.iter().position(|&v| v == y).unwrap();
            let (i, j) = (i.min(j), i.max(j));
            i * d + j
        };
        let mut counts = vec![0usize; d * d];
        let mut rng = ChaCha8Rng::seed_from_u64(w as u64);
        for _ in 0..DRAWS {
            let (x, y) = g.sample_neighbor_pair(w, &mut rng).unwrap().unwrap();
            assert_ne!(x, y);
            counts[pair_index(x, y)] += 1;
        }
        let observed: Vec<usize> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| i * d + j))
            .map(|k| counts[k])
            .collect();
        assert_eq!(observed.iter().sum::<usize>(), DRAWS, "a draw fell outside i < j");
        let expected = vec![DRAWS as f64 / observed.len() as f64; observed.len()];
        let (stat, p) = chi_square(&observed, &expected);
        assert!(p > 0.01, "w={w} chi2={stat} p={p}");
    }
}

#[test]
fn pair_sampling_needs_two_neighbors() {
    let g = fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(g.sample_neighbor_pair(4, &mut rng).unwrap(), None);
    assert!(Graph::with_vertices(3).sample_vertex_by_degree(&mut rng).is_err());
}
