use etanet::metrics::{fit_power_law, DegreeHistogram, DEFAULT_BIN_RATIO};
use etanet::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cumulative distribution of `Pr[k] ∝ k^-gamma` on `k_min..=k_max`.
fn cdf_table(gamma: f64, k_min: usize, k_max: usize) -> Vec<f64> {
    let weights: Vec<f64> = (k_min..=k_max).map(|k| (k as f64).powf(-gamma)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect()
}

fn sample_power_law(gamma: f64, k_min: usize, n: usize, seed: u64) -> DegreeHistogram {
    let cdf = cdf_table(gamma, k_min, 2_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = DegreeHistogram::new();
    for _ in 0..n {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c < u).min(cdf.len() - 1);
        *hist.entry(k_min + idx).or_default() += 1;
    }
    hist
}

#[test]
fn mle_recovers_synthetic_exponent() {
    for seed in [1, 2, 3] {
        let hist = sample_power_law(2.5, 5, 100_000, seed);
        let fit = fit_power_law(&hist, 5, DEFAULT_BIN_RATIO).unwrap();
        assert_eq!(fit.samples, 100_000);
        assert!((fit.gamma_mle - 2.5).abs() <= 0.05, "seed {seed}: {}", fit.gamma_mle);
        assert!((fit.gamma_regression - 2.5).abs() <= 0.3, "seed {seed}: {}", fit.gamma_regression);
    }
}

#[test]
fn steeper_tail_gives_larger_exponent() {
    let shallow = fit_power_law(&sample_power_law(2.2, 6, 50_000, 4), 6, 1.3).unwrap();
    let steep = fit_power_law(&sample_power_law(3.0, 6, 50_000, 4), 6, 1.3).unwrap();
    assert!((shallow.gamma_mle - 2.2).abs() < 0.05);
    assert!((steep.gamma_mle - 3.0).abs() < 0.05);
}

#[test]
fn fit_rejects_small_or_flat_tails() {
    let flat: DegreeHistogram = [(4, 500)].into_iter().collect();
    assert!(matches!(fit_power_law(&flat, 3, 1.3), Err(Error::DegenerateHistogram(_))));
    let small: DegreeHistogram = [(4, 20), (9, 29)].into_iter().collect();
    assert!(matches!(
        fit_power_law(&small, 3, 1.3),
        Err(Error::InsufficientSamples { found: 49, .. })
    ));
    let ok: DegreeHistogram = [(4, 21), (9, 29)].into_iter().collect();
    assert!(fit_power_law(&ok, 3, 1.3).is_ok());
    assert!(fit_power_law(&ok, 0, 1.3).is_err());
    assert!(fit_power_law(&ok, 3, 1.0).is_err());
}
