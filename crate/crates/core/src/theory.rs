//! Closed-form mean-field predictions for the η model.
//!
//! * degree growth exponent `α = (2η + m) / (2(η + m))`
//! * degree distribution exponent `γ = 1 + 1/α = 2 + m / (2η + m)`
//! * `K = 2η / (2η + m)`
//! * size-independent clustering lower bound
//!   `B = K/(m(α+1)) − K/(m(2α+1)) = 2η(η+m) / (m(4η+3m)(3η+2m))`

use crate::error::{Error, Result};

/// Default birth time below which the asymptotic degree law is not used.
pub const DEFAULT_CUTOFF: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPredictions {
    pub eta: f64,
    pub m: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub k: f64,
    /// Lower bound on the average clustering coefficient.
    pub b: f64,
    pub cutoff: u64,
}

impl TheoryPredictions {
    /// Predicted average degree `2(m + η)` for large `t`.
    pub fn avg_degree(&self) -> f64 {
        2.0 * (self.m as f64 + self.eta)
    }

    /// `(key, value)` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("eta", self.eta.to_string()),
            ("m", self.m.to_string()),
            ("alpha", self.alpha.to_string()),
            ("gamma", self.gamma.to_string()),
            ("K", self.k.to_string()),
            ("B", self.b.to_string()),
            ("L", self.cutoff.to_string()),
        ]
    }
}

fn check(eta: f64, m: usize) -> Result<()> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::config(format!("eta must be ≥ 0 (got {eta})")));
    }
    if m == 0 {
        return Err(Error::config("m must be ≥ 1"));
    }
    Ok(())
}

pub fn alpha(eta: f64, m: usize) -> f64 {
    let m = m as f64;
    (2.0 * eta + m) / (2.0 * (eta + m))
}

pub fn gamma(eta: f64, m: usize) -> f64 {
    let m = m as f64;
    2.0 + m / (2.0 * eta + m)
}

pub fn predict(eta: f64, m: usize) -> Result<TheoryPredictions> {
    predict_with_cutoff(eta, m, DEFAULT_CUTOFF)
}

pub fn predict_with_cutoff(eta: f64, m: usize, cutoff: u64) -> Result<TheoryPredictions> {
    check(eta, m)?;
    let mf = m as f64;
    let k = 2.0 * eta / (2.0 * eta + mf);
    let b = 2.0 * eta * (eta + mf) / (mf * (4.0 * eta + 3.0 * mf) * (3.0 * eta + 2.0 * mf));
    Ok(TheoryPredictions {
        eta,
        m,
        alpha: alpha(eta, m),
        gamma: gamma(eta, m),
        k,
        b,
        cutoff,
    })
}

/// Edge-count law `e(t) = (m + η)·t + e0`.
pub fn expected_edges(t: u64, eta: f64, m: usize, e0: usize) -> f64 {
    (m as f64 + eta) * t as f64 + e0 as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeForm {
    /// `(m + ηm/((m+η)t_v)) · (t/t_v)^α`
    #[default]
    Full,
    /// `m · (t/t_v)^α`, meant for `t_v >= L`.
    Asymptotic,
}

/// Initial degree of a vertex born at `tv`: `m + ηm / ((m+η)·tv)`.
pub fn initial_degree(tv: u64, eta: f64, m: usize) -> f64 {
    let mf = m as f64;
    mf + eta * mf / ((mf + eta) * tv as f64)
}

/// Expected degree at time `t` of the vertex born at `tv`.
pub fn expected_degree(tv: u64, t: u64, eta: f64, m: usize, form: DegreeForm) -> Result<f64> {
    check(eta, m)?;
    if tv < 1 || tv > t {
        return Err(Error::config(format!("need 1 ≤ tv ≤ t (got tv={tv}, t={t})")));
    }
    let growth = (t as f64 / tv as f64).powf(alpha(eta, m));
    let start = match form {
        DegreeForm::Full => initial_degree(tv, eta, m),
        DegreeForm::Asymptotic => m as f64,
    };
    Ok(start * growth)
}

/// Per-vertex clustering lower bound for the vertex born at `tv` in a network
/// grown for `steps` steps: `K/m · ((tv/T)^α − (tv/T)^{2α})`.
pub fn expected_cc_v_lower_bound(tv: u64, steps: u64, eta: f64, m: usize) -> Result<f64> {
    check(eta, m)?;
    if tv < 1 || tv > steps {
        return Err(Error::config(format!("need 1 ≤ tv ≤ T (got tv={tv}, T={steps})")));
    }
    let p = predict(eta, m)?;
    let x = (tv as f64 / steps as f64).powf(p.alpha);
    Ok(p.k / m as f64 * (x - x * x))
}
