//! Runtime-bound curves and related closed forms.

use std::collections::BTreeMap;
use std::f64::consts::E;

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::numeric::ln_plus;
use crate::error::{domain, Error, Result};

/// Constant of the unique-target lower bound `λn/(c⁻¹ ln⁺λ)`.
pub const C_LOWER: f64 = 1.0 / 60.0;

/// `n* = n/(2¹³ ln n)`.
pub fn n_star(n: f64) -> Result<f64> {
    if !(n > 1.0) {
        return domain(format!("n* needs n > 1, got {n}"));
    }
    Ok(n / (8192.0 * n.ln()))
}

/// Identifiers accepted by [`BoundSpec::lookup`].
pub const BOUND_IDS: [&str; 8] = [
    "lb-unique",
    "lb-lo",
    "ub-lo",
    "hcy",
    "adaptive-ub",
    "cutoff-onemax",
    "cutoff-lo",
    "cutoff-fixed-ea",
];

/// A named bound curve. Asymptotic-only curves carry constant 1 and are
/// never used for pass/fail decisions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub id: String,
    pub description: String,
    pub asymptotic_only: bool,
    pub constants: BTreeMap<String, f64>,
    /// Whether `evaluate` reads `δ`.
    pub uses_delta: bool,
}

impl BoundSpec {
    pub fn lookup(id: &str) -> Result<Self> {
        let (description, asymptotic_only, constants, uses_delta): (&str, bool, Vec<(&str, f64)>, bool) = match id {
            "lb-unique" => (
                "max{c·λn/ln⁺λ, (1-δ) n ln n}: no unbiased parallel algorithm hits a unique target earlier",
                false,
                vec![("c", C_LOWER)],
                true,
            ),
            "lb-lo" => ("λn/ln⁺(λ/n) + n²: LeadingOnes lower bound", true, vec![], false),
            "ub-lo" => ("λn + n²: LeadingOnes upper bound", true, vec![], false),
            "hcy" => (
                "nλ ln ln λ/ln⁺λ + n ln n: fixed-rate (1+λ) EA on OneMax",
                true,
                vec![],
                false,
            ),
            "adaptive-ub" => (
                "(3+e)λn/ln λ + e·n(2+ln n): adaptive (1+λ) EA on OneMax",
                false,
                vec![("e", E)],
                false,
            ),
            "cutoff-onemax" => ("ln n · ln ln n: OneMax cut-off", true, vec![], false),
            "cutoff-lo" => ("n: LeadingOnes cut-off", true, vec![], false),
            "cutoff-fixed-ea" => (
                "(ln n)(ln ln n)/(ln ln ln n): fixed-rate (1+λ) EA cut-off on OneMax",
                true,
                vec![],
                false,
            ),
            other => {
                return Err(Error::Config(format!(
                    "unknown bound id {other:?}; known ids: {}",
                    BOUND_IDS.join(", ")
                )))
            }
        };
        Ok(Self {
            id: id.into(),
            description: description.into(),
            asymptotic_only,
            constants: constants.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            uses_delta,
        })
    }

    pub fn all() -> Vec<Self> {
        BOUND_IDS.iter().map(|id| Self::lookup(id).expect("known id")).collect()
    }

    /// Evaluate at `(n, λ, δ)`; `δ` is ignored by curves that do not use it.
    pub fn evaluate(&self, n: f64, lambda: f64, delta: f64) -> Result<f64> {
        match self.id.as_str() {
            "lb-unique" => lb_unique(n, lambda, delta),
            "lb-lo" => lb_lo(n, lambda),
            "ub-lo" => ub_lo(n, lambda),
            "hcy" => hcy(n, lambda),
            "adaptive-ub" => adaptive_ub(n, lambda),
            "cutoff-onemax" => cutoff_onemax(n),
            "cutoff-lo" => cutoff_lo(n),
            "cutoff-fixed-ea" => cutoff_fixed_ea(n),
            other => Err(Error::Config(format!("unknown bound id {other:?}"))),
        }
    }
}

fn check_n_lambda(n: f64, lambda: f64) -> Result<()> {
    if !(n >= 3.0) || !n.is_finite() {
        return domain(format!("bound curves need n >= 3, got {n}"));
    }
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return domain(format!("bound curves need lambda >= 1, got {lambda}"));
    }
    Ok(())
}

pub fn lb_unique(n: f64, lambda: f64, delta: f64) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    let parallel = C_LOWER * lambda * n / ln_plus(lambda)?;
    Ok(parallel.max((1.0 - delta) * n * n.ln()))
}

pub fn lb_lo(n: f64, lambda: f64) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    Ok(lambda * n / ln_plus(lambda / n)? + n * n)
}

pub fn ub_lo(n: f64, lambda: f64) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    Ok(lambda * n + n * n)
}

/// `ln ln λ` is clamped through `ln⁺` twice so the curve is defined for
/// every `λ >= 1`.
pub fn hcy(n: f64, lambda: f64) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    let l = ln_plus(lambda)?;
    Ok(n * lambda * ln_plus(l)? / l + n * n.ln())
}

/// Needs `λ >= 2` so that `ln λ > 0`.
pub fn adaptive_ub(n: f64, lambda: f64) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    if lambda < 2.0 {
        return domain(format!("adaptive upper bound needs lambda >= 2, got {lambda}"));
    }
    Ok((3.0 + E) * lambda * n / lambda.ln() + E * n * (2.0 + n.ln()))
}

pub fn cutoff_onemax(n: f64) -> Result<f64> {
    check_n_lambda(n, 1.0)?;
    Ok(n.ln() * n.ln().ln())
}

pub fn cutoff_lo(n: f64) -> Result<f64> {
    check_n_lambda(n, 1.0)?;
    Ok(n)
}

/// Needs `n > e^e` so that `ln ln ln n > 0`.
pub fn cutoff_fixed_ea(n: f64) -> Result<f64> {
    check_n_lambda(n, 1.0)?;
    let lll = n.ln().ln().ln();
    if !(lll > 0.0) {
        return domain(format!("fixed-rate cut-off needs n > e^e, got {n}"));
    }
    Ok(n.ln() * n.ln().ln() / lll)
}

/// `(ln(Dλ) + 1)/η`: bound on the expected maximum of λ variables whose
/// exponential moments `E[e^{ηX}]` are at most `D`.
pub fn expected_max_bound(eta: f64, d: f64, lambda: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    if !(d >= 1.0) {
        return domain(format!("D must be at least 1, got {d}"));
    }
    if !(lambda >= 1.0) {
        return domain(format!("lambda must be at least 1, got {lambda}"));
    }
    Ok(((d * lambda).ln() + 1.0) / eta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxGeometricCheck {
    pub lambda: usize,
    pub trials: usize,
    pub sample_mean: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Sample the maximum of λ i.i.d. Geometric(1/2) variables on `{0, 1, …}`
/// `trials` times and compare the sample mean with the bound for
/// `η = ln(3/2)`, `D = 2`.
pub fn mc_check_max_geometric<R: Rng + ?Sized>(lambda: usize, trials: usize, rng: &mut R) -> Result<MaxGeometricCheck> {
    if lambda == 0 || trials == 0 {
        return domain("lambda and trials must be positive");
    }
    let bound = expected_max_bound(1.5f64.ln(), 2.0, lambda as f64)?;
    let geo = Geometric::new(0.5).map_err(|e| Error::Domain(e.to_string()))?;
    let total: u64 = (0..trials)
        .map(|_| (0..lambda).map(|_| geo.sample(rng)).max().unwrap_or(0))
        .sum();
    let sample_mean = total as f64 / trials as f64;
    Ok(MaxGeometricCheck {
        lambda,
        trials,
        sample_mean,
        bound,
        pass: sample_mean <= bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouponBound {
    /// `T = (1-δ)(n-1) ln n`.
    pub threshold: f64,
    /// `(1 - n^{-(1-δ)})^{n*/2}`.
    pub prob_bound: f64,
    pub ln_prob_bound: f64,
    pub n_star: f64,
}

/// Threshold and probability bound for hitting a fixed target within `T`
/// steps of single-bit progress.
pub fn coupon_bound(n: f64, delta: f64) -> Result<CouponBound> {
    if !(n >= 2.0) || !n.is_finite() {
        return domain(format!("coupon bound needs n >= 2, got {n}"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return domain(format!("delta must lie in (0, 1], got {delta}"));
    }
    let ns = n_star(n)?;
    let threshold = (1.0 - delta) * (n - 1.0) * n.ln();
    let ln_prob_bound = ns / 2.0 * (-n.powf(-(1.0 - delta))).ln_1p();
    Ok(CouponBound {
        threshold,
        prob_bound: ln_prob_bound.exp(),
        ln_prob_bound,
        n_star: ns,
    })
}
