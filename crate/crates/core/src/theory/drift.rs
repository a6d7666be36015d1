//! Drift-theorem calculators: expected hitting times under additive drift
//! and exponential tail bounds on the hitting time.

use serde::{Deserialize, Serialize};

use super::numeric::ln_add;
use crate::error::{domain, Result};

/// Expected hitting time bound `g(X₀)/α` under additive drift `α`.
/// Reads as an upper bound when the drift is at least `α` and as a lower
/// bound when it is at most `α`.
pub fn additive_bounds(g0: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    if !(g0 >= 0.0) {
        return domain(format!("g(X0) must be non-negative, got {g0}"));
    }
    Ok(g0 / alpha)
}

/// Per-step moment bounds `β(0), β(1), …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Beta {
    /// The same bound at every step; a fractional horizon is allowed.
    Constant(f64),
    /// One bound per step; the horizon must be an integer within range.
    Sequence(Vec<f64>),
}

impl Beta {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Beta::Constant(b) => *b > 0.0 && b.is_finite(),
            Beta::Sequence(bs) => bs.iter().all(|b| *b > 0.0 && b.is_finite()),
        };
        if !ok {
            return domain("beta values must be positive and finite");
        }
        Ok(())
    }

    /// `ln ∏_{r<t} β(r)`.
    fn ln_product(&self, t: f64) -> Result<f64> {
        match self {
            Beta::Constant(b) => Ok(t * b.ln()),
            Beta::Sequence(bs) => {
                let k = integer_horizon(t, bs.len())?;
                Ok(bs[..k].iter().map(|b| b.ln()).sum())
            }
        }
    }

    /// `ln Σ_{s=1}^{t-1} ∏_{r<s} β(r)`, `-inf` for an empty sum.
    fn ln_sum_of_products(&self, t: f64) -> Result<f64> {
        let steps = match self {
            Beta::Constant(_) => t.ceil() as usize,
            Beta::Sequence(bs) => integer_horizon(t, bs.len())?,
        };
        let mut acc = f64::NEG_INFINITY;
        let mut prefix = 0.0;
        for s in 1..steps {
            prefix += match self {
                Beta::Constant(b) => b.ln(),
                Beta::Sequence(bs) => bs[s - 1].ln(),
            };
            acc = ln_add(acc, prefix);
        }
        Ok(acc)
    }
}

fn integer_horizon(t: f64, len: usize) -> Result<usize> {
    if t.fract() != 0.0 || t > len as f64 {
        return domain(format!(
            "a beta sequence of length {len} needs an integer horizon t <= {len}, got {t}"
        ));
    }
    Ok(t as usize)
}

/// A tail bound before and after clamping to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftTail {
    pub ln_raw: f64,
    pub raw: f64,
    pub probability: f64,
}

impl DriftTail {
    fn from_ln(ln_raw: f64) -> Self {
        let raw = ln_raw.exp();
        Self {
            ln_raw,
            raw,
            probability: raw.clamp(0.0, 1.0),
        }
    }
}

fn check_tail(beta: &Beta, gamma: f64, g0: f64, ga: f64, t: f64) -> Result<()> {
    beta.validate()?;
    if !(gamma > 0.0) {
        return domain(format!("gamma must be positive, got {gamma}"));
    }
    if !(t >= 0.0) || !g0.is_finite() || !ga.is_finite() {
        return domain("t must be non-negative and g values finite");
    }
    Ok(())
}

/// `P(T_a > t) < (∏_{r<t} β_u(r)) e^{γ(g(X₀) - g(a))}` when
/// `E[e^{-γ(g(X_t) - g(X_{t+1}))} | X_t > a] <= β_u(t)`.
pub fn tail_upper(beta: &Beta, gamma: f64, g0: f64, ga: f64, t: f64) -> Result<DriftTail> {
    check_tail(beta, gamma, g0, ga, t)?;
    Ok(DriftTail::from_ln(beta.ln_product(t)? + gamma * (g0 - ga)))
}

/// `P(T_a < t)` when `E[e^{γ(g(X_t) - g(X_{t+1}))} | X_t > a] <= β_ℓ(t)`:
/// `(Σ_{s=1}^{t-1} ∏_{r<s} β_ℓ(r)) e^{-γ(g(X₀) - g(a))}` in general, and
/// `(∏_{r<t} β_ℓ(r)) e^{-γ(g(X₀) - g(a))}` when the target set is absorbing.
/// The bound is 0 at `t = 0`.
pub fn tail_lower(beta: &Beta, gamma: f64, g0: f64, ga: f64, t: f64, absorbing: bool) -> Result<DriftTail> {
    check_tail(beta, gamma, g0, ga, t)?;
    if t == 0.0 {
        return Ok(DriftTail::from_ln(f64::NEG_INFINITY));
    }
    let ln_weight = if absorbing {
        beta.ln_product(t)?
    } else {
        beta.ln_sum_of_products(t)?
    };
    Ok(DriftTail::from_ln(ln_weight - gamma * (g0 - ga)))
}
