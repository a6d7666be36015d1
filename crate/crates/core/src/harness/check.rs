use serde::{Deserialize, Serialize};

use super::records::CsvRow;
use crate::error::{Error, Result};
use crate::theory::BoundSpec;

/// Runs listed verbatim in a report; the rest are only counted.
const MAX_LISTED: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundViolation {
    pub run_id: u64,
    pub n: usize,
    pub lambda: usize,
    pub first_hit_evaluation: u64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub bound: String,
    pub delta: f64,
    pub safety: f64,
    pub runs: usize,
    pub hits: usize,
    /// Smallest threshold `safety × bound(n, λ, δ)` over the runs.
    pub min_threshold: f64,
    pub violation_count: usize,
    pub violations: Vec<LowerBoundViolation>,
    pub pass: bool,
}

/// Count runs whose first hit came strictly before
/// `safety × bound(n, λ, δ)` evaluations. Bounds without explicit
/// constants are rejected.
pub fn check_lower_bound(rows: &[CsvRow], bound: &BoundSpec, delta: f64, safety: f64) -> Result<LowerBoundReport> {
    if bound.asymptotic_only {
        return Err(Error::Config(format!(
            "bound {} is only known up to a constant factor and cannot be checked against run data",
            bound.id
        )));
    }
    if !(safety >= 0.0) || !safety.is_finite() {
        return Err(Error::Config(format!(
            "safety multiplier must be finite and non-negative, got {safety}"
        )));
    }
    let mut min_threshold = f64::INFINITY;
    let mut violation_count = 0;
    let mut violations = Vec::new();
    for row in rows {
        let threshold = safety * bound.evaluate(row.n as f64, row.lambda as f64, delta)?;
        min_threshold = min_threshold.min(threshold);
        if let Some(hit) = row.first_hit_evaluation.filter(|_| row.hit_target) {
            if (hit as f64) < threshold {
                violation_count += 1;
                if violations.len() < MAX_LISTED {
                    violations.push(LowerBoundViolation {
                        run_id: row.run_id,
                        n: row.n,
                        lambda: row.lambda,
                        first_hit_evaluation: hit,
                        threshold,
                    });
                }
            }
        }
    }
    Ok(LowerBoundReport {
        bound: bound.id.clone(),
        delta,
        safety,
        runs: rows.len(),
        hits: rows.iter().filter(|r| r.hit_target).count(),
        min_threshold,
        violation_count,
        violations,
        pass: violation_count == 0,
    })
}
