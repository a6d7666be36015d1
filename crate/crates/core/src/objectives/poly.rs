use serde::{Deserialize, Serialize};

use super::{assert_dim, Membership, Objective, TargetKind, TargetSet};
use crate::bitcore::BitString;
use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub weight: f64,
    pub vars: Vec<usize>,
}

/// A positively weighted sum of products of variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly")]
pub struct MonotonePolynomial {
    pub n: usize,
    pub monomials: Vec<Monomial>,
}

#[derive(Deserialize)]
struct RawPoly {
    n: usize,
    monomials: Vec<Monomial>,
}

impl TryFrom<RawPoly> for MonotonePolynomial {
    type Error = crate::error::Error;
    fn try_from(raw: RawPoly) -> Result<Self> {
        MonotonePolynomial::new(raw.n, raw.monomials)
    }
}

impl MonotonePolynomial {
    pub fn new(n: usize, monomials: Vec<Monomial>) -> Result<Self> {
        if n == 0 {
            return domain("polynomial needs at least one variable");
        }
        for m in &monomials {
            if !(m.weight > 0.0 && m.weight.is_finite()) {
                return domain(format!("monomial weight must be positive, got {}", m.weight));
            }
            if m.vars.is_empty() {
                return domain("monomials need at least one variable");
            }
            if let Some(&v) = m.vars.iter().find(|&&v| v >= n) {
                return domain(format!("variable index {v} out of range for n = {n}"));
            }
        }
        Ok(Self { n, monomials })
    }

    /// Variables that occur in at least one monomial.
    pub fn support(&self) -> BitString {
        let mut mask = BitString::zeros(self.n);
        self.monomials
            .iter()
            .flat_map(|m| &m.vars)
            .for_each(|&v| mask.set(v, true));
        mask
    }
}

pub fn monotone_poly(poly: &MonotonePolynomial, x: &BitString) -> Result<f64> {
    if let Some(&v) = poly.monomials.iter().flat_map(|m| &m.vars).find(|&&v| v >= x.len()) {
        return domain(format!("variable index {v} out of range for n = {}", x.len()));
    }
    Ok(eval(poly, x))
}

fn eval(poly: &MonotonePolynomial, x: &BitString) -> f64 {
    poly.monomials
        .iter()
        .filter(|m| m.vars.iter().all(|&v| x.get(v)))
        .map(|m| m.weight)
        .sum()
}

impl Objective for MonotonePolynomial {
    fn name(&self) -> String {
        "monotone-poly".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        eval(self, x)
    }
    /// Every string covering the support; variables outside every monomial
    /// are free.
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::new(
            TargetKind::GlobalOptima,
            self.n,
            Membership::Covers(self.support()),
        ))
    }
}
