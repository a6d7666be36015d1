use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::numeric::{ln_add, BinomialTable, LnFactorials};
use crate::error::{domain, Error, Result};

/// Largest dimension for the exact rational backend.
pub const EXACT_MAX_N: usize = 200;

/// Parameters of one potential-progress step: dimension `n`, potential
/// `s`, zero count `m` of the varied parent, and flip radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProgressParams {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub r: usize,
}

impl ProgressParams {
    pub fn new(n: usize, s: usize, m: usize, r: usize) -> Result<Self> {
        let p = Self { n, s, m, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { n, s, m, r } = *self;
        if 2 * s > n || m < s || m + s > n || r > n {
            return domain(format!(
                "progress parameters need s <= n/2, s <= m <= n - s and r <= n; got n = {n}, s = {s}, m = {m}, r = {r}"
            ));
        }
        Ok(())
    }

    /// The same step seen from the other end: `(s, n - m, n - r)`.
    pub fn mirrored(&self) -> Self {
        Self {
            n: self.n,
            s: self.s,
            m: self.n - self.m,
            r: self.n - self.r,
        }
    }

    /// The hypergeometric count that produces progress `z >= 1`, if any.
    #[inline]
    pub fn red_draws_for(&self, z: usize) -> Option<usize> {
        let t = z + self.r + self.m - self.s;
        (t % 2 == 0).then_some(t / 2)
    }
}

/// A distribution on `0..len` stored as natural logarithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    pub ln_p: Vec<f64>,
}

impl Pmf {
    pub fn p(&self, z: usize) -> f64 {
        self.ln_p.get(z).map_or(0.0, |l| l.exp())
    }

    pub fn ln_p(&self, z: usize) -> f64 {
        self.ln_p.get(z).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn total(&self) -> f64 {
        self.ln_p.iter().map(|l| l.exp()).sum()
    }

    /// `P(X > z)`.
    pub fn tail_above(&self, z: usize) -> f64 {
        self.ln_p.iter().skip(z + 1).map(|l| l.exp()).sum()
    }

    pub fn mean(&self) -> f64 {
        self.ln_p.iter().enumerate().map(|(z, l)| z as f64 * l.exp()).sum()
    }
}

/// A distribution on `0..len` with exact rational probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPmf {
    pub p: Vec<BigRational>,
}

impl ExactPmf {
    pub fn p(&self, z: usize) -> BigRational {
        self.p.get(z).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.p.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Drop trailing zero entries.
    fn trimmed(mut self) -> Self {
        while self.p.len() > 1 && self.p.last().is_some_and(Zero::is_zero) {
            self.p.pop();
        }
        self
    }
}

/// `ln P(Z = z)` for `Z ~ Hypergeom(n, m, r)`: `r` draws from `n` balls of
/// which `m` are red.
#[inline]
pub fn ln_hypergeom(lf: &LnFactorials, n: usize, m: usize, r: usize, z: usize) -> f64 {
    if z > m || z > r || r - z > n - m {
        return f64::NEG_INFINITY;
    }
    lf.ln_binomial(m, z) + lf.ln_binomial(n - m, r - z) - lf.ln_binomial(n, r)
}

fn check_hypergeom(n: usize, m: usize, r: usize) -> Result<()> {
    if m > n || r > n {
        return domain(format!(
            "hypergeometric parameters need m, r <= n; got n = {n}, m = {m}, r = {r}"
        ));
    }
    Ok(())
}

/// `P(Z = z)`, zero outside the support.
pub fn hypergeom_pmf(n: usize, m: usize, r: usize, z: usize) -> Result<f64> {
    check_hypergeom(n, m, r)?;
    Ok(ln_hypergeom(&LnFactorials::new(n), n, m, r, z).exp())
}

pub fn hypergeom_pmf_exact(n: usize, m: usize, r: usize, z: usize) -> Result<BigRational> {
    check_hypergeom(n, m, r)?;
    let table = exact_table(n)?;
    Ok(hypergeom_exact_with(&table, n, m, r, z))
}

fn exact_table(n: usize) -> Result<BinomialTable> {
    if n > EXACT_MAX_N {
        return Err(Error::Capacity(format!(
            "exact rational mode supports n <= {EXACT_MAX_N}, got {n}"
        )));
    }
    Ok(BinomialTable::new(n))
}

pub(crate) fn hypergeom_exact_with(t: &BinomialTable, n: usize, m: usize, r: usize, z: usize) -> BigRational {
    if z > m || z > r || r - z > n - m {
        return BigRational::zero();
    }
    let num = t.get(m, z) * t.get(n - m, r - z);
    BigRational::new(BigInt::from(num), BigInt::from(t.get(n, r)))
}

/// Full hypergeometric law in log space.
pub fn hypergeom_dist(lf: &LnFactorials, n: usize, m: usize, r: usize) -> Pmf {
    Pmf {
        ln_p: (0..=m.min(r)).map(|z| ln_hypergeom(lf, n, m, r, z)).collect(),
    }
}

/// Law of `max{2Z - r + s - m, 0}` in log space.
pub fn delta0_pmf(p: &ProgressParams) -> Result<Pmf> {
    p.validate()?;
    Ok(delta0_with(&LnFactorials::new(p.n), p))
}

pub(crate) fn delta0_with(lf: &LnFactorials, p: &ProgressParams) -> Pmf {
    let ProgressParams { n, s, m, r } = *p;
    let mut ln_p: Vec<f64> = vec![f64::NEG_INFINITY];
    for z in 0..=m.min(r) {
        let l = ln_hypergeom(lf, n, m, r, z);
        if l == f64::NEG_INFINITY {
            continue;
        }
        let d = (2 * z + s).saturating_sub(r + m);
        if d >= ln_p.len() {
            ln_p.resize(d + 1, f64::NEG_INFINITY);
        }
        ln_p[d] = ln_add(ln_p[d], l);
    }
    Pmf { ln_p }
}

/// Law of `max{2Z - r + s - m, 0}` in exact rationals, `n <= 200`.
pub fn delta0_pmf_exact(p: &ProgressParams) -> Result<ExactPmf> {
    p.validate()?;
    let table = exact_table(p.n)?;
    Ok(delta0_exact_with(&table, p))
}

pub(crate) fn delta0_exact_with(t: &BinomialTable, p: &ProgressParams) -> ExactPmf {
    let ProgressParams { n, s, m, r } = *p;
    let denom = BigInt::from(t.get(n, r));
    let mut num: Vec<BigInt> = vec![BigInt::zero()];
    for z in 0..=m.min(r) {
        if r - z > n - m {
            continue;
        }
        let d = (2 * z + s).saturating_sub(r + m);
        if d >= num.len() {
            num.resize(d + 1, BigInt::zero());
        }
        num[d] += BigInt::from(t.get(m, z) * t.get(n - m, r - z));
    }
    ExactPmf {
        p: num.into_iter().map(|x| BigRational::new(x, denom.clone())).collect(),
    }
    .trimmed()
}

/// `P(Z = z)` as exact numerator over `C(n, r)`.
pub(crate) fn hypergeom_numerator(t: &BinomialTable, n: usize, m: usize, r: usize, z: usize) -> num_bigint::BigUint {
    if z > m || z > r || r - z > n - m {
        return num_bigint::BigUint::ZERO;
    }
    t.get(m, z) * t.get(n - m, r - z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn hypergeom_examples() {
        assert!((hypergeom_pmf(4, 2, 2, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(hypergeom_pmf_exact(4, 2, 2, 1).unwrap(), q(2, 3));
        assert_eq!(hypergeom_pmf(5, 0, 3, 0).unwrap(), 1.0);
        assert_eq!(hypergeom_pmf(5, 0, 3, 1).unwrap(), 0.0);
        let lf = LnFactorials::new(60);
        assert!((hypergeom_dist(&lf, 60, 17, 23).total() - 1.0).abs() < 1e-12);
        assert!(hypergeom_pmf(5, 6, 3, 0).is_err());
        assert!(matches!(hypergeom_pmf_exact(201, 2, 2, 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn delta0_examples() {
        let p = ProgressParams::new(2, 1, 1, 1).unwrap();
        let exact = delta0_pmf_exact(&p).unwrap();
        assert_eq!(exact.p, vec![q(1, 2), q(1, 2)]);
        let approx = delta0_pmf(&p).unwrap();
        assert!((approx.p(0) - 0.5).abs() < 1e-15 && (approx.p(1) - 0.5).abs() < 1e-15);

        for m in 3..=7 {
            let p = ProgressParams::new(10, 3, m, 0).unwrap();
            assert_eq!(delta0_pmf_exact(&p).unwrap().p, vec![BigRational::one()]);
        }
        assert!(ProgressParams::new(10, 6, 6, 1).is_err());
        assert!(ProgressParams::new(10, 2, 1, 1).is_err());
        assert!(ProgressParams::new(10, 2, 9, 1).is_err());
    }

    #[test]
    fn backends_agree_and_normalise() {
        let n = 64;
        let lf = LnFactorials::new(n);
        let t = BinomialTable::new(n);
        for s in [0, 3, 10] {
            for m in (s..=n - s).step_by(5) {
                for r in (0..=n).step_by(7) {
                    let p = ProgressParams { n, s, m, r };
                    let a = delta0_with(&lf, &p);
                    let e = delta0_exact_with(&t, &p);
                    assert!(e.total().is_one());
                    assert!((a.total() - 1.0).abs() < 1e-12);
                    for (z, x) in e.to_f64().into_iter().enumerate() {
                        let y = a.p(z);
                        assert!((x - y).abs() <= 1e-10 * x.max(1e-300), "{p:?} z={z}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn progress_needs_matching_parity() {
        let p = ProgressParams::new(100, 5, 5, 2).unwrap();
        assert_eq!(p.red_draws_for(1), None);
        assert_eq!(p.red_draws_for(2), Some(2));
        let pmf = delta0_pmf(&p).unwrap();
        assert_eq!(pmf.p(1), 0.0);
    }
}
