use num_bigint::BigUint;
use num_traits::One;
use statrs::function::factorial::ln_factorial;

use crate::error::{domain, Result};

/// `max(1, ln x)`.
pub fn ln_plus(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("ln+ needs a positive argument, got {x}"));
    }
    Ok(x.ln().max(1.0))
}

/// `ln k!` for `k = 0..=n`.
#[derive(Clone, Debug)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        Self {
            table: (0..=n as u64).map(ln_factorial).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.table.len() - 1
    }

    #[inline]
    pub fn ln_fact(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln C(a, b)`, or `-inf` when `b > a`.
    #[inline]
    pub fn ln_binomial(&self, a: usize, b: usize) -> f64 {
        if b > a {
            f64::NEG_INFINITY
        } else {
            self.table[a] - self.table[b] - self.table[a - b]
        }
    }
}

/// Pascal's triangle up to row `n` in exact integers.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        for a in 0..=n {
            let mut row = vec![BigUint::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)`, zero when `b > a`.
    pub fn get(&self, a: usize, b: usize) -> BigUint {
        if b > a {
            BigUint::ZERO
        } else {
            self.rows[a][b].clone()
        }
    }

    pub fn get_ref(&self, a: usize, b: usize) -> Option<&BigUint> {
        self.rows.get(a)?.get(b)
    }
}

/// `ln(e^a + e^b)`.
#[inline]
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
