//! Unary unbiased variation operators.
//!
//! Every operator is a distribution over flip radii followed by a uniform
//! choice of which bits to flip, so its law commutes with bit-position
//! permutations and with XOR by a fixed mask.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial as BinomialLaw, Discrete};

use crate::bitcore::{complement, BitString};
use crate::error::{domain, Error, Result};

/// Largest dimension accepted by [`exact_distribution`].
pub const EXACT_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UnaryOperator {
    /// Flip exactly `r` distinct, uniformly chosen bits.
    FlipExact {
        r: usize,
    },
    /// Flip each bit independently with probability `p`.
    StandardMutation {
        p: f64,
    },
    SingleBit,
    Complement,
}

impl UnaryOperator {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Self::FlipExact { r } if r > n => domain(format!("radius {r} exceeds dimension {n}")),
            Self::StandardMutation { p } => check_probability(p),
            Self::SingleBit if n == 0 => domain("single-bit flip needs n >= 1"),
            _ => Ok(()),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("mutation probability {p} is outside [0, 1]"))
    }
}

pub fn apply<R: Rng + ?Sized>(op: &UnaryOperator, x: &BitString, rng: &mut R) -> Result<BitString> {
    let n = x.len();
    op.validate(n)?;
    let r = match *op {
        UnaryOperator::FlipExact { r } => r,
        UnaryOperator::StandardMutation { p } => sample_radius(p, n, rng)?,
        UnaryOperator::SingleBit => 1,
        UnaryOperator::Complement => return Ok(complement(x)),
    };
    Ok(flip_exact(x, r, &mut |lo, hi| rng.random_range(lo..hi)))
}

/// A `Binomial(n, p)` draw.
pub fn sample_radius<R: Rng + ?Sized>(p: f64, n: usize, rng: &mut R) -> Result<usize> {
    check_probability(p)?;
    let law = Binomial::new(n as u64, p).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(law.sample(rng) as usize)
}

/// `(y, complement(y))` with `y = apply(op, x)`.
pub fn mirrored<R: Rng + ?Sized>(op: &UnaryOperator, x: &BitString, rng: &mut R) -> Result<(BitString, BitString)> {
    let y = apply(op, x, rng)?;
    let y_bar = complement(&y);
    Ok((y, y_bar))
}

/// Flip `r` bits of `x`. `pick(lo, hi)` must return a uniform index in
/// `lo..hi`; it is called `min(r, n - r)` times with `lo = 0, 1, ...`.
fn flip_exact(x: &BitString, r: usize, pick: &mut impl FnMut(usize, usize) -> usize) -> BitString {
    let n = x.len();
    let k = r.min(n - r);
    let chosen = sample_positions(n, k, pick);
    let mut y = x.clone();
    if k < r {
        // more than half the bits move: choose the ones that stay
        y.flip_all();
    }
    for i in chosen {
        y.flip(i);
    }
    y
}

/// `k` distinct positions from `0..n` by partial Fisher-Yates over a virtual
/// identity array; only swapped slots are stored.
fn sample_positions(n: usize, k: usize, pick: &mut impl FnMut(usize, usize) -> usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    if k <= 64 {
        let mut swaps: Vec<(usize, usize)> = Vec::with_capacity(k);
        let read = |swaps: &[(usize, usize)], i: usize| swaps.iter().rev().find(|s| s.0 == i).map_or(i, |s| s.1);
        for i in 0..k {
            let j = pick(i, n);
            out.push(read(&swaps, j));
            let displaced = read(&swaps, i);
            swaps.push((j, displaced));
        }
    } else {
        let mut swaps: HashMap<usize, usize> = HashMap::with_capacity(k);
        for i in 0..k {
            let j = pick(i, n);
            out.push(*swaps.get(&j).unwrap_or(&j));
            let displaced = *swaps.get(&i).unwrap_or(&i);
            swaps.insert(j, displaced);
        }
    }
    out
}

/// The output law of `op` at `x`, obtained by walking every choice sequence
/// of the sampler (weighted by the radius law for standard mutation).
pub fn exact_distribution(op: &UnaryOperator, x: &BitString) -> Result<BTreeMap<BitString, f64>> {
    let n = x.len();
    op.validate(n)?;
    if n > EXACT_LIMIT {
        return Err(Error::Capacity(format!(
            "exact operator laws are limited to n <= {EXACT_LIMIT}, got {n}"
        )));
    }
    let mut law = BTreeMap::new();
    match *op {
        UnaryOperator::Complement => {
            law.insert(complement(x), 1.0);
        }
        UnaryOperator::FlipExact { r } => accumulate_sphere(x, r, 1.0, &mut law),
        UnaryOperator::SingleBit => accumulate_sphere(x, 1, 1.0, &mut law),
        UnaryOperator::StandardMutation { p } => {
            let radius = BinomialLaw::new(p, n as u64).map_err(|e| Error::Domain(e.to_string()))?;
            for r in 0..=n {
                let w = radius.pmf(r as u64);
                if w > 0.0 {
                    accumulate_sphere(x, r, w, &mut law);
                }
            }
        }
    }
    Ok(law)
}

fn accumulate_sphere(x: &BitString, r: usize, weight: f64, law: &mut BTreeMap<BitString, f64>) {
    let n = x.len();
    let k = r.min(n - r);
    let mut choice = vec![0usize; k];
    let mut counts: BTreeMap<BitString, u64> = BTreeMap::new();
    let mut total = 0u64;
    loop {
        choice.iter_mut().enumerate().for_each(|(i, c)| *c = (*c).max(i));
        let mut calls = 0;
        let y = flip_exact(x, r, &mut |lo, hi| {
            debug_assert!(lo == calls && hi == n);
            calls += 1;
            choice[lo]
        });
        *counts.entry(y).or_default() += 1;
        total += 1;
        // odometer over choice[i] in i..n
        let mut i = k;
        loop {
            if i == 0 {
                for (y, c) in counts {
                    *law.entry(y).or_default() += weight * c as f64 / total as f64;
                }
                return;
            }
            i -= 1;
            if choice[i] + 1 < n {
                choice[i] += 1;
                choice[i + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
    }
}

/// Mutation probability in an operator descriptor: a number, or a string
/// such as `"1/n"`, `"2.5/n"` or `"0.01"` resolved against the dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rate {
    Value(f64),
    Symbolic(String),
}

impl Rate {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        let p = match self {
            Rate::Value(p) => *p,
            Rate::Symbolic(s) => {
                let s = s.trim();
                let bad = || Error::Config(format!("cannot read mutation rate {s:?}"));
                match s.strip_suffix("/n") {
                    Some(c) => c.trim().parse::<f64>().map_err(|_| bad())? / n as f64,
                    None => s.parse::<f64>().map_err(|_| bad())?,
                }
            }
        };
        check_probability(p)?;
        Ok(p)
    }
}

/// JSON form of an operator, e.g. `{"kind": "standard-mutation", "p": "1/n"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorSpec {
    FlipExact { r: usize },
    StandardMutation { p: Rate },
    SingleBit,
    Complement,
}

impl OperatorSpec {
    pub fn resolve(&self, n: usize) -> Result<UnaryOperator> {
        let op = match self {
            Self::FlipExact { r } => UnaryOperator::FlipExact { r: *r },
            Self::StandardMutation { p } => UnaryOperator::StandardMutation { p: p.resolve(n)? },
            Self::SingleBit => UnaryOperator::SingleBit,
            Self::Complement => UnaryOperator::Complement,
        };
        op.validate(n)?;
        Ok(op)
    }
}

impl From<UnaryOperator> for OperatorSpec {
    fn from(op: UnaryOperator) -> Self {
        match op {
            UnaryOperator::FlipExact { r } => Self::FlipExact { r },
            UnaryOperator::StandardMutation { p } => Self::StandardMutation { p: Rate::Value(p) },
            UnaryOperator::SingleBit => Self::SingleBit,
            UnaryOperator::Complement => Self::Complement,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::hamming_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn examples() {
        let mut rng = rng();
        let x: BitString = "1011001110".parse().unwrap();
        assert_eq!(apply(&UnaryOperator::FlipExact { r: 0 }, &x, &mut rng).unwrap(), x);
        assert_eq!(
            apply(&UnaryOperator::Complement, &"101".parse().unwrap(), &mut rng).unwrap(),
            "010".parse().unwrap()
        );
        for r in 0..=10 {
            for _ in 0..200 {
                let y = apply(&UnaryOperator::FlipExact { r }, &x, &mut rng).unwrap();
                assert_eq!(hamming_distance(&x, &y).unwrap(), r);
            }
        }
        assert!(apply(&UnaryOperator::FlipExact { r: 11 }, &x, &mut rng).is_err());
        assert!(apply(&UnaryOperator::StandardMutation { p: 1.5 }, &x, &mut rng).is_err());
        assert!(apply(&UnaryOperator::StandardMutation { p: f64::NAN }, &x, &mut rng).is_err());
    }

    #[test]
    fn large_radius_uses_hash_map_path() {
        let mut rng = rng();
        let x = BitString::random(1000, &mut rng);
        for r in [65, 300, 499, 500, 501, 935, 1000] {
            let y = apply(&UnaryOperator::FlipExact { r }, &x, &mut rng).unwrap();
            assert_eq!(hamming_distance(&x, &y).unwrap(), r);
        }
    }

    #[test]
    fn radius_law() {
        let mut rng = rng();
        assert!((0..100).all(|_| sample_radius(0.0, 50, &mut rng).unwrap() == 0));
        assert!((0..100).all(|_| sample_radius(1.0, 50, &mut rng).unwrap() == 50));
        let mean = (0..100_000)
            .map(|_| sample_radius(0.01, 100, &mut rng).unwrap())
            .sum::<usize>() as f64
            / 1e5;
        assert!((0.97..=1.03).contains(&mean), "mean {mean}");
        assert!(sample_radius(-0.1, 5, &mut rng).is_err());
    }

    #[test]
    fn mirrored_pairs() {
        let mut rng = rng();
        let x = BitString::random(40, &mut rng);
        for _ in 0..100 {
            let (y, yb) = mirrored(&UnaryOperator::StandardMutation { p: 0.1 }, &x, &mut rng).unwrap();
            assert_eq!(hamming_distance(&y, &yb).unwrap(), 40);
            assert_eq!(y.count_zeros(), yb.count_ones());
        }
    }

    #[test]
    fn sphere_law_is_uniform() {
        let x: BitString = "101100".parse().unwrap();
        for r in 0..=6 {
            let law = exact_distribution(&UnaryOperator::FlipExact { r }, &x).unwrap();
            let size = crate::bitcore::binomial(6, r).to_string().parse::<usize>().unwrap();
            assert_eq!(law.len(), size);
            for (y, p) in &law {
                assert_eq!(hamming_distance(&x, y).unwrap(), r);
                assert!((p - 1.0 / size as f64).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn standard_mutation_is_independent_flips() {
        for n in 1..=6 {
            let x = BitString::from_index(n, 0b10_1101 & ((1 << n) - 1));
            for p in [0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0] {
                let law = exact_distribution(&UnaryOperator::StandardMutation { p }, &x).unwrap();
                for v in 0..1u64 << n {
                    let y = BitString::from_index(n, v);
                    let h = hamming_distance(&x, &y).unwrap() as i32;
                    let expect = p.powi(h) * (1.0 - p).powi(n as i32 - h);
                    let got = law.get(&y).copied().unwrap_or(0.0);
                    assert!((got - expect).abs() < 1e-12, "n={n} p={p} y={y}");
                }
            }
        }
    }

    #[test]
    fn exact_law_capacity() {
        let x = BitString::zeros(EXACT_LIMIT + 1);
        assert!(matches!(
            exact_distribution(&UnaryOperator::SingleBit, &x),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn descriptors() {
        let spec: OperatorSpec = serde_json::from_str(r#"{"kind":"standard-mutation","p":"1/n"}"#).unwrap();
        assert_eq!(spec.resolve(100).unwrap(), UnaryOperator::StandardMutation { p: 0.01 });
        let spec: OperatorSpec = serde_json::from_str(r#"{"kind":"standard-mutation","p":"2/n"}"#).unwrap();
        assert_eq!(spec.resolve(4).unwrap(), UnaryOperator::StandardMutation { p: 0.5 });
        let spec: OperatorSpec = serde_json::from_str(r#"{"kind":"standard-mutation","p":0.25}"#).unwrap();
        assert_eq!(spec.resolve(4).unwrap(), UnaryOperator::StandardMutation { p: 0.25 });
        let spec: OperatorSpec = serde_json::from_str(r#"{"kind":"flip-exact","r":3}"#).unwrap();
        assert!(spec.resolve(2).is_err());
        let spec: OperatorSpec = serde_json::from_str(r#"{"kind":"standard-mutation","p":"1/x"}"#).unwrap();
        assert!(spec.resolve(4).is_err());
        let op = UnaryOperator::SingleBit;
        let json = serde_json::to_string(&OperatorSpec::from(op)).unwrap();
        assert_eq!(json, r#"{"kind":"single-bit"}"#);
    }
}
