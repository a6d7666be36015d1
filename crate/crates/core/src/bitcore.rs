//! Packed bit strings over `{0,1}^n` and exact Hamming-ball counting.
//!
//! Position `i` of a [`BitString`] lives in word `i / 64`, bit `i % 64`.
//! The textual form lists positions left to right, so `"1100"` has
//! `x_0 = x_1 = 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, domain, Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "bit strings have length at least 1");
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut x = Self::zeros(len);
        x.words.iter_mut().for_each(|w| *w = u64::MAX);
        x.mask_tail();
        x
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut x = Self::zeros(len);
        for w in &mut x.words {
            *w = rng.random();
        }
        x.mask_tail();
        x
    }

    /// Builds a string whose positions `0..len` are given by the low bits of
    /// `value` (position `i` is bit `i`). Handy for exhaustive scans.
    pub fn from_index(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut x = Self::zeros(len);
        x.words[0] = value;
        x.mask_tail();
        x
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut x = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            x.set(i, b);
        }
        x
    }

    /// Strings with exactly the positions in `ones` set.
    pub fn with_ones(len: usize, ones: &[usize]) -> Self {
        let mut x = Self::zeros(len);
        for &i in ones {
            x.set(i, true);
        }
        x
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "position {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "position {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn flip_all(&mut self) {
        self.words.iter_mut().for_each(|w| *w = !*w);
        self.mask_tail();
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Length of the run of ones starting at position 0.
    pub fn leading_ones(&self) -> usize {
        let mut run = 0;
        for (k, &w) in self.words.iter().enumerate() {
            let t = w.trailing_ones() as usize;
            run += t;
            if t < WORD || k + 1 == self.words.len() {
                break;
            }
        }
        run.min(self.len)
    }

    pub fn leading_zeros(&self) -> usize {
        let mut run = 0;
        for &w in &self.words {
            let t = w.trailing_zeros() as usize;
            run += t;
            if t < WORD {
                break;
            }
        }
        run.min(self.len)
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn is_all_zeros(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        check_dim(self.len, other.len)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(BitString { len: self.len, words })
    }

    /// Applies a position permutation: output position `perm[i]` receives
    /// input bit `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<BitString> {
        check_dim(self.len, perm.len())?;
        let mut seen = vec![false; self.len];
        let mut out = BitString::zeros(self.len);
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.len || std::mem::replace(&mut seen[p], true) {
                return domain(format!("{perm:?} is not a permutation of 0..{}", self.len));
            }
            out.set(p, self.get(i));
        }
        Ok(out)
    }
}

pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize> {
    check_dim(x.len, y.len)?;
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}

pub fn complement(x: &BitString) -> BitString {
    let mut y = x.clone();
    y.flip_all();
    y
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse("empty bit string".into()));
        }
        let mut x = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => x.set(i, true),
                other => return Err(Error::Parse(format!("invalid bit character {other:?}"))),
            }
        }
        Ok(x)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact count of bit strings, as used for target-set sizes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn from_u64(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }

    pub fn pow2(n: usize) -> Self {
        BigCount(BigUint::one() << n)
    }

    /// Natural log of the exact value; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        if bits <= 1000 {
            return num_traits::ToPrimitive::to_f64(&self.0).unwrap().ln();
        }
        let shift = bits - 64;
        let top: BigUint = &self.0 >> shift;
        num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Mul for &BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact `sum_{i=0}^{d} C(n, i)`.
pub fn hamming_ball_size(n: usize, d: usize) -> Result<BigCount> {
    if d > n {
        return domain(format!("ball radius {d} exceeds dimension {n}"));
    }
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 1..=d {
        term = term * (n - i + 1) / i;
        total += &term;
    }
    Ok(BigCount(total))
}
