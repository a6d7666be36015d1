//! Classic benchmark functions defined on the number or pattern of bits.

use super::{assert_dim, Objective, TargetKind, TargetSet};
use crate::bitcore::BitString;
use crate::error::{domain, Result};

pub fn onemax(x: &BitString) -> f64 {
    x.count_ones() as f64
}

pub fn leadingones(x: &BitString) -> f64 {
    x.leading_ones() as f64
}

pub fn leadingzeros(x: &BitString) -> f64 {
    x.leading_zeros() as f64
}

pub fn twomax(x: &BitString) -> f64 {
    x.count_ones().max(x.count_zeros()) as f64
}

/// TwoMax plus one extra unit at the all-ones string.
pub fn twomax_prime(x: &BitString) -> f64 {
    twomax(x) + if x.is_all_ones() { 1.0 } else { 0.0 }
}

/// Hierarchical if-and-only-if. Every aligned block of size `2^l` whose
/// bits are all equal contributes `2^l`; single bits always contribute 1.
pub fn hiff(x: &BitString) -> Result<f64> {
    let n = x.len();
    if !n.is_power_of_two() {
        return domain(format!("H-IFF needs a power-of-two length, got {n}"));
    }
    // Some(b): block is uniform with value b.
    let mut level: Vec<Option<bool>> = x.iter().map(Some).collect();
    let mut total = n as u64;
    let mut size = 1u64;
    while level.len() > 1 {
        size *= 2;
        level = level
            .chunks_exact(2)
            .map(|pair| match (pair[0], pair[1]) {
                (Some(a), Some(b)) if a == b => Some(a),
                _ => None,
            })
            .collect();
        total += size * level.iter().filter(|b| b.is_some()).count() as u64;
    }
    Ok(total as f64)
}

/// `k + |x|_1` on the plateau and at the optimum, `n - |x|_1` in the gap.
pub fn jump_k(x: &BitString, k: usize) -> Result<f64> {
    let n = x.len();
    if k == 0 || k > n {
        return domain(format!("jump gap k = {k} outside 1..={n}"));
    }
    let ones = x.count_ones();
    Ok(if ones <= n - k || ones == n {
        (k + ones) as f64
    } else {
        (n - ones) as f64
    })
}

/// `|x|_1` up to `n - d` ones, `|x|_1 - d + 1/2` beyond the cliff.
pub fn cliff_d(x: &BitString, d: usize) -> Result<f64> {
    let n = x.len();
    if d == 0 || d > n {
        return domain(format!("cliff depth d = {d} outside 1..={n}"));
    }
    let ones = x.count_ones();
    Ok(if ones <= n - d {
        ones as f64
    } else {
        ones as f64 - d as f64 + 0.5
    })
}

macro_rules! dimension_only {
    ($name:ident) => {
        #[derive(Clone, Debug)]
        pub struct $name {
            n: usize,
        }

        impl $name {
            pub fn new(n: usize) -> Self {
                assert!(n >= 1);
                Self { n }
            }
        }
    };
}

dimension_only!(OneMax);
dimension_only!(LeadingOnes);
dimension_only!(LeadingZeros);

impl Objective for OneMax {
    fn name(&self) -> String {
        "onemax".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        onemax(x)
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        Some(TargetSet::points(
            TargetKind::LocalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
    fn counts_ones(&self) -> bool {
        true
    }
}

impl Objective for LeadingOnes {
    fn name(&self) -> String {
        "leadingones".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        leadingones(x)
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
}

impl Objective for LeadingZeros {
    fn name(&self) -> String {
        "leadingzeros".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        leadingzeros(x)
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::zeros(self.n)],
        ))
    }
}

#[derive(Clone, Debug)]
pub struct TwoMax {
    n: usize,
    prime: bool,
}

impl TwoMax {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n, prime: false }
    }

    /// The variant with the extra all-ones term.
    pub fn prime(n: usize) -> Self {
        assert!(n >= 1);
        Self { n, prime: true }
    }
}

impl Objective for TwoMax {
    fn name(&self) -> String {
        if self.prime { "twomax-prime" } else { "twomax" }.into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        if self.prime {
            twomax_prime(x)
        } else {
            twomax(x)
        }
    }
    fn global_optima(&self) -> Result<TargetSet> {
        let mut points = vec![BitString::ones(self.n)];
        if !self.prime {
            points.push(BitString::zeros(self.n));
        }
        Ok(TargetSet::points(TargetKind::GlobalOptima, points))
    }
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        if self.n == 1 {
            return None;
        }
        Some(TargetSet::points(
            TargetKind::LocalOptima,
            vec![BitString::zeros(self.n), BitString::ones(self.n)],
        ))
    }
}

#[derive(Clone, Debug)]
pub struct Hiff {
    n: usize,
}

impl Hiff {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return domain(format!("H-IFF needs a power-of-two length, got {n}"));
        }
        Ok(Self { n })
    }
}

impl Objective for Hiff {
    fn name(&self) -> String {
        "hiff".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        hiff(x).expect("length checked at construction")
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::zeros(self.n), BitString::ones(self.n)],
        ))
    }
}

#[derive(Clone, Debug)]
pub struct Jump {
    n: usize,
    k: usize,
}

impl Jump {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return domain(format!("jump gap k = {k} outside 1..={n}"));
        }
        Ok(Self { n, k })
    }
}

impl Objective for Jump {
    fn name(&self) -> String {
        format!("jump-{}", self.k)
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        jump_k(x, self.k).expect("k checked at construction")
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
    /// The ring of points with exactly `k` zeros, plus the optimum.
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        let counts = if self.k == 1 {
            vec![self.n]
        } else {
            vec![self.n - self.k, self.n]
        };
        Some(TargetSet::ones_count(TargetKind::LocalOptima, self.n, counts))
    }
}

#[derive(Clone, Debug)]
pub struct Cliff {
    n: usize,
    d: usize,
}

impl Cliff {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n {
            return domain(format!("cliff depth d = {d} outside 1..={n}"));
        }
        Ok(Self { n, d })
    }
}

impl Objective for Cliff {
    fn name(&self) -> String {
        format!("cliff-{}", self.d)
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        cliff_d(x, self.d).expect("d checked at construction")
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        let counts = if self.d == 1 {
            vec![self.n]
        } else {
            vec![self.n - self.d, self.n]
        };
        Some(TargetSet::ones_count(TargetKind::LocalOptima, self.n, counts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::complement;
    use crate::objectives::local_optima;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn with_ones(n: usize, ones: usize) -> BitString {
        BitString::with_ones(n, &(0..ones).collect::<Vec<_>>())
    }

    #[test]
    fn onemax_examples() {
        assert_eq!(onemax(&bs("1111")), 4.0);
        assert_eq!(onemax(&bs("0000")), 0.0);
        assert_eq!(onemax(&bs("1010")), 2.0);
    }

    #[test]
    fn leading_examples() {
        assert_eq!(leadingones(&bs("1101")), 2.0);
        assert_eq!(leadingones(&bs("0111")), 0.0);
        assert_eq!(leadingzeros(&bs("0011")), 2.0);
        assert_eq!(leadingzeros(&bs("0011")), leadingones(&bs("1100")));
    }

    #[test]
    fn leadingzeros_is_leadingones_of_complement() {
        for v in 0..1u64 << 10 {
            let x = BitString::from_index(10, v);
            assert_eq!(leadingzeros(&x), leadingones(&complement(&x)));
        }
    }

    #[test]
    fn twomax_examples() {
        assert_eq!(twomax(&bs("1111")), 4.0);
        assert_eq!(twomax(&bs("0000")), 4.0);
        assert_eq!(twomax(&bs("1100")), 2.0);
        assert_eq!(twomax_prime(&bs("1111")), 5.0);
        assert_eq!(twomax_prime(&bs("0000")), 4.0);
    }

    #[test]
    fn hiff_examples() {
        assert_eq!(hiff(&bs("1111")).unwrap(), 12.0);
        assert_eq!(hiff(&bs("0000")).unwrap(), 12.0);
        assert_eq!(hiff(&bs("1100")).unwrap(), 8.0);
        assert!(hiff(&bs("110")).is_err());
        assert!(Hiff::new(6).is_err());
    }

    #[test]
    fn hiff_optimum_value() {
        // (k + 1) levels, each summing to n when the string is uniform.
        for k in 0..8 {
            let n = 1usize << k;
            assert_eq!(hiff(&BitString::ones(n)).unwrap(), ((k + 1) * n) as f64);
        }
    }

    #[test]
    fn jump_examples() {
        assert_eq!(jump_k(&bs("11111"), 2).unwrap(), 7.0);
        assert_eq!(jump_k(&with_ones(5, 3), 2).unwrap(), 5.0);
        assert_eq!(jump_k(&with_ones(5, 4), 2).unwrap(), 1.0);
        assert!(jump_k(&bs("11111"), 0).is_err());
        assert!(jump_k(&bs("11111"), 6).is_err());
    }

    #[test]
    fn cliff_examples() {
        assert_eq!(cliff_d(&BitString::ones(6), 2).unwrap(), 4.5);
        assert_eq!(cliff_d(&with_ones(6, 4), 2).unwrap(), 4.0);
        assert_eq!(cliff_d(&with_ones(6, 5), 2).unwrap(), 3.5);
        assert!(cliff_d(&with_ones(6, 5), 7).is_err());
    }

    #[test]
    fn twomax_local_optima_scan() {
        let scan = local_optima(&TwoMax::new(6))
            .unwrap()
            .enumerate(&TwoMax::new(6))
            .unwrap();
        assert_eq!(scan, vec![BitString::zeros(6), BitString::ones(6)]);
    }

    #[test]
    fn jump_local_optima_scan() {
        let obj = Jump::new(8, 2).unwrap();
        let scan = local_optima(&obj).unwrap();
        let members = scan.enumerate(&obj).unwrap();
        assert_eq!(members.len(), 28 + 1);
        assert!(members.iter().all(|x| x.count_ones() == 6 || x.count_ones() == 8));
    }

    #[test]
    fn closed_forms_match_scans() {
        let objs: Vec<Box<dyn Objective>> = vec![
            Box::new(TwoMax::new(9)),
            Box::new(OneMax::new(9)),
            Box::new(Jump::new(9, 1).unwrap()),
            Box::new(Jump::new(9, 3).unwrap()),
            Box::new(Jump::new(9, 9).unwrap()),
            Box::new(Cliff::new(9, 1).unwrap()),
            Box::new(Cliff::new(9, 2).unwrap()),
            Box::new(Cliff::new(9, 4).unwrap()),
        ];
        for obj in objs {
            let closed = obj.local_optima_closed_form().unwrap();
            let scanned = local_optima(&obj).unwrap();
            assert_eq!(
                closed.enumerate(&obj).unwrap(),
                scanned.enumerate(&obj).unwrap(),
                "{}",
                obj.name()
            );
        }
    }
}
