use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::{Direction, Objective};
use crate::bitcore::{binomial, hamming_ball_size, hamming_distance, BigCount, BitString};
use crate::error::{domain, Error, Result};

/// Largest dimension for which whole-cube scans are allowed.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    GlobalOptima,
    LocalOptima,
    WithinDistance(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// An explicit list of members.
    Points(Vec<BitString>),
    /// Every string whose number of one-bits is in the set.
    OnesCount(BTreeSet<usize>),
    /// Every string that has a one-bit wherever `mask` does.
    Covers(BitString),
    /// Every string reaching `value` (direction-aware).
    FitnessReaches {
        value: f64,
        direction: Direction,
    },
    /// Points within Hamming distance `radius` of a set.
    Within {
        inner: Box<Membership>,
        radius: usize,
    },
    Union(Vec<Membership>),
}

impl Membership {
    pub fn contains(&self, x: &BitString, fitness: f64) -> bool {
        self.distance(x, fitness) == Some(0)
    }

    /// Hamming distance from `x` to the set, when the membership kind
    /// supports it; `Some(0)` means membership. Fitness-based sets only
    /// answer membership (`Some(0)` or `None`).
    fn distance(&self, x: &BitString, fitness: f64) -> Option<usize> {
        match self {
            Membership::Points(points) => points.iter().filter_map(|p| hamming_distance(x, p).ok()).min(),
            Membership::OnesCount(counts) => {
                let ones = x.count_ones();
                counts.iter().map(|&c| c.abs_diff(ones)).min()
            }
            Membership::Covers(mask) => Some(
                mask.words()
                    .iter()
                    .zip(x.words())
                    .map(|(m, w)| (m & !w).count_ones() as usize)
                    .sum(),
            ),
            Membership::FitnessReaches { value, direction } => direction.at_least_as_good(fitness, *value).then_some(0),
            Membership::Within { inner, radius } => inner.distance(x, fitness).map(|d| d.saturating_sub(*radius)),
            Membership::Union(parts) => parts.iter().filter_map(|p| p.distance(x, fitness)).min(),
        }
    }

    fn supports_distance(&self) -> bool {
        match self {
            Membership::FitnessReaches { .. } => false,
            Membership::Within { inner, .. } => inner.supports_distance(),
            Membership::Union(parts) => parts.iter().all(Membership::supports_distance),
            _ => true,
        }
    }

    /// Upper bound on the number of members.
    fn size_bound(&self, n: usize) -> BigCount {
        match self {
            Membership::Points(points) => BigCount::from_u64(points.len() as u64),
            Membership::OnesCount(counts) => BigCount(
                counts
                    .iter()
                    .filter(|&&c| c <= n)
                    .map(|&c| binomial(n, c))
                    .fold(BigUint::zero(), |a, b| a + b),
            ),
            Membership::Covers(mask) => BigCount::pow2(n - mask.count_ones()),
            Membership::FitnessReaches { .. } => BigCount::pow2(n),
            Membership::Within { inner, radius } => {
                let ball = hamming_ball_size(n, (*radius).min(n)).expect("radius clamped to n");
                &inner.size_bound(n) * &ball
            }
            Membership::Union(parts) => BigCount(
                parts
                    .iter()
                    .map(|p| p.size_bound(n).0)
                    .fold(BigUint::zero(), |a, b| a + b),
            ),
        }
    }
}

/// A set of search points whose first hit defines a stopping time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetSet {
    pub kind: TargetKind,
    pub n: usize,
    pub membership: Membership,
    pub size_bound: BigCount,
}

impl TargetSet {
    pub fn new(kind: TargetKind, n: usize, membership: Membership) -> Self {
        let size_bound = membership.size_bound(n);
        Self {
            kind,
            n,
            membership,
            size_bound,
        }
    }

    /// Like [`TargetSet::new`] with a tighter known bound.
    pub fn with_bound(kind: TargetKind, n: usize, membership: Membership, size_bound: BigCount) -> Self {
        Self {
            kind,
            n,
            membership,
            size_bound,
        }
    }

    pub fn points(kind: TargetKind, points: Vec<BitString>) -> Self {
        let n = points.first().map(BitString::len).unwrap_or(1);
        Self::new(kind, n, Membership::Points(points))
    }

    pub fn ones_count(kind: TargetKind, n: usize, counts: impl IntoIterator<Item = usize>) -> Self {
        Self::new(kind, n, Membership::OnesCount(counts.into_iter().collect()))
    }

    #[inline]
    pub fn contains(&self, x: &BitString, fitness: f64) -> bool {
        self.membership.contains(x, fitness)
    }

    /// All points within Hamming distance `d` of this set. The size bound is
    /// `size_bound * hamming_ball_size(n, d)`.
    pub fn within_distance(&self, d: usize) -> Result<TargetSet> {
        if d > self.n {
            return domain(format!("radius {d} exceeds dimension {}", self.n));
        }
        if !self.membership.supports_distance() {
            return domain("fitness-defined target sets have no Hamming neighbourhood");
        }
        let ball = hamming_ball_size(self.n, d)?;
        Ok(TargetSet {
            kind: TargetKind::WithinDistance(d),
            n: self.n,
            membership: Membership::Within {
                inner: Box::new(self.membership.clone()),
                radius: d,
            },
            size_bound: &self.size_bound * &ball,
        })
    }

    /// Exhaustively enumerates members. Only for `n <= EXHAUSTIVE_LIMIT`.
    pub fn enumerate<O: Objective + ?Sized>(&self, obj: &O) -> Result<Vec<BitString>> {
        let n = obj.dimension();
        check_exhaustive(n)?;
        Ok((0..1u64 << n)
            .map(|v| BitString::from_index(n, v))
            .filter(|x| self.contains(x, obj.evaluate(x)))
            .collect())
    }
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n > EXHAUSTIVE_LIMIT {
        Err(Error::Capacity(format!(
            "exhaustive scan of {{0,1}}^{n} exceeds the limit of {EXHAUSTIVE_LIMIT} bits"
        )))
    } else {
        Ok(())
    }
}

pub(crate) fn exhaustive_global_optima<O: Objective + ?Sized>(obj: &O) -> Result<TargetSet> {
    let n = obj.dimension();
    check_exhaustive(n)?;
    let dir = obj.direction();
    let mut best = f64::NEG_INFINITY;
    let mut points = Vec::new();
    for v in 0..1u64 << n {
        let x = BitString::from_index(n, v);
        let s = dir.score(obj.evaluate(&x));
        if s > best {
            best = s;
            points.clear();
        }
        if s == best {
            points.push(x);
        }
    }
    Ok(TargetSet::new(TargetKind::GlobalOptima, n, Membership::Points(points)))
}

/// Local optima under the Hamming-1 neighbourhood: points with no
/// neighbour of strictly better fitness. Scans the whole cube.
pub fn local_optima<O: Objective + ?Sized>(obj: &O) -> Result<TargetSet> {
    let n = obj.dimension();
    check_exhaustive(n)?;
    let dir = obj.direction();
    let fitness: Vec<f64> = (0..1u64 << n)
        .map(|v| dir.score(obj.evaluate(&BitString::from_index(n, v))))
        .collect();
    let points = (0..1u64 << n)
        .filter(|&v| {
            let f = fitness[v as usize];
            (0..n).all(|i| fitness[(v ^ (1 << i)) as usize] <= f)
        })
        .map(|v| BitString::from_index(n, v))
        .collect();
    Ok(TargetSet::new(TargetKind::LocalOptima, n, Membership::Points(points)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::OneMax;

    #[test]
    fn ones_count_distance_and_bound() {
        let t = TargetSet::ones_count(TargetKind::LocalOptima, 8, [6, 8]);
        assert_eq!(t.size_bound, BigCount::from_u64(28 + 1));
        let x: BitString = "11110000".parse().unwrap();
        assert!(!t.contains(&x, 4.0));
        let near = t.within_distance(2).unwrap();
        assert!(near.contains(&x, 4.0));
        assert!(!t.within_distance(1).unwrap().contains(&x, 4.0));
    }

    #[test]
    fn within_distance_contains_original_set() {
        let obj = OneMax::new(6);
        let base = obj.global_optima().unwrap();
        for d in 0..=3 {
            let near = base.within_distance(d).unwrap();
            let members = near.enumerate(&obj).unwrap();
            assert!(members.contains(&BitString::ones(6)));
            assert!(BigCount::from_u64(members.len() as u64) <= near.size_bound);
        }
    }

    #[test]
    fn fitness_sets_have_no_neighbourhood() {
        let t = TargetSet::new(
            TargetKind::GlobalOptima,
            4,
            Membership::FitnessReaches {
                value: 3.0,
                direction: Direction::Maximise,
            },
        );
        assert!(t.within_distance(1).is_err());
    }

    #[test]
    fn exhaustive_scan_capacity() {
        assert!(matches!(local_optima(&OneMax::new(21)), Err(Error::Capacity(_))));
    }
}
