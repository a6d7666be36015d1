//! Fitness functions and instance classes, with target-set predicates.
//!
//! Every objective implements [`Objective`]. The free functions
//! (`onemax`, `hiff`, `bichromatic_edges`, ...) are the raw fitness maps;
//! the structs bind them to a dimension and instance data.

mod graph;
mod knapsack;
mod maxsat;
mod partition;
mod peaks;
mod poly;
mod pseudo_boolean;
mod spec;
mod target;

pub use graph::{bichromatic_edges, gen_two_cliques, Bichromatic, GraphInstance, MinCut};
pub use knapsack::{knapsack_hard, Knapsack, KnapsackInstance};
pub use maxsat::{
    gen_planted_3sat, maxsat_hard, maxsat_hard_enum, sat_count, MaxSatHard, PlantedSat, SatInstance, DEFAULT_C1,
    DEFAULT_C3,
};
pub use partition::{gen_partition_random, partition_makespan, Partition, PartitionInstance, SizeDistribution};
pub use peaks::{nearest_peak, weighted_nearest_peak, NearestPeak, PeakSpec};
pub use poly::{monotone_poly, Monomial, MonotonePolynomial};
pub use pseudo_boolean::{
    cliff_d, hiff, jump_k, leadingones, leadingzeros, onemax, twomax, twomax_prime, Cliff, Hiff, Jump, LeadingOnes,
    LeadingZeros, OneMax, TwoMax,
};
pub use spec::ObjectiveSpec;
pub use target::{local_optima, Membership, TargetKind, TargetSet, EXHAUSTIVE_LIMIT};

use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::error::{check_dim, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximise,
    Minimise,
}

impl Direction {
    /// Maps a fitness to a value where larger is always better.
    #[inline]
    pub fn score(self, fitness: f64) -> f64 {
        match self {
            Direction::Maximise => fitness,
            Direction::Minimise => -fitness,
        }
    }

    #[inline]
    pub fn strictly_better(self, a: f64, b: f64) -> bool {
        self.score(a) > self.score(b)
    }

    #[inline]
    pub fn at_least_as_good(self, a: f64, b: f64) -> bool {
        self.score(a) >= self.score(b)
    }
}

/// A deterministic pseudo-Boolean fitness function on `{0,1}^n`.
pub trait Objective: Send + Sync {
    fn name(&self) -> String;

    fn dimension(&self) -> usize;

    fn direction(&self) -> Direction {
        Direction::Maximise
    }

    /// Fitness of `x`. Panics if `x.len() != self.dimension()`; use
    /// [`Objective::try_evaluate`] for checked evaluation.
    fn evaluate(&self, x: &BitString) -> f64;

    fn try_evaluate(&self, x: &BitString) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.evaluate(x))
    }

    /// The set of global optima. The default scans the whole cube, so it is
    /// only available up to [`EXHAUSTIVE_LIMIT`] bits.
    fn global_optima(&self) -> Result<TargetSet> {
        target::exhaustive_global_optima(self)
    }

    /// Closed-form local optima under the Hamming-1 neighbourhood, when the
    /// instance has a known characterisation.
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        None
    }

    /// True when the fitness equals the number of one-bits, so that
    /// `n - fitness` is exactly the number of zeros.
    fn counts_ones(&self) -> bool {
        false
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn direction(&self) -> Direction {
        (**self).direction()
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        (**self).evaluate(x)
    }
    fn global_optima(&self) -> Result<TargetSet> {
        (**self).global_optima()
    }
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        (**self).local_optima_closed_form()
    }
    fn counts_ones(&self) -> bool {
        (**self).counts_ones()
    }
}

#[inline]
pub(crate) fn assert_dim(expected: usize, x: &BitString) {
    assert_eq!(
        x.len(),
        expected,
        "bit string of length {} passed to objective of dimension {expected}",
        x.len()
    );
}
