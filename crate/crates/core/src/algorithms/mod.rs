//! The (1+λ) EA with fixed and adaptive mutation rates, RLS, and the
//! generic λ-parallel unbiased black-box framework.
//!
//! Every run starts from one batch of λ uniform points (or λ copies of a
//! forced start), which is counted in the budget. A run stops at the end of
//! the generation in which the target set is first hit, or when another
//! full generation would exceed the budget.

mod ea;
mod framework;

pub use ea::{run_observed, run_one_plus_lambda, run_rls, Generation};
pub use framework::{
    run_generic_parallel, BestSoFarPolicy, GenericRun, History, PointId, Policy, PotentialTracker, Proposal,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::error::{Error, Result};
use crate::objectives::{Objective, TargetSet};
use crate::variation::Rate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    OnePlusLambdaFixed,
    OnePlusLambdaAdaptive,
    Rls,
    /// The best-so-far policy run through the generic framework.
    GenericParallel {
        #[serde(default)]
        adaptive: bool,
        #[serde(default)]
        mirrored: bool,
    },
}

impl AlgorithmKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::OnePlusLambdaFixed => "one-plus-lambda-fixed",
            Self::OnePlusLambdaAdaptive => "one-plus-lambda-adaptive",
            Self::Rls => "rls",
            Self::GenericParallel { .. } => "generic-parallel",
        }
    }
}

fn default_rate() -> Rate {
    Rate::Symbolic("1/n".into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub algorithm: AlgorithmKind,
    pub n: usize,
    pub lambda: usize,
    /// Mutation probability of the fixed-rate variant.
    #[serde(default = "default_rate")]
    pub p: Rate,
    /// Hard cap on fitness evaluations, initial batch included.
    pub budget: u64,
    pub seed: u64,
    /// Start from λ copies of this point instead of a uniform batch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<BitString>,
}

impl AlgoConfig {
    pub fn new(algorithm: AlgorithmKind, n: usize, lambda: usize, budget: u64, seed: u64) -> Self {
        Self {
            algorithm,
            n,
            lambda,
            p: default_rate(),
            budget,
            seed,
            init: None,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Rate::Value(p);
        self
    }

    pub fn with_init(mut self, x: BitString) -> Self {
        self.init = Some(x);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.lambda == 0 {
            return Err(Error::Config("lambda must be at least 1".into()));
        }
        if self.budget < self.lambda as u64 {
            return Err(Error::Config(format!(
                "budget {} cannot cover one batch of lambda = {}",
                self.budget, self.lambda
            )));
        }
        if let Some(x) = &self.init {
            crate::error::check_dim(self.n, x.len())?;
        }
        if self.uses_fixed_rate() {
            let p = self.p.resolve(self.n)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!(
                    "fixed mutation rate must lie in (0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }

    fn uses_fixed_rate(&self) -> bool {
        matches!(
            self.algorithm,
            AlgorithmKind::OnePlusLambdaFixed | AlgorithmKind::GenericParallel { adaptive: false, .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub evaluations_used: u64,
    pub generations_used: u64,
    pub hit_target: bool,
    pub best_fitness: f64,
    pub first_hit_evaluation: Option<u64>,
    pub seed: u64,
    /// How the mutation rate was set: `fixed`, `adaptive`,
    /// `adaptive-heuristic`, `single-bit` or `policy`.
    pub p_mode: String,
}

/// `max{ln λ / (n ln(en/i)), 1/n}` for a parent with `i` zeros.
pub fn adaptive_rate(i: usize, n: usize, lambda: usize) -> Result<f64> {
    if i == 0 {
        return Err(Error::Contract(
            "adaptive rate requested for a parent with no zeros; it is already optimal".into(),
        ));
    }
    if i > n || lambda == 0 {
        return Err(Error::Domain(format!(
            "adaptive rate needs 1 <= i <= n and lambda >= 1, got i = {i}, n = {n}, lambda = {lambda}"
        )));
    }
    let n_f = n as f64;
    let p = (lambda as f64).ln() / (n_f * (std::f64::consts::E * n_f / i as f64).ln());
    Ok(p.max(1.0 / n_f))
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one run, derived from a master seed and its coordinates in an
/// experiment (λ index, repetition index, ...).
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(mix(master), |acc, &c| {
        mix(acc ^ mix(c.wrapping_add(0x9e37_79b9_7f4a_7c15)))
    })
}

/// Run `cfg` on `obj` until `target` is hit, with the RNG seeded from
/// `cfg.seed`.
pub fn run(cfg: &AlgoConfig, obj: &dyn Objective, target: &TargetSet) -> Result<RunRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.algorithm {
        AlgorithmKind::OnePlusLambdaFixed | AlgorithmKind::OnePlusLambdaAdaptive => {
            run_one_plus_lambda(cfg, obj, target, &mut rng)
        }
        AlgorithmKind::Rls => run_rls(cfg, obj, target, &mut rng),
        AlgorithmKind::GenericParallel { adaptive, mirrored } => {
            let mut policy = if adaptive {
                BestSoFarPolicy::adaptive()
            } else {
                BestSoFarPolicy::fixed(cfg.p.resolve(cfg.n)?)
            };
            Ok(run_generic_parallel(&mut policy, cfg, obj, target, mirrored, &mut rng)?.record)
        }
    }
}
