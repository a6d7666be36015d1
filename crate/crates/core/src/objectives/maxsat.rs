//! MAX-SAT landscapes: the hard instance with `(x_i ∨ ¬x_j ∨ ¬x_k)` clauses
//! plus unit clauses, and random planted 3-SAT.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{assert_dim, Direction, Membership, Objective, TargetKind, TargetSet};
use crate::bitcore::BitString;
use crate::error::{check_dim, domain, Result};

/// Default probability of a clause with exactly one literal agreeing with
/// the planted assignment.
pub const DEFAULT_C1: f64 = 3.0 / 7.0;
/// Default probability of a clause whose three literals all agree.
pub const DEFAULT_C3: f64 = 1.0 / 7.0;

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Satisfied clauses of the hard instance, from the number of ones alone:
/// `n C(n-1, 2) - z C(l, 2) + l` with `l` ones and `z` zeros.
pub fn maxsat_hard(x: &BitString) -> Result<f64> {
    let n = x.len();
    if n < 3 {
        return domain(format!("hard MAX-SAT instance needs n >= 3, got {n}"));
    }
    let l = x.count_ones() as u64;
    let z = n as u64 - l;
    let n = n as u64;
    Ok((n * choose2(n - 1) - z * choose2(l) + l) as f64)
}

/// The same count by walking every clause.
pub fn maxsat_hard_enum(x: &BitString) -> Result<f64> {
    let n = x.len();
    if n < 3 {
        return domain(format!("hard MAX-SAT instance needs n >= 3, got {n}"));
    }
    let mut sat = 0u64;
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                if j == i || k == i {
                    continue;
                }
                if x.get(i) || !x.get(j) || !x.get(k) {
                    sat += 1;
                }
            }
        }
        if x.get(i) {
            sat += 1;
        }
    }
    Ok(sat as f64)
}

#[derive(Clone, Debug)]
pub struct MaxSatHard {
    n: usize,
}

impl MaxSatHard {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return domain(format!("hard MAX-SAT instance needs n >= 3, got {n}"));
        }
        Ok(Self { n })
    }
}

impl Objective for MaxSatHard {
    fn name(&self) -> String {
        "maxsat-hard".into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        maxsat_hard(x).expect("n checked at construction")
    }
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::points(
            TargetKind::GlobalOptima,
            vec![BitString::ones(self.n)],
        ))
    }
    /// The `n` strings with a single one-bit, and the optimum.
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        Some(TargetSet::ones_count(TargetKind::LocalOptima, self.n, [1, self.n]))
    }
}

/// A 3-CNF formula. Literals are 1-based signed variable indices: `+v` is
/// `x_{v-1}`, `-v` its negation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSat")]
pub struct SatInstance {
    pub n: usize,
    pub clauses: Vec<[i64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<BitString>,
}

#[derive(Deserialize)]
struct RawSat {
    n: usize,
    clauses: Vec<[i64; 3]>,
    #[serde(default)]
    planted: Option<BitString>,
}

impl TryFrom<RawSat> for SatInstance {
    type Error = crate::error::Error;
    fn try_from(raw: RawSat) -> Result<Self> {
        SatInstance::new(raw.n, raw.clauses, raw.planted)
    }
}

#[inline]
fn literal_true(lit: i64, x: &BitString) -> bool {
    let bit = x.get(lit.unsigned_abs() as usize - 1);
    if lit > 0 {
        bit
    } else {
        !bit
    }
}

#[inline]
fn clause_true(clause: &[i64; 3], x: &BitString) -> bool {
    clause.iter().any(|&l| literal_true(l, x))
}

impl SatInstance {
    pub fn new(n: usize, clauses: Vec<[i64; 3]>, planted: Option<BitString>) -> Result<Self> {
        if n < 3 {
            return domain(format!("3-SAT needs at least 3 variables, got {n}"));
        }
        for c in &clauses {
            let vars: BTreeSet<u64> = c.iter().map(|l| l.unsigned_abs()).collect();
            if vars.len() != 3 || vars.iter().any(|&v| v == 0 || v as usize > n) {
                return domain(format!("clause {c:?} needs three distinct variables in 1..={n}"));
            }
        }
        if let Some(p) = &planted {
            check_dim(n, p.len())?;
            if let Some(c) = clauses.iter().find(|c| !clause_true(c, p)) {
                return domain(format!("planted assignment violates clause {c:?}"));
            }
        }
        Ok(Self { n, clauses, planted })
    }
}

pub fn sat_count(inst: &SatInstance, x: &BitString) -> Result<f64> {
    check_dim(inst.n, x.len())?;
    Ok(count(inst, x) as f64)
}

fn count(inst: &SatInstance, x: &BitString) -> usize {
    inst.clauses.iter().filter(|c| clause_true(c, x)).count()
}

/// Random planted 3-SAT. Each clause independently gets one agreeing
/// literal with probability `c1`, three with probability `c3`, two
/// otherwise; the agreeing positions are chosen uniformly among the three
/// slots and the variables uniformly without replacement.
pub fn gen_planted_3sat(n: usize, m: usize, c1: f64, c3: f64, seed: u64) -> Result<SatInstance> {
    if !(c1 >= 0.0 && c3 >= 0.0 && c1 + c3 <= 1.0) {
        return domain(format!("clause-type probabilities c1 = {c1}, c3 = {c3} are invalid"));
    }
    if m == 0 {
        return domain("planted 3-SAT needs at least one clause");
    }
    if n < 3 {
        return domain(format!("3-SAT needs at least 3 variables, got {n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted = BitString::random(n, &mut rng);
    let clauses = (0..m)
        .map(|_| {
            let u: f64 = rng.random();
            let matching = if u < c1 {
                1
            } else if u < c1 + c3 {
                3
            } else {
                2
            };
            let agree = index::sample(&mut rng, 3, matching);
            let mut agrees = [false; 3];
            agree.iter().for_each(|slot| agrees[slot] = true);
            let vars = index::sample(&mut rng, n, 3);
            let mut clause = [0i64; 3];
            for (slot, v) in vars.iter().enumerate() {
                let positive = planted.get(v) == agrees[slot];
                let lit = v as i64 + 1;
                clause[slot] = if positive { lit } else { -lit };
            }
            clause
        })
        .collect();
    SatInstance::new(n, clauses, Some(planted))
}

#[derive(Clone, Debug)]
pub struct PlantedSat {
    inst: SatInstance,
}

impl PlantedSat {
    pub fn new(inst: SatInstance) -> Self {
        Self { inst }
    }

    pub fn instance(&self) -> &SatInstance {
        &self.inst
    }
}

impl Objective for PlantedSat {
    fn name(&self) -> String {
        "planted-3sat".into()
    }
    fn dimension(&self) -> usize {
        self.inst.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.inst.n, x);
        count(&self.inst, x) as f64
    }
    /// Every assignment satisfying all clauses.
    fn global_optima(&self) -> Result<TargetSet> {
        Ok(TargetSet::new(
            TargetKind::GlobalOptima,
            self.inst.n,
            Membership::FitnessReaches {
                value: self.inst.clauses.len() as f64,
                direction: Direction::Maximise,
            },
        ))
    }
}
