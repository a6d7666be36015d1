use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::{adaptive_rate, AlgoConfig, RunRecord};
use crate::bitcore::{complement, BitString};
use crate::error::{check_dim, Error, Result};
use crate::objectives::{Direction, Objective, TargetSet};
use crate::variation::{apply, UnaryOperator};

/// A queried point: `round` 0 is the initial batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointId {
    pub round: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proposal {
    pub parent: PointId,
    pub op: UnaryOperator,
}

/// Everything a policy may look at: the points and fitness values of the
/// completed rounds. In mirrored runs each round also holds the free
/// complements, after the λ queried points.
#[derive(Clone, Debug)]
pub struct History {
    n: usize,
    direction: Direction,
    rounds: Vec<Vec<(BitString, f64)>>,
}

impl History {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Number of completed rounds.
    pub fn rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn round(&self, t: usize) -> &[(BitString, f64)] {
        &self.rounds[t]
    }

    pub fn get(&self, id: PointId) -> Option<&(BitString, f64)> {
        self.rounds.get(id.round)?.get(id.index)
    }
}

/// Chooses the λ (parent, operator) pairs of the next round.
pub trait Policy {
    fn propose(&mut self, history: &History, lambda: usize, rng: &mut dyn RngCore) -> Vec<Proposal>;

    fn label(&self) -> String {
        "policy".into()
    }
}

#[derive(Clone, Copy, Debug)]
enum RateRule {
    Fixed(f64),
    Adaptive,
}

/// Re-mutates the current parent, which is replaced by the best point of
/// the latest round (uniform among ties) when that is at least as good.
/// This is the (1+λ) EA expressed as a policy.
#[derive(Clone, Debug)]
pub struct BestSoFarPolicy {
    rate: RateRule,
    parent: Option<(PointId, f64)>,
}

impl BestSoFarPolicy {
    pub fn fixed(p: f64) -> Self {
        Self {
            rate: RateRule::Fixed(p),
            parent: None,
        }
    }

    /// Rate from the parent's zero count.
    pub fn adaptive() -> Self {
        Self {
            rate: RateRule::Adaptive,
            parent: None,
        }
    }
}

impl Policy for BestSoFarPolicy {
    fn propose(&mut self, history: &History, lambda: usize, rng: &mut dyn RngCore) -> Vec<Proposal> {
        let t = history.rounds() - 1;
        let dir = history.direction();
        let mut best: Option<(usize, f64)> = None;
        let mut ties = 0u64;
        for (i, (_, f)) in history.round(t).iter().enumerate() {
            match best {
                Some((_, bf)) if dir.strictly_better(bf, *f) => {}
                Some((_, bf)) if !dir.strictly_better(*f, bf) => {
                    ties += 1;
                    if rng.random_range(0..ties) == 0 {
                        best = Some((i, *f));
                    }
                }
                _ => {
                    ties = 1;
                    best = Some((i, *f));
                }
            }
        }
        let (index, f) = best.expect("rounds are non-empty");
        if self.parent.is_none_or(|(_, pf)| dir.at_least_as_good(f, pf)) {
            self.parent = Some((PointId { round: t, index }, f));
        }
        let (parent, _) = self.parent.expect("set above");
        let p = match self.rate {
            RateRule::Fixed(p) => p,
            RateRule::Adaptive => {
                let zeros = history.get(parent).expect("parent is recorded").0.count_zeros();
                adaptive_rate(zeros.max(1), history.n(), lambda).expect("valid arguments")
            }
        };
        vec![
            Proposal {
                parent,
                op: UnaryOperator::StandardMutation { p },
            };
            lambda
        ]
    }

    fn label(&self) -> String {
        match self.rate {
            RateRule::Fixed(_) => "fixed".into(),
            RateRule::Adaptive => "adaptive".into(),
        }
    }
}

/// Minimum numbers of zeros and ones over all queried points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialTracker {
    pub s0: usize,
    pub s1: usize,
    /// Potential after each update.
    pub trajectory: Vec<usize>,
}

impl PotentialTracker {
    pub fn new(n: usize) -> Self {
        Self {
            s0: n,
            s1: n,
            trajectory: Vec::new(),
        }
    }

    /// `min(s0, s1)`.
    pub fn s(&self) -> usize {
        self.s0.min(self.s1)
    }

    pub fn update<'a>(&mut self, batch: impl IntoIterator<Item = &'a BitString>) {
        for x in batch {
            self.s0 = self.s0.min(x.count_zeros());
            self.s1 = self.s1.min(x.count_ones());
        }
        self.trajectory.push(self.s());
    }
}

#[derive(Clone, Debug)]
pub struct GenericRun {
    pub record: RunRecord,
    /// Present for mirrored runs.
    pub potential: Option<PotentialTracker>,
}

/// Algorithm 1: round 0 is λ uniform points (or copies of `cfg.init`), then
/// each round the policy sees only completed rounds and names λ parents and
/// unbiased operators. With `mirrored`, the complement of every query is
/// added to the history at no cost in evaluations.
pub fn run_generic_parallel<P: Policy + ?Sized, R: RngCore>(
    policy: &mut P,
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    target: &TargetSet,
    mirrored: bool,
    rng: &mut R,
) -> Result<GenericRun> {
    cfg.validate()?;
    check_dim(cfg.n, obj.dimension())?;
    check_dim(cfg.n, target.n)?;
    let (n, lambda) = (cfg.n, cfg.lambda);
    let mut history = History {
        n,
        direction: obj.direction(),
        rounds: Vec::new(),
    };
    let mut tracker = mirrored.then(|| PotentialTracker::new(n));
    let mut evaluations = 0u64;
    let mut first_hit = None;
    let mut best = None::<f64>;

    let mut points: Vec<BitString> = (0..lambda)
        .map(|_| cfg.init.clone().unwrap_or_else(|| BitString::random(n, rng)))
        .collect();
    let mut generations = 0u64;
    loop {
        let mut round = Vec::with_capacity(if mirrored { 2 * lambda } else { lambda });
        let mut twins = Vec::new();
        for y in points {
            let f = obj.evaluate(&y);
            evaluations += 1;
            let mut hit = target.contains(&y, f);
            if mirrored {
                let y_bar = complement(&y);
                let f_bar = obj.evaluate(&y_bar);
                hit |= target.contains(&y_bar, f_bar);
                twins.push((y_bar, f_bar));
            }
            if hit && first_hit.is_none() {
                first_hit = Some(evaluations);
            }
            round.push((y, f));
        }
        round.extend(twins);
        for (_, f) in &round {
            if best.is_none_or(|b| history.direction.strictly_better(*f, b)) {
                best = Some(*f);
            }
        }
        if let Some(t) = tracker.as_mut() {
            t.update(round.iter().map(|(x, _)| x));
        }
        history.rounds.push(round);

        if first_hit.is_some() || evaluations + lambda as u64 > cfg.budget {
            break;
        }
        let proposals = policy.propose(&history, lambda, rng);
        if proposals.len() != lambda {
            return Err(Error::Contract(format!(
                "policy proposed {} points, expected lambda = {lambda}",
                proposals.len()
            )));
        }
        points = proposals
            .iter()
            .map(|prop| {
                let parent = history.get(prop.parent).ok_or_else(|| {
                    Error::Contract(format!(
                        "policy referred to round {} index {}, but only {} rounds are complete",
                        prop.parent.round,
                        prop.parent.index,
                        history.rounds()
                    ))
                })?;
                apply(&prop.op, &parent.0, rng)
            })
            .collect::<Result<_>>()?;
        generations += 1;
    }

    Ok(GenericRun {
        record: RunRecord {
            evaluations_used: evaluations,
            generations_used: generations,
            hit_target: first_hit.is_some(),
            best_fitness: best.expect("at least one round"),
            first_hit_evaluation: first_hit,
            seed: cfg.seed,
            p_mode: policy.label(),
        },
        potential: tracker,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmKind;
    use crate::objectives::{LeadingOnes, OneMax};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(n: usize, lambda: usize, seed: u64) -> AlgoConfig {
        AlgoConfig::new(
            AlgorithmKind::GenericParallel {
                adaptive: false,
                mirrored: false,
            },
            n,
            lambda,
            1_000_000,
            seed,
        )
    }

    struct Peeking;
    impl Policy for Peeking {
        fn propose(&mut self, h: &History, lambda: usize, _: &mut dyn RngCore) -> Vec<Proposal> {
            let parent = PointId {
                round: h.rounds(),
                index: 0,
            };
            vec![
                Proposal {
                    parent,
                    op: UnaryOperator::SingleBit
                };
                lambda
            ]
        }
    }

    struct Short;
    impl Policy for Short {
        fn propose(&mut self, _: &History, lambda: usize, _: &mut dyn RngCore) -> Vec<Proposal> {
            vec![
                Proposal {
                    parent: PointId { round: 0, index: 0 },
                    op: UnaryOperator::SingleBit
                };
                lambda - 1
            ]
        }
    }

    #[test]
    fn contract_violations_surface() {
        let obj = OneMax::new(20);
        let target = obj.global_optima().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = run_generic_parallel(&mut Peeking, &cfg(20, 4, 0), &obj, &target, false, &mut rng);
        assert!(matches!(err, Err(Error::Contract(_))));
        let err = run_generic_parallel(&mut Short, &cfg(20, 4, 0), &obj, &target, false, &mut rng);
        assert!(matches!(err, Err(Error::Contract(_))));
    }

    #[test]
    fn mirrored_potentials_agree() {
        let obj = LeadingOnes::new(60);
        let target = obj.global_optima().unwrap();
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut policy = BestSoFarPolicy::fixed(1.0 / 60.0);
            let run = run_generic_parallel(&mut policy, &cfg(60, 5, seed), &obj, &target, true, &mut rng).unwrap();
            let t = run.potential.unwrap();
            assert_eq!(t.s0, t.s1);
            assert!(t.trajectory.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(t.trajectory.len() as u64, run.record.generations_used + 1);
            assert!(run.record.hit_target);
            assert_eq!(run.record.evaluations_used, 5 * (run.record.generations_used + 1));
        }
    }

    #[test]
    fn potential_tracker_rules() {
        let mut t = PotentialTracker::new(6);
        t.update([&"110100".parse().unwrap()]);
        assert_eq!((t.s0, t.s1, t.s()), (3, 3, 3));
        t.update([&"111110".parse().unwrap()]);
        assert_eq!((t.s0, t.s1, t.s()), (1, 3, 1));
        t.update([&BitString::ones(6)]);
        assert_eq!(t.s(), 0);
        t.update([&"010101".parse().unwrap()]);
        assert_eq!(t.trajectory, vec![3, 1, 0, 0]);
    }

    #[test]
    fn single_offspring_is_sequential() {
        let obj = OneMax::new(30);
        let target = obj.global_optima().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut policy = BestSoFarPolicy::adaptive();
        let run = run_generic_parallel(&mut policy, &cfg(30, 1, 4), &obj, &target, false, &mut rng).unwrap();
        assert!(run.record.hit_target);
        assert_eq!(run.record.evaluations_used, run.record.generations_used + 1);
        assert_eq!(run.record.p_mode, "adaptive");
    }
}
