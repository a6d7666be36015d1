use rand::Rng;

use super::{adaptive_rate, AlgoConfig, AlgorithmKind, RunRecord};
use crate::bitcore::BitString;
use crate::error::{check_dim, Error, Result};
use crate::objectives::{Direction, Objective, TargetSet};
use crate::variation::{apply, UnaryOperator};

/// State after one generation, passed to observers.
#[derive(Clone, Debug, PartialEq)]
pub struct Generation {
    pub index: u64,
    pub evaluations: u64,
    pub parent_fitness: f64,
    pub best_offspring_fitness: f64,
    /// Mutation probability used, if the operator has one.
    pub rate: Option<f64>,
}

#[derive(Clone, Copy)]
enum Rule {
    Fixed(f64),
    Adaptive,
    SingleBit,
}

/// The (1+λ) EA: λ offspring by standard mutation of the parent, the best
/// (uniform among ties) replaces the parent if at least as good.
pub fn run_one_plus_lambda<R: Rng + ?Sized>(
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    target: &TargetSet,
    rng: &mut R,
) -> Result<RunRecord> {
    run_observed(cfg, obj, target, rng, &mut |_| {})
}

/// RLS: offspring flip one uniformly chosen bit. With λ = 1 this is the
/// classic sequential algorithm.
pub fn run_rls<R: Rng + ?Sized>(
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    target: &TargetSet,
    rng: &mut R,
) -> Result<RunRecord> {
    evolve(cfg, obj, target, rng, Rule::SingleBit, &mut |_| {})
}

/// Run the EA or RLS named by `cfg.algorithm`, reporting every generation.
pub fn run_observed<R: Rng + ?Sized>(
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    target: &TargetSet,
    rng: &mut R,
    observer: &mut dyn FnMut(&Generation),
) -> Result<RunRecord> {
    let rule = match cfg.algorithm {
        AlgorithmKind::OnePlusLambdaFixed => Rule::Fixed(cfg.p.resolve(cfg.n)?),
        AlgorithmKind::OnePlusLambdaAdaptive => Rule::Adaptive,
        AlgorithmKind::Rls => Rule::SingleBit,
        AlgorithmKind::GenericParallel { .. } => {
            return Err(Error::Config(
                "generic-parallel runs go through run_generic_parallel".into(),
            ))
        }
    };
    evolve(cfg, obj, target, rng, rule, observer)
}

struct Batch {
    best: BitString,
    best_fitness: f64,
}

/// Evaluate λ points from `make`, tracking the first hit and keeping one
/// uniformly chosen point among the best.
#[allow(clippy::too_many_arguments)]
fn evaluate_batch<R: Rng + ?Sized>(
    lambda: usize,
    obj: &dyn Objective,
    target: &TargetSet,
    direction: Direction,
    evaluations: &mut u64,
    first_hit: &mut Option<u64>,
    rng: &mut R,
    make: &mut dyn FnMut(&mut R) -> Result<BitString>,
) -> Result<Batch> {
    let mut best: Option<(BitString, f64)> = None;
    let mut ties = 0u64;
    for _ in 0..lambda {
        let y = make(rng)?;
        let f = obj.evaluate(&y);
        *evaluations += 1;
        if first_hit.is_none() && target.contains(&y, f) {
            *first_hit = Some(*evaluations);
        }
        match &best {
            Some((_, bf)) if direction.strictly_better(*bf, f) => {}
            Some((_, bf)) if !direction.strictly_better(f, *bf) => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = Some((y, f));
                }
            }
            _ => {
                ties = 1;
                best = Some((y, f));
            }
        }
    }
    let (best, best_fitness) = best.expect("lambda >= 1");
    Ok(Batch { best, best_fitness })
}

fn evolve<R: Rng + ?Sized>(
    cfg: &AlgoConfig,
    obj: &dyn Objective,
    target: &TargetSet,
    rng: &mut R,
    rule: Rule,
    observer: &mut dyn FnMut(&Generation),
) -> Result<RunRecord> {
    cfg.validate()?;
    check_dim(cfg.n, obj.dimension())?;
    check_dim(cfg.n, target.n)?;
    let n = cfg.n;
    let lambda = cfg.lambda;
    let direction = obj.direction();
    let mut evaluations = 0u64;
    let mut first_hit = None;

    let init = cfg.init.clone();
    let start = evaluate_batch(
        lambda,
        obj,
        target,
        direction,
        &mut evaluations,
        &mut first_hit,
        rng,
        &mut |rng| Ok(init.clone().unwrap_or_else(|| BitString::random(n, rng))),
    )?;
    let (mut parent, mut parent_fitness) = (start.best, start.best_fitness);

    let counts_ones = obj.counts_ones();
    let p_mode = match rule {
        Rule::Fixed(_) => "fixed",
        Rule::Adaptive if counts_ones => "adaptive",
        Rule::Adaptive => "adaptive-heuristic",
        Rule::SingleBit => "single-bit",
    };

    let mut generations = 0u64;
    while first_hit.is_none() && evaluations + lambda as u64 <= cfg.budget {
        let op = match rule {
            Rule::Fixed(p) => UnaryOperator::StandardMutation { p },
            Rule::Adaptive => {
                let i = if counts_ones {
                    parent.count_zeros()
                } else {
                    (n as f64 - parent_fitness.round()).clamp(1.0, n as f64) as usize
                };
                UnaryOperator::StandardMutation {
                    p: adaptive_rate(i.max(1), n, lambda)?,
                }
            }
            Rule::SingleBit => UnaryOperator::SingleBit,
        };
        let parent_ref = &parent;
        let batch = evaluate_batch(
            lambda,
            obj,
            target,
            direction,
            &mut evaluations,
            &mut first_hit,
            rng,
            &mut |rng| apply(&op, parent_ref, rng),
        )?;
        generations += 1;
        let offspring_fitness = batch.best_fitness;
        if direction.at_least_as_good(batch.best_fitness, parent_fitness) {
            parent = batch.best;
            parent_fitness = batch.best_fitness;
        }
        observer(&Generation {
            index: generations,
            evaluations,
            parent_fitness,
            best_offspring_fitness: offspring_fitness,
            rate: match op {
                UnaryOperator::StandardMutation { p } => Some(p),
                _ => None,
            },
        });
    }

    Ok(RunRecord {
        evaluations_used: evaluations,
        generations_used: generations,
        hit_target: first_hit.is_some(),
        best_fitness: parent_fitness,
        first_hit_evaluation: first_hit,
        seed: cfg.seed,
        p_mode: p_mode.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::run;
    use crate::objectives::{LeadingOnes, OneMax, TwoMax};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn optimum(obj: &dyn Objective) -> TargetSet {
        obj.global_optima().unwrap()
    }

    #[test]
    fn forced_start_at_optimum() {
        let obj = OneMax::new(20);
        let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaFixed, 20, 8, 1000, 1).with_init(BitString::ones(20));
        let rec = run(&cfg, &obj, &optimum(&obj)).unwrap();
        assert!(rec.hit_target);
        assert_eq!(rec.generations_used, 0);
        assert_eq!(rec.evaluations_used, 8);
        assert_eq!(rec.first_hit_evaluation, Some(1));

        let rls = AlgoConfig::new(AlgorithmKind::Rls, 20, 1, 1000, 1).with_init(BitString::ones(20));
        let rec = run(&rls, &obj, &optimum(&obj)).unwrap();
        assert_eq!((rec.evaluations_used, rec.first_hit_evaluation), (1, Some(1)));
    }

    #[test]
    fn accounting_and_budget() {
        let obj = LeadingOnes::new(60);
        for (lambda, budget) in [(1, 50), (7, 100), (16, 16), (5, 1_000_000)] {
            let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaFixed, 60, lambda, budget, 9);
            let rec = run(&cfg, &obj, &optimum(&obj)).unwrap();
            assert_eq!(rec.evaluations_used, lambda as u64 * (rec.generations_used + 1));
            assert!(rec.evaluations_used <= budget);
            if rec.hit_target {
                assert!(rec.first_hit_evaluation.unwrap() <= rec.evaluations_used);
                assert_eq!(rec.best_fitness, 60.0);
            } else {
                assert!(rec.first_hit_evaluation.is_none());
                assert!(rec.evaluations_used + lambda as u64 > budget);
            }
        }
    }

    #[test]
    fn parent_fitness_never_drops() {
        let objs: Vec<Box<dyn Objective>> = vec![
            Box::new(OneMax::new(40)),
            Box::new(LeadingOnes::new(40)),
            Box::new(TwoMax::new(40)),
        ];
        for obj in &objs {
            for algorithm in [
                AlgorithmKind::OnePlusLambdaFixed,
                AlgorithmKind::OnePlusLambdaAdaptive,
                AlgorithmKind::Rls,
            ] {
                let cfg = AlgoConfig::new(algorithm, 40, 6, 20_000, 5);
                let mut rng = ChaCha8Rng::seed_from_u64(5);
                let mut last = f64::NEG_INFINITY;
                run_observed(&cfg, obj.as_ref(), &optimum(obj.as_ref()), &mut rng, &mut |g| {
                    assert!(g.parent_fitness >= last);
                    assert!(g.parent_fitness >= g.best_offspring_fitness);
                    last = g.parent_fitness;
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn rls_steps_are_unit() {
        let obj = OneMax::new(100);
        let cfg = AlgoConfig::new(AlgorithmKind::Rls, 100, 1, 100_000, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut last: Option<f64> = None;
        let rec = run_observed(&cfg, &obj, &optimum(&obj), &mut rng, &mut |g| {
            if let Some(prev) = last {
                let step = g.parent_fitness - prev;
                assert!(step == 0.0 || step == 1.0);
            }
            last = Some(g.parent_fitness);
        })
        .unwrap();
        assert!(rec.hit_target);
        assert_eq!(rec.p_mode, "single-bit");
    }

    #[test]
    fn deterministic_given_seed() {
        let obj = OneMax::new(50);
        let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaAdaptive, 50, 10, 1_000_000, 77);
        let a = run(&cfg, &obj, &optimum(&obj)).unwrap();
        let b = run(&cfg, &obj, &optimum(&obj)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.p_mode, "adaptive");
        let two = TwoMax::new(50);
        assert_eq!(run(&cfg, &two, &optimum(&two)).unwrap().p_mode, "adaptive-heuristic");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let obj = OneMax::new(10);
        let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaFixed, 12, 2, 100, 0);
        assert!(run(&cfg, &obj, &optimum(&obj)).is_err());
    }
}
