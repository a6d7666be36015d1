//! Experiment runner: λ-sweeps over repeated runs, CSV records, summaries
//! with bound overlays, and empirical lower-bound checks.
//!
//! Run `k` of λ index `i` is seeded with `derive_seed(master_seed, [i, k])`,
//! so two experiments with the same master seed and λ list see the same
//! seeds, and results do not depend on the worker count.

mod check;
mod records;

pub use check::{check_lower_bound, LowerBoundReport, LowerBoundViolation};
pub use records::{read_csv, read_rows, write_csv, write_rows, CsvRow, CSV_COLUMNS};

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{self, derive_seed, AlgoConfig, AlgorithmKind};
use crate::error::{Error, Result};
use crate::objectives::{local_optima, Objective, ObjectiveSpec, TargetSet};
use crate::stats::{spearman, Summary};
use crate::theory::BoundSpec;
use crate::variation::Rate;

/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "BBC_WORKERS";

/// Default `δ` for bound overlays.
pub const DEFAULT_DELTA: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetChoice {
    #[default]
    GlobalOptima,
    LocalOptima,
    /// Points within this Hamming distance of a global optimum.
    WithinDistance(usize),
}

impl TargetChoice {
    pub fn resolve(self, obj: &dyn Objective) -> Result<TargetSet> {
        match self {
            Self::GlobalOptima => obj.global_optima(),
            Self::LocalOptima => match obj.local_optima_closed_form() {
                Some(t) => Ok(t),
                None => local_optima(obj),
            },
            Self::WithinDistance(d) => obj.global_optima()?.within_distance(d),
        }
    }
}

fn default_rate() -> Rate {
    Rate::Symbolic("1/n".into())
}

fn default_repetitions() -> usize {
    1
}

/// A λ-sweep: `repetitions` runs of `algorithm` on `objective` for every
/// λ in `lambdas`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub objective: ObjectiveSpec,
    pub algorithm: AlgorithmKind,
    #[serde(default = "default_rate")]
    pub p: Rate,
    pub lambdas: Vec<usize>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Evaluation budget per run, initial batch included.
    #[serde(default)]
    pub budget: Option<u64>,
    /// Generation budget per run after the initial batch; combined with
    /// `budget` by taking the smaller.
    #[serde(default)]
    pub max_generations: Option<u64>,
    pub master_seed: u64,
    #[serde(default)]
    pub target: TargetChoice,
    /// Bound ids evaluated next to every λ row.
    #[serde(default)]
    pub bounds: Vec<String>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(objective: ObjectiveSpec, algorithm: AlgorithmKind, lambdas: Vec<usize>, master_seed: u64) -> Self {
        Self {
            objective,
            algorithm,
            p: default_rate(),
            lambdas,
            repetitions: 1,
            budget: None,
            max_generations: None,
            master_seed,
            target: TargetChoice::default(),
            bounds: Vec::new(),
            delta: None,
            output: None,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.lambdas.is_empty() || self.lambdas.contains(&0) {
            return Err(Error::Config(
                "lambda list must be non-empty with every lambda >= 1".into(),
            ));
        }
        if self.budget.is_none() && self.max_generations.is_none() {
            return Err(Error::Config("set budget or max_generations".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        for id in &self.bounds {
            BoundSpec::lookup(id)?;
        }
        Ok(())
    }

    /// Evaluation budget of one run at `lambda`.
    pub fn budget_for(&self, lambda: usize) -> u64 {
        let by_generations = self
            .max_generations
            .map(|g| (lambda as u64).saturating_mul(g.saturating_add(1)));
        match (self.budget, by_generations) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => u64::MAX,
        }
    }
}

/// Statistics of all runs at one λ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaStats {
    pub lambda: usize,
    pub runs: usize,
    pub evaluations: Summary,
    pub generations: Summary,
    pub hit_rate: f64,
    /// Bound values at `(n, λ, δ)`; ids whose domain excludes the point
    /// are omitted.
    pub bounds: BTreeMap<String, f64>,
    /// Mean evaluations divided by each bound value.
    pub ratios: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub problem: String,
    pub algo: String,
    pub n: usize,
    pub master_seed: u64,
    pub repetitions: usize,
    pub delta: f64,
    pub per_lambda: Vec<LambdaStats>,
    /// Spearman correlation of mean generations with λ, when defined.
    pub generations_spearman: Option<f64>,
}

impl SweepSummary {
    /// Plot-ready table: one line per λ.
    pub fn write_table<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let ids: BTreeSet<&String> = self.per_lambda.iter().flat_map(|s| s.bounds.keys()).collect();
        let mut header: Vec<String> = [
            "lambda",
            "runs",
            "hit_rate",
            "mean_evaluations",
            "median_evaluations",
            "min_evaluations",
            "max_evaluations",
            "mean_generations",
            "median_generations",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        for id in &ids {
            header.push(format!("bound_{id}"));
            header.push(format!("ratio_{id}"));
        }
        w.write_record(&header)?;
        for s in &self.per_lambda {
            let mut rec = vec![
                s.lambda.to_string(),
                s.runs.to_string(),
                s.hit_rate.to_string(),
                s.evaluations.mean.to_string(),
                s.evaluations.median.to_string(),
                s.evaluations.min.to_string(),
                s.evaluations.max.to_string(),
                s.generations.mean.to_string(),
                s.generations.median.to_string(),
            ];
            for id in &ids {
                let get = |m: &BTreeMap<String, f64>| m.get(*id).map_or(String::new(), f64::to_string);
                rec.push(get(&s.bounds));
                rec.push(get(&s.ratios));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub summary: SweepSummary,
    pub rows: Vec<CsvRow>,
}

/// Worker count: the explicit value, else `BBC_WORKERS`, else rayon's
/// default.
pub fn worker_count(explicit: Option<usize>) -> Option<usize> {
    explicit.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&k: &usize| k > 0)
    })
}

/// Run every (λ, repetition) pair and summarise. Writes the CSV to
/// `spec.output` when set.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let obj = spec.objective.build()?;
    let n = obj.dimension();
    let target = spec.target.resolve(obj.as_ref())?;
    let jobs: Vec<(usize, usize)> = (0..spec.lambdas.len())
        .flat_map(|i| (0..spec.repetitions).map(move |k| (i, k)))
        .collect();
    let configs: Vec<AlgoConfig> = jobs
        .iter()
        .map(|&(i, k)| {
            let lambda = spec.lambdas[i];
            let seed = derive_seed(spec.master_seed, &[i as u64, k as u64]);
            let mut cfg = AlgoConfig::new(spec.algorithm.clone(), n, lambda, spec.budget_for(lambda), seed);
            cfg.p = spec.p.clone();
            cfg.validate()?;
            Ok(cfg)
        })
        .collect::<Result<_>>()?;

    let work = || {
        configs
            .par_iter()
            .map(|cfg| algorithms::run(cfg, obj.as_ref(), &target))
            .collect::<Result<Vec<_>>>()
    };
    let records = match worker_count(spec.workers) {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let problem = obj.name();
    let algo = spec.algorithm.label().to_string();
    let rows: Vec<CsvRow> = records
        .into_iter()
        .zip(&configs)
        .enumerate()
        .map(|(id, (rec, cfg))| CsvRow {
            run_id: id as u64,
            problem: problem.clone(),
            n,
            lambda: cfg.lambda,
            algo: algo.clone(),
            p_mode: rec.p_mode,
            seed: rec.seed,
            evaluations: rec.evaluations_used,
            generations: rec.generations_used,
            hit_target: rec.hit_target,
            first_hit_evaluation: rec.first_hit_evaluation,
            best_fitness: rec.best_fitness,
        })
        .collect();

    let summary = summarise(spec, &problem, &algo, n, &rows)?;
    if let Some(path) = &spec.output {
        write_csv(path, &rows)?;
    }
    Ok(ExperimentOutput { summary, rows })
}

fn summarise(spec: &ExperimentSpec, problem: &str, algo: &str, n: usize, rows: &[CsvRow]) -> Result<SweepSummary> {
    let delta = spec.delta.unwrap_or(DEFAULT_DELTA);
    let bounds: Vec<BoundSpec> = spec
        .bounds
        .iter()
        .map(|id| BoundSpec::lookup(id))
        .collect::<Result<_>>()?;
    let per_lambda = rows
        .chunks(spec.repetitions)
        .map(|chunk| {
            let lambda = chunk[0].lambda;
            let evals: Vec<f64> = chunk.iter().map(|r| r.evaluations as f64).collect();
            let gens: Vec<f64> = chunk.iter().map(|r| r.generations as f64).collect();
            let evaluations = Summary::of(&evals)?;
            let mut values = BTreeMap::new();
            let mut ratios = BTreeMap::new();
            for b in &bounds {
                if let Ok(v) = b.evaluate(n as f64, lambda as f64, delta) {
                    values.insert(b.id.clone(), v);
                    ratios.insert(b.id.clone(), evaluations.mean / v);
                }
            }
            Ok(LambdaStats {
                lambda,
                runs: chunk.len(),
                evaluations,
                generations: Summary::of(&gens)?,
                hit_rate: chunk.iter().filter(|r| r.hit_target).count() as f64 / chunk.len() as f64,
                bounds: values,
                ratios,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = per_lambda.iter().map(|s| s.lambda as f64).collect();
    let gens: Vec<f64> = per_lambda.iter().map(|s| s.generations.mean).collect();
    let generations_spearman = spearman(&lambdas, &gens).ok().filter(|r| r.is_finite());
    Ok(SweepSummary {
        problem: problem.into(),
        algo: algo.into(),
        n,
        master_seed: spec.master_seed,
        repetitions: spec.repetitions,
        delta,
        per_lambda,
        generations_spearman,
    })
}

/// [`run_experiment`] keeping only the per-λ summary.
pub fn sweep_cutoff(spec: &ExperimentSpec) -> Result<SweepSummary> {
    Ok(run_experiment(spec)?.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn onemax_spec(n: usize, lambdas: Vec<usize>) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(
            ObjectiveSpec::Onemax { n },
            AlgorithmKind::OnePlusLambdaFixed,
            lambdas,
            7,
        );
        spec.repetitions = 4;
        spec.budget = Some(100_000);
        spec
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let mut spec = onemax_spec(30, vec![1, 4, 16]);
        spec.workers = Some(1);
        let a = run_experiment(&spec).unwrap();
        spec.workers = Some(3);
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a, b);
        let mut x = Vec::new();
        let mut y = Vec::new();
        write_rows(&mut x, &a.rows).unwrap();
        write_rows(&mut y, &b.rows).unwrap();
        assert_eq!(x, y);
        assert_eq!(a.rows.len(), 12);
        assert!(a.rows.iter().all(|r| r.hit_target && r.first_hit_evaluation.is_some()));
    }

    #[test]
    fn initial_batch_only() {
        let mut spec = onemax_spec(10, vec![1024]);
        spec.budget = None;
        spec.max_generations = Some(0);
        spec.repetitions = 200;
        let out = run_experiment(&spec).unwrap();
        let rate = out.summary.per_lambda[0].hit_rate;
        // 1 - (1 - 2^-10)^1024 ≈ 0.632
        assert!((rate - 0.632).abs() < 0.12, "{rate}");
        for r in &out.rows {
            assert_eq!(r.evaluations, 1024);
            assert_eq!(r.hit_target, r.first_hit_evaluation.is_some());
        }
    }

    #[test]
    fn summary_and_bounds() {
        let mut spec = onemax_spec(40, vec![1, 2, 8, 32]);
        spec.algorithm = AlgorithmKind::OnePlusLambdaAdaptive;
        spec.bounds = vec!["lb-unique".into(), "adaptive-ub".into()];
        let s = sweep_cutoff(&spec).unwrap();
        for l in &s.per_lambda {
            assert!(l.evaluations.min <= l.evaluations.median && l.evaluations.median <= l.evaluations.max);
            assert!((0.0..=1.0).contains(&l.hit_rate));
            assert!(l.bounds.contains_key("lb-unique"));
            assert_eq!(l.bounds.contains_key("adaptive-ub"), l.lambda >= 2);
        }
        assert!(s.generations_spearman.unwrap() < 0.0);
        let mut table = Vec::new();
        s.write_table(&mut table).unwrap();
        let text = String::from_utf8(table).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("lambda,runs,hit_rate"));
    }

    #[test]
    fn lambda_one_matches_sequential_run() {
        let spec = onemax_spec(25, vec![1]);
        let out = run_experiment(&spec).unwrap();
        for (k, row) in out.rows.iter().enumerate() {
            let seed = derive_seed(7, &[0, k as u64]);
            let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaFixed, 25, 1, 100_000, seed);
            let obj = spec.objective.build().unwrap();
            let rec = algorithms::run(&cfg, obj.as_ref(), &obj.global_optima().unwrap()).unwrap();
            assert_eq!(row.evaluations, rec.evaluations_used);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut spec = onemax_spec(10, vec![1]);
        spec.repetitions = 0;
        assert!(matches!(run_experiment(&spec), Err(Error::Config(_))));
        let mut spec = onemax_spec(10, vec![0]);
        assert!(run_experiment(&spec).is_err());
        spec.lambdas = vec![1];
        spec.bounds = vec!["nope".into()];
        assert!(run_experiment(&spec).is_err());
        let json = r#"{"objective":{"name":"nope","n":3},"algorithm":"rls","lambdas":[1],"budget":10,"master_seed":1}"#;
        assert!(serde_json::from_str::<ExperimentSpec>(json).is_err());
    }

    #[test]
    fn json_spec() {
        let json = r#"{
            "objective": {"name": "leadingones", "n": 20},
            "algorithm": {"generic-parallel": {"mirrored": true}},
            "lambdas": [1, 4],
            "repetitions": 2,
            "max_generations": 5000,
            "master_seed": 3,
            "target": {"within-distance": 1}
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.budget_for(4), 20_004);
        let out = run_experiment(&spec).unwrap();
        assert_eq!(out.rows.len(), 4);
        assert!(out.rows.iter().all(|r| r.hit_target));
        let back: ExperimentSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
