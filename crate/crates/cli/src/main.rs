//! `bbc`: run experiments, evaluate bound curves and verify the progress
//! inequalities from the command line.
//!
//! Exit status: 0 on success, 1 when a verification or check fails, 2 on
//! invalid input or I/O failure.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bbc_core::harness::{self, read_csv, run_experiment, ExperimentSpec, TargetChoice, DEFAULT_DELTA};
use bbc_core::theory::{self, BoundSpec, LemmaReport};
use bbc_core::variation::Rate;
use bbc_core::{AlgorithmKind, Error, ObjectiveSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bbc", version, about = "Parallel unbiased black-box optimisation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated experiments and print the summary as JSON.
    Run(RunArgs),
    /// Run a λ-sweep and print one table line per λ.
    Sweep(RunArgs),
    /// Check one of the progress inequalities on its grid.
    Verify(VerifyArgs),
    /// Evaluate a bound curve.
    Bounds(BoundsArgs),
    /// Compare first-hit times in a run CSV against a lower bound.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    /// (1+λ) EA with a fixed mutation rate.
    Fixed,
    /// (1+λ) EA with the fitness-dependent rate.
    Adaptive,
    /// Randomised local search.
    Rls,
    /// Best-so-far policy in the generic framework, fixed rate.
    Generic,
    /// Best-so-far policy in the generic framework, adaptive rate.
    GenericAdaptive,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment description as JSON; other flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Objective name, e.g. onemax, leadingones, jump, planted-3sat.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Extra objective parameter (jump k, cliff d, clause count m).
    #[arg(long)]
    param: Option<usize>,
    /// Seed of random instances.
    #[arg(long, default_value_t = 0)]
    instance_seed: u64,
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    /// Evaluate the complement of every offspring for free (generic only).
    #[arg(long)]
    mirrored: bool,
    /// Comma-separated λ values.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Evaluation budget per run.
    #[arg(long)]
    budget: Option<u64>,
    /// Generation budget per run.
    #[arg(long)]
    max_generations: Option<u64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed mutation rate, a number or `c/n`.
    #[arg(long)]
    p: Option<String>,
    /// `global`, `local` or `within:D`.
    #[arg(long)]
    target: Option<String>,
    /// Bound ids to evaluate next to every λ.
    #[arg(long, value_delimiter = ',')]
    bounds: Vec<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// Write per-run rows here as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: BBC_WORKERS or all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaArg {
    HypergeomTail,
    ImproveProb,
    Chvatal,
    Multibit,
    Mgf,
    MgfMax,
    Coupon,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    lemma: LemmaArg,
    #[arg(long)]
    n: usize,
    /// λ values for the moment checks.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 64, 4096])]
    lambda: Vec<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    id: String,
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    /// Print the bound description and flags as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    bound: String,
    #[arg(long, default_value_t = 1.0)]
    safety: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("bbc: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Run(args) => {
            let out = run_experiment(&build_spec(args)?)?;
            print_json(&out.summary)?;
            Ok(Outcome::Ok)
        }
        Command::Sweep(args) => {
            let out = run_experiment(&build_spec(args)?)?;
            out.summary.write_table(io::stdout().lock())?;
            Ok(Outcome::Ok)
        }
        Command::Verify(args) => {
            let report = verify(&args)?;
            print_json(&report)?;
            Ok(if report.pass { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Bounds(args) => {
            let spec = BoundSpec::lookup(&args.id)?;
            let value = spec.evaluate(args.n, args.lambda, args.delta)?;
            if args.json {
                print_json(&serde_json::json!({
                    "bound": spec,
                    "n": args.n,
                    "lambda": args.lambda,
                    "delta": args.delta,
                    "value": value,
                }))?;
            } else {
                println!("{value:.1}");
            }
            Ok(Outcome::Ok)
        }
        Command::Check(args) => {
            let rows = read_csv(&args.csv)?;
            let bound = BoundSpec::lookup(&args.bound)?;
            let report = harness::check_lower_bound(&rows, &bound, args.delta, args.safety)?;
            print_json(&report)?;
            Ok(if report.pass { Outcome::Ok } else { Outcome::Failed })
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<LemmaReport, Error> {
    let n = args.n;
    match args.lemma {
        LemmaArg::HypergeomTail => theory::verify_hypergeom_tail(n),
        LemmaArg::ImproveProb => theory::verify_improve_prob(n),
        LemmaArg::Chvatal => theory::verify_chvatal(n),
        LemmaArg::Multibit => theory::verify_multibit(n),
        LemmaArg::Mgf => theory::verify_mgf(n, &args.lambda),
        LemmaArg::MgfMax => theory::verify_mgf_max(n, &args.lambda),
        LemmaArg::Coupon => theory::verify_coupon(n),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_target(s: &str) -> Result<TargetChoice, Error> {
    match s {
        "global" => Ok(TargetChoice::GlobalOptima),
        "local" => Ok(TargetChoice::LocalOptima),
        _ => s
            .strip_prefix("within:")
            .and_then(|d| d.parse().ok())
            .map(TargetChoice::WithinDistance)
            .ok_or_else(|| usage(format!("target must be global, local or within:D, got {s:?}"))),
    }
}

fn algorithm(algo: AlgoArg, mirrored: bool) -> Result<AlgorithmKind, Error> {
    if mirrored && !matches!(algo, AlgoArg::Generic | AlgoArg::GenericAdaptive) {
        return Err(usage("--mirrored needs --algo generic or generic-adaptive"));
    }
    Ok(match algo {
        AlgoArg::Fixed => AlgorithmKind::OnePlusLambdaFixed,
        AlgoArg::Adaptive => AlgorithmKind::OnePlusLambdaAdaptive,
        AlgoArg::Rls => AlgorithmKind::Rls,
        AlgoArg::Generic => AlgorithmKind::GenericParallel {
            adaptive: false,
            mirrored,
        },
        AlgoArg::GenericAdaptive => AlgorithmKind::GenericParallel {
            adaptive: true,
            mirrored,
        },
    })
}

fn build_spec(a: RunArgs) -> Result<ExperimentSpec, Error> {
    let mut spec = match &a.spec {
        Some(path) => serde_json::from_str::<ExperimentSpec>(&fs::read_to_string(path)?)?,
        None => {
            let problem = a
                .problem
                .as_deref()
                .ok_or_else(|| usage("--problem or --spec is required"))?;
            let n = a.n.ok_or_else(|| usage("--n is required"))?;
            let algo = a.algo.ok_or_else(|| usage("--algo is required"))?;
            if a.lambda.is_empty() {
                return Err(usage("--lambda is required"));
            }
            let seed = a.seed.ok_or_else(|| usage("--seed is required"))?;
            let objective = ObjectiveSpec::from_name(problem, n, a.param, a.instance_seed)?;
            let mut spec = ExperimentSpec::new(objective, algorithm(algo, a.mirrored)?, a.lambda.clone(), seed);
            if a.budget.is_none() && a.max_generations.is_none() {
                return Err(usage("--budget or --max-generations is required"));
            }
            spec.budget = a.budget;
            spec.max_generations = a.max_generations;
            spec
        }
    };
    if a.spec.is_some() {
        if let Some(algo) = a.algo {
            spec.algorithm = algorithm(algo, a.mirrored)?;
        }
        if !a.lambda.is_empty() {
            spec.lambdas = a.lambda.clone();
        }
        if let Some(seed) = a.seed {
            spec.master_seed = seed;
        }
        if a.budget.is_some() {
            spec.budget = a.budget;
        }
        if a.max_generations.is_some() {
            spec.max_generations = a.max_generations;
        }
    }
    if let Some(r) = a.repetitions {
        spec.repetitions = r;
    }
    if let Some(p) = &a.p {
        spec.p = match p.parse::<f64>() {
            Ok(v) => Rate::Value(v),
            Err(_) => Rate::Symbolic(p.clone()),
        };
    }
    if let Some(t) = &a.target {
        spec.target = parse_target(t)?;
    }
    if !a.bounds.is_empty() {
        spec.bounds = a.bounds.clone();
    }
    if a.delta.is_some() {
        spec.delta = a.delta;
    }
    if a.out.is_some() {
        spec.output = a.out.clone();
    }
    if a.workers.is_some() {
        spec.workers = a.workers;
    }
    Ok(spec)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
