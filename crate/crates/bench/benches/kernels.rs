use std::hint::black_box;

use bbc_core::algorithms::{run, AlgoConfig, AlgorithmKind};
use bbc_core::objectives::OneMax;
use bbc_core::theory::{delta0_pmf, delta0_pmf_exact, ProgressParams};
use bbc_core::variation::apply;
use bbc_core::{BitString, Objective, UnaryOperator};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mutation(c: &mut Criterion) {
    let mut group = c.benchmark_group("mutation");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [100usize, 1000, 10_000] {
        let x = BitString::random(n, &mut rng);
        let standard = UnaryOperator::StandardMutation { p: 1.0 / n as f64 };
        group.bench_with_input(BenchmarkId::new("standard", n), &x, |b, x| {
            b.iter(|| apply(&standard, black_box(x), &mut rng).unwrap())
        });
        let sphere = UnaryOperator::FlipExact { r: n / 10 };
        group.bench_with_input(BenchmarkId::new("flip-exact-n/10", n), &x, |b, x| {
            b.iter(|| apply(&sphere, black_box(x), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn progress_pmf(c: &mut Criterion) {
    let mut group = c.benchmark_group("progress-pmf");
    for n in [128usize, 1 << 20] {
        let p = ProgressParams::new(n, 2, n / 16, n / 4).unwrap();
        group.bench_with_input(BenchmarkId::new("log-space", n), &p, |b, p| {
            b.iter(|| delta0_pmf(black_box(p)).unwrap())
        });
    }
    let p = ProgressParams::new(128, 2, 8, 32).unwrap();
    group.bench_function("rational-128", |b| b.iter(|| delta0_pmf_exact(black_box(&p)).unwrap()));
    group.finish();
}

fn one_plus_lambda(c: &mut Criterion) {
    let mut group = c.benchmark_group("one-plus-lambda");
    group.sample_size(20);
    let obj = OneMax::new(200);
    let target = obj.global_optima().unwrap();
    for lambda in [1usize, 16, 128] {
        group.bench_with_input(BenchmarkId::new("onemax-200", lambda), &lambda, |b, &lambda| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                let cfg = AlgoConfig::new(AlgorithmKind::OnePlusLambdaAdaptive, 200, lambda, 10_000_000, seed);
                run(&cfg, &obj, &target).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, mutation, progress_pmf, one_plus_lambda);
criterion_main!(benches);
