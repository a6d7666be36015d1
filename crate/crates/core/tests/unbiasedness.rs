use std::collections::BTreeMap;

use bbc_core::bitcore::binomial;
use bbc_core::stats::chi_square_uniform;
use bbc_core::variation::{apply, exact_distribution};
use bbc_core::{BitString, UnaryOperator};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_points(n: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << n).map(move |v| BitString::from_index(n, v))
}

#[test]
fn flip_exact_is_uniform_on_the_sphere() {
    let n = 8;
    let x = BitString::from_index(n, 0b1011_0010);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in 1..=3 {
        let mut counts: BTreeMap<BitString, u64> = BTreeMap::new();
        for _ in 0..200_000 {
            let y = apply(&UnaryOperator::FlipExact { r }, &x, &mut rng).unwrap();
            *counts.entry(y).or_default() += 1;
        }
        let expected = binomial(n, r).to_string().parse::<usize>().unwrap();
        assert_eq!(counts.len(), expected);
        let (_, p) = chi_square_uniform(&counts.values().copied().collect::<Vec<_>>()).unwrap();
        assert!(p > 1e-3, "r = {r}: p = {p}");
    }
}

#[test]
fn conjugation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ops = [
        UnaryOperator::FlipExact { r: 2 },
        UnaryOperator::StandardMutation { p: 0.3 },
        UnaryOperator::SingleBit,
        UnaryOperator::Complement,
    ];
    for n in 1..=5 {
        for op in &ops {
            if op.validate(n).is_err() {
                continue;
            }
            for _ in 0..4 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let mask = BitString::random(n, &mut rng);
                let g = |y: &BitString| y.permute(&perm).unwrap().xor(&mask).unwrap();
                for x in all_points(n) {
                    let direct = exact_distribution(op, &g(&x)).unwrap();
                    let mapped: BTreeMap<BitString, f64> = exact_distribution(op, &x)
                        .unwrap()
                        .iter()
                        .map(|(y, p)| (g(y), *p))
                        .collect();
                    assert_eq!(direct.len(), mapped.len());
                    for (y, p) in &direct {
                        assert!((p - mapped[y]).abs() < 1e-15, "{op:?} n = {n}");
                    }
                }
            }
        }
    }
}
