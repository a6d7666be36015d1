use serde::{Deserialize, Serialize};

use super::{assert_dim, Objective, TargetKind, TargetSet};
use crate::bitcore::BitString;
use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKnapsack")]
pub struct KnapsackInstance {
    pub weights: Vec<u64>,
    pub values: Vec<u64>,
    pub capacity: u64,
}

#[derive(Deserialize)]
struct RawKnapsack {
    weights: Vec<u64>,
    values: Vec<u64>,
    capacity: u64,
}

impl TryFrom<RawKnapsack> for KnapsackInstance {
    type Error = crate::error::Error;
    fn try_from(raw: RawKnapsack) -> Result<Self> {
        KnapsackInstance::new(raw.weights, raw.values, raw.capacity)
    }
}

impl KnapsackInstance {
    pub fn new(weights: Vec<u64>, values: Vec<u64>, capacity: u64) -> Result<Self> {
        if weights.is_empty() || weights.len() != values.len() {
            return domain(format!(
                "knapsack needs matching non-empty weight/value lists, got {} and {}",
                weights.len(),
                values.len()
            ));
        }
        if capacity == 0 {
            return domain("knapsack capacity must be positive");
        }
        if weights.iter().chain(&values).any(|&v| v == 0) {
            return domain("knapsack weights and values must be positive");
        }
        Ok(Self {
            weights,
            values,
            capacity,
        })
    }
}

/// 0/1 knapsack. Feasible selections score their total value; overweight
/// selections score `capacity - weight`, which is negative.
#[derive(Clone, Debug)]
pub struct Knapsack {
    inst: KnapsackInstance,
    hard: bool,
}

impl Knapsack {
    pub fn new(inst: KnapsackInstance) -> Self {
        Self { inst, hard: false }
    }

    pub fn instance(&self) -> &KnapsackInstance {
        &self.inst
    }
}

/// `(n+1)/2` small objects of weight and value `n` followed by `(n-1)/2` big
/// objects of weight and value `n+1`, with capacity `n(n+1)/2`.
pub fn knapsack_hard(n: usize) -> Result<Knapsack> {
    if n < 3 || n % 2 == 0 {
        return domain(format!("hard knapsack needs an odd n >= 3, got {n}"));
    }
    let small = n.div_ceil(2);
    let big = (n - 1) / 2;
    let n64 = n as u64;
    let weights: Vec<u64> = std::iter::repeat_n(n64, small)
        .chain(std::iter::repeat_n(n64 + 1, big))
        .collect();
    let inst = KnapsackInstance::new(weights.clone(), weights, small as u64 * n64)?;
    Ok(Knapsack { inst, hard: true })
}

impl Objective for Knapsack {
    fn name(&self) -> String {
        if self.hard { "knapsack-hard" } else { "knapsack" }.into()
    }
    fn dimension(&self) -> usize {
        self.inst.weights.len()
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.dimension(), x);
        let (mut weight, mut value) = (0u64, 0u64);
        for i in 0..x.len() {
            if x.get(i) {
                weight += self.inst.weights[i];
                value += self.inst.values[i];
            }
        }
        if weight <= self.inst.capacity {
            value as f64
        } else {
            self.inst.capacity as f64 - weight as f64
        }
    }
    fn global_optima(&self) -> Result<TargetSet> {
        if self.hard {
            let n = self.dimension();
            let small: Vec<usize> = (0..n.div_ceil(2)).collect();
            Ok(TargetSet::points(
                TargetKind::GlobalOptima,
                vec![BitString::with_ones(n, &small)],
            ))
        } else {
            super::target::exhaustive_global_optima(self)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_instance_examples() {
        let k = knapsack_hard(5).unwrap();
        assert_eq!(k.instance().capacity, 15);
        let all_small = BitString::with_ones(5, &[0, 1, 2]);
        assert_eq!(k.evaluate(&all_small), 15.0);
        assert_eq!(k.evaluate(&BitString::zeros(5)), 0.0);
        assert_eq!(k.evaluate(&BitString::ones(5)), -12.0);
        assert!(knapsack_hard(6).is_err());
    }

    #[test]
    fn hard_optimum_is_unique() {
        for n in [3, 5, 7, 9, 11] {
            let k = knapsack_hard(n).unwrap();
            let scan = super::super::target::exhaustive_global_optima(&k).unwrap();
            assert_eq!(
                scan.enumerate(&k).unwrap(),
                k.global_optima().unwrap().enumerate(&k).unwrap()
            );
            let opt = k.global_optima().unwrap().enumerate(&k).unwrap();
            assert_eq!(k.evaluate(&opt[0]), (n * (n + 1) / 2) as f64);
        }
    }
}
