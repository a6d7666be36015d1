use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{assert_dim, Direction, Objective};
use crate::bitcore::BitString;
use crate::error::{check_dim, domain, Result};

/// Job sizes for two-machine scheduling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct PartitionInstance {
    pub sizes: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPartition {
    sizes: Vec<f64>,
}

impl TryFrom<RawPartition> for PartitionInstance {
    type Error = crate::error::Error;
    fn try_from(raw: RawPartition) -> Result<Self> {
        PartitionInstance::new(raw.sizes)
    }
}

impl PartitionInstance {
    pub fn new(sizes: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() {
            return domain("partition instance needs at least one job");
        }
        if let Some(bad) = sizes.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return domain(format!("job sizes must be positive and finite, got {bad}"));
        }
        Ok(Self { sizes })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeDistribution {
    /// Uniform on `(0, 1]`.
    Uniform,
    /// Exponential with rate 1.
    Exponential,
}

pub fn gen_partition_random(n: usize, distribution: SizeDistribution, seed: u64) -> Result<PartitionInstance> {
    if n == 0 {
        return domain("partition instance needs at least one job");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = (0..n)
        .map(|_| match distribution {
            SizeDistribution::Uniform => 1.0 - rng.random::<f64>(),
            SizeDistribution::Exponential => loop {
                let s: f64 = rng.sample(Exp1);
                if s > 0.0 {
                    break s;
                }
            },
        })
        .collect();
    PartitionInstance::new(sizes)
}

/// Load of the fuller machine; bit `i` selects the machine for job `i`.
pub fn partition_makespan(inst: &PartitionInstance, x: &BitString) -> Result<f64> {
    check_dim(inst.sizes.len(), x.len())?;
    Ok(makespan(inst, x))
}

fn makespan(inst: &PartitionInstance, x: &BitString) -> f64 {
    let (mut zero, mut one) = (0.0, 0.0);
    for (i, &s) in inst.sizes.iter().enumerate() {
        if x.get(i) {
            one += s;
        } else {
            zero += s;
        }
    }
    f64::max(zero, one)
}

#[derive(Clone, Debug)]
pub struct Partition {
    inst: PartitionInstance,
}

impl Partition {
    pub fn new(inst: PartitionInstance) -> Self {
        Self { inst }
    }

    pub fn instance(&self) -> &PartitionInstance {
        &self.inst
    }
}

impl Objective for Partition {
    fn name(&self) -> String {
        "partition".into()
    }
    fn dimension(&self) -> usize {
        self.inst.sizes.len()
    }
    fn direction(&self) -> Direction {
        Direction::Minimise
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.dimension(), x);
        makespan(&self.inst, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn makespan_examples() {
        let two = PartitionInstance::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(partition_makespan(&two, &bs("01")).unwrap(), 1.0);
        assert_eq!(partition_makespan(&two, &bs("00")).unwrap(), 2.0);
        let three = PartitionInstance::new(vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(partition_makespan(&three, &bs("100")).unwrap(), 3.0);
        assert!(partition_makespan(&three, &bs("10")).is_err());
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(PartitionInstance::new(vec![1.0, 0.0]).is_err());
        assert!(PartitionInstance::new(vec![]).is_err());
        assert!(serde_json::from_str::<PartitionInstance>(r#"{"sizes":[1.0,-2.0]}"#).is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        for dist in [SizeDistribution::Uniform, SizeDistribution::Exponential] {
            let a = gen_partition_random(50, dist, 7).unwrap();
            let b = gen_partition_random(50, dist, 7).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, gen_partition_random(50, dist, 8).unwrap());
        }
    }

    #[test]
    fn uniform_sizes_in_support_and_centred() {
        let inst = gen_partition_random(10_000, SizeDistribution::Uniform, 1).unwrap();
        assert!(inst.sizes.iter().all(|&s| s > 0.0 && s <= 1.0));
        let mean = inst.sizes.iter().sum::<f64>() / 10_000.0;
        assert!((0.45..=0.55).contains(&mean), "mean {mean}");
    }

    #[test]
    fn exponential_mean_near_one() {
        let inst = gen_partition_random(10_000, SizeDistribution::Exponential, 3).unwrap();
        let mean = inst.sizes.iter().sum::<f64>() / 10_000.0;
        // sd of the mean is 0.01
        assert!((0.95..=1.05).contains(&mean), "mean {mean}");
    }
}
