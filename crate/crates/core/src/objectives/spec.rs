use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};

/// JSON descriptor for an objective: a `name` tag plus instance parameters.
///
/// ```json
/// {"name": "jump", "n": 100, "k": 3}
/// {"name": "planted-3sat", "n": 100, "m": 4000, "seed": 9}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ObjectiveSpec {
    Onemax {
        n: usize,
    },
    Leadingones {
        n: usize,
    },
    Leadingzeros {
        n: usize,
    },
    Twomax {
        n: usize,
    },
    TwomaxPrime {
        n: usize,
    },
    Hiff {
        n: usize,
    },
    Jump {
        n: usize,
        k: usize,
    },
    Cliff {
        n: usize,
        d: usize,
    },
    Bichromatic {
        graph: GraphInstance,
        #[serde(default)]
        minimise: bool,
    },
    MincutTwoCliques {
        n: usize,
    },
    Partition {
        sizes: Vec<f64>,
    },
    PartitionRandom {
        n: usize,
        distribution: SizeDistribution,
        seed: u64,
    },
    KnapsackHard {
        n: usize,
    },
    MaxsatHard {
        n: usize,
    },
    #[serde(rename = "planted-3sat")]
    Planted3sat {
        n: usize,
        m: usize,
        #[serde(default = "default_c1")]
        c1: f64,
        #[serde(default = "default_c3")]
        c3: f64,
        seed: u64,
    },
    NearestPeak {
        peaks: Vec<PeakSpec>,
        #[serde(default)]
        weighted: bool,
    },
    MonotonePoly {
        n: usize,
        monomials: Vec<Monomial>,
    },
}

fn default_c1() -> f64 {
    DEFAULT_C1
}

fn default_c3() -> f64 {
    DEFAULT_C3
}

impl ObjectiveSpec {
    /// Descriptor from a bare name, dimension and one optional integer
    /// parameter (`k`, `d`, clause count `m`). Used by the command line.
    pub fn from_name(name: &str, n: usize, param: Option<usize>, seed: u64) -> Result<Self> {
        let need = |what: &str| param.ok_or_else(|| Error::Config(format!("objective {name} needs parameter {what}")));
        Ok(match name {
            "onemax" => Self::Onemax { n },
            "leadingones" => Self::Leadingones { n },
            "leadingzeros" => Self::Leadingzeros { n },
            "twomax" => Self::Twomax { n },
            "twomax-prime" => Self::TwomaxPrime { n },
            "hiff" => Self::Hiff { n },
            "jump" => Self::Jump { n, k: need("k")? },
            "cliff" => Self::Cliff { n, d: need("d")? },
            "cycle-colouring" => Self::Bichromatic {
                graph: GraphInstance::cycle(n)?,
                minimise: false,
            },
            "mincut-two-cliques" => Self::MincutTwoCliques { n },
            "partition-uniform" | "partition-exponential" => Self::PartitionRandom {
                n,
                distribution: if name.ends_with("uniform") {
                    SizeDistribution::Uniform
                } else {
                    SizeDistribution::Exponential
                },
                seed,
            },
            "knapsack-hard" => Self::KnapsackHard { n },
            "maxsat-hard" => Self::MaxsatHard { n },
            "planted-3sat" => Self::Planted3sat {
                n,
                m: need("m (clause count)")?,
                c1: DEFAULT_C1,
                c3: DEFAULT_C3,
                seed,
            },
            other => return Err(Error::Config(format!("unknown objective {other:?}"))),
        })
    }

    pub fn build(&self) -> Result<Box<dyn Objective>> {
        Ok(match self {
            Self::Onemax { n } => Box::new(OneMax::new(nonzero(*n)?)),
            Self::Leadingones { n } => Box::new(LeadingOnes::new(nonzero(*n)?)),
            Self::Leadingzeros { n } => Box::new(LeadingZeros::new(nonzero(*n)?)),
            Self::Twomax { n } => Box::new(TwoMax::new(nonzero(*n)?)),
            Self::TwomaxPrime { n } => Box::new(TwoMax::prime(nonzero(*n)?)),
            Self::Hiff { n } => Box::new(Hiff::new(*n)?),
            Self::Jump { n, k } => Box::new(Jump::new(nonzero(*n)?, *k)?),
            Self::Cliff { n, d } => Box::new(Cliff::new(nonzero(*n)?, *d)?),
            Self::Bichromatic { graph, minimise } => Box::new(Bichromatic::new(
                graph.clone(),
                if *minimise {
                    Direction::Minimise
                } else {
                    Direction::Maximise
                },
            )),
            Self::MincutTwoCliques { n } => Box::new(MinCut::two_cliques(*n)?),
            Self::Partition { sizes } => Box::new(Partition::new(PartitionInstance::new(sizes.clone())?)),
            Self::PartitionRandom { n, distribution, seed } => {
                Box::new(Partition::new(gen_partition_random(*n, *distribution, *seed)?))
            }
            Self::KnapsackHard { n } => Box::new(knapsack_hard(*n)?),
            Self::MaxsatHard { n } => Box::new(MaxSatHard::new(*n)?),
            Self::Planted3sat { n, m, c1, c3, seed } => {
                Box::new(PlantedSat::new(gen_planted_3sat(*n, *m, *c1, *c3, *seed)?))
            }
            Self::NearestPeak { peaks, weighted } => Box::new(NearestPeak::new(peaks.clone(), *weighted)?),
            Self::MonotonePoly { n, monomials } => Box::new(MonotonePolynomial::new(*n, monomials.clone())?),
        })
    }
}

fn nonzero(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::Config("dimension must be at least 1".into()))
    } else {
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_descriptors_build() {
        let cases = [
            r#"{"name":"onemax","n":10}"#,
            r#"{"name":"jump","n":10,"k":3}"#,
            r#"{"name":"twomax-prime","n":10}"#,
            r#"{"name":"planted-3sat","n":10,"m":30,"seed":1}"#,
            r#"{"name":"partition-random","n":10,"distribution":"exponential","seed":1}"#,
            r#"{"name":"bichromatic","graph":{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}}"#,
            r#"{"name":"nearest-peak","peaks":[{"centre":"0101","height":2.0,"slope":1.0}]}"#,
            r#"{"name":"monotone-poly","n":3,"monomials":[{"weight":1.0,"vars":[0,2]}]}"#,
        ];
        for json in cases {
            let spec: ObjectiveSpec = serde_json::from_str(json).unwrap();
            let obj = spec.build().unwrap();
            assert!(obj.dimension() >= 3, "{json}");
            let back = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<ObjectiveSpec>(&back).unwrap(), spec);
        }
    }

    #[test]
    fn unknown_and_invalid_rejected() {
        assert!(serde_json::from_str::<ObjectiveSpec>(r#"{"name":"sphere","n":3}"#).is_err());
        assert!(ObjectiveSpec::from_name("sphere", 3, None, 0).is_err());
        assert!(ObjectiveSpec::from_name("jump", 3, None, 0).is_err());
        assert!(ObjectiveSpec::Hiff { n: 6 }.build().is_err());
    }
}
