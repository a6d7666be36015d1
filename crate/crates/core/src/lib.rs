//! Bit-string black-box optimisation: objectives, unbiased variation,
//! parallel evolutionary algorithms, runtime-bound calculators and an
//! experiment harness.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod bitcore;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod stats;
pub mod theory;
pub mod variation;

pub use algorithms::{AlgoConfig, AlgorithmKind, RunRecord};
pub use bitcore::{BigCount, BitString};
pub use error::{Error, Result};
pub use harness::{CsvRow, ExperimentSpec, SweepSummary, TargetChoice};
pub use objectives::{Direction, Objective, ObjectiveSpec, TargetKind, TargetSet};
pub use theory::{BoundSpec, LemmaReport, Pmf, ProgressParams};
pub use variation::{OperatorSpec, UnaryOperator};
