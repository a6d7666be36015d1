//! Exact progress distributions, grid checkers for the tail and moment
//! inequalities, runtime-bound curves and drift calculators.

pub mod bounds;
pub mod drift;
pub mod lemmas;
pub mod numeric;
pub mod pmf;
pub mod report;

pub use bounds::{
    adaptive_ub, coupon_bound, cutoff_fixed_ea, cutoff_lo, cutoff_onemax, expected_max_bound, hcy, lb_lo, lb_unique,
    mc_check_max_geometric, n_star, ub_lo, BoundSpec, CouponBound, MaxGeometricCheck, BOUND_IDS, C_LOWER,
};
pub use drift::{additive_bounds, tail_lower, tail_upper, Beta, DriftTail};
pub use lemmas::{
    gamma_pair, mgf_d, verify_chvatal, verify_coupon, verify_hypergeom_tail, verify_improve_prob, verify_mgf,
    verify_mgf_max, verify_multibit, FULL_GRID_MAX_N, MGF_EXP_ETA,
};
pub use numeric::{ln_plus, BinomialTable, LnFactorials};
pub use pmf::{
    delta0_pmf, delta0_pmf_exact, hypergeom_pmf, hypergeom_pmf_exact, ExactPmf, Pmf, ProgressParams, EXACT_MAX_N,
};
pub use report::{LemmaReport, Point, Violation, TOLERANCE};
