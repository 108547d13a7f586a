//! Discrete Agmon-Kolmogorov inequalities on integer lattices: difference
//! operators and norms on finitely supported sequences, exact constants in
//! log2 arithmetic, mechanical replay of the proof bookkeeping, randomized
//! inequality certification, and extremal-sequence search.

mod constants;
mod error;
mod extremal;
mod io;
mod jsonfmt;
mod lattice;
mod proof_trace;
mod sum;
mod verify;

pub use constants::{
    binomial, binomial_identity_check, exponent_string, kappa_min, kappa_min_log2, omega_count,
    pure_pow2_exponent, rho1, rho1_log2, rho2, rho2_log2, Branch, ConstantSpec, ConstantValue,
};
pub use error::{Error, Result};
pub use extremal::{local_step, ratio, search, SearchConfig, SearchResult};
pub use io::{seq_from_json, seq_json_value, seq_to_json};
pub use jsonfmt::{json_u128, Json};
pub use lattice::{centered_box, LatticePoint, LatticeSeq, SupportBox};
pub use proof_trace::{
    all_plans, expand_chain, order_histogram, plan_count, reduction_cost, sample_plans,
    total_kappa, verify_sum_identity, AxisSet, ProofTerm, ReductionPlan, ReductionTarget,
    MAX_TRACE_DIM,
};
pub use sum::{compensated, CompensatedSum};
pub use verify::{
    check_agmon_1d, check_agmon_cauchy, check_copson, check_diff_bound, check_main, main_sides,
    run_suite, AgmonCauchyReport, CheckReport, CopsonMode, Distribution, InequalityKind,
    SuiteConfig, SuiteSummary, DEFAULT_TOLERANCE,
};
