//! Randomized checkers for the four equivalent membership conditions, the
//! equivalence harness and the counterexample search.
//!
//! Every trial draws from its own stream derived from `(seed, condition,
//! trial)`, so verdicts are bit-for-bit reproducible and independent of
//! evaluation order.

mod conditions;
mod equivalence;
pub mod sampling;
mod search;
mod verdict;

pub use conditions::{
    bivariate_trace, check_condition, check_condition_i, check_condition_ii, check_condition_iii,
    check_condition_iv, condition_i_slack, condition_ii_slack, condition_iii_slack,
    condition_iv_slack, g_superop, straddling_pairs, TrialPoint, MAX_SKIP_FRACTION,
};
pub use equivalence::{cross_equivalence, EquivalenceReport, Outcome};
pub use sampling::{
    complex_gaussian, random_canonical_measure, random_hermitian, random_unitary, sample_pd,
    sample_pd_in, DEFAULT_COND_CAP, EIGEN_RANGE,
};
pub use search::{search_counterexample, SearchConfig, SearchOutcome, ViolationReport};
pub use verdict::{Condition, ConditionVerdict, Slack, Witness, DEFAULT_TOL};
