use serde::{Deserialize, Serialize};

use super::conditions::check_condition;
use super::verdict::{Condition, ConditionVerdict};
use crate::phi::ScalarFunctionSpec;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// All four conditions hold on every trial.
    Pass,
    /// All four conditions found a violation.
    Violation,
    /// The checkers disagree; the conditions are equivalent, so this is a
    /// numerical anomaly and never a refutation.
    Anomaly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub spec: ScalarFunctionSpec,
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub verdicts: Vec<ConditionVerdict>,
    pub agree: bool,
    pub outcome: Outcome,
}

/// Runs the four checkers on the same seed and compares their verdicts.
pub fn cross_equivalence(
    spec: &ScalarFunctionSpec,
    n: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<EquivalenceReport> {
    let verdicts = Condition::ALL
        .iter()
        .map(|&c| check_condition(c, spec, n, trials, seed, tol))
        .collect::<Result<Vec<_>>>()?;
    let passes = verdicts.iter().filter(|v| v.passed).count();
    let agree = passes == 0 || passes == verdicts.len();
    let outcome = match (agree, passes) {
        (false, _) => Outcome::Anomaly,
        (true, 0) => Outcome::Violation,
        _ => Outcome::Pass,
    };
    Ok(EquivalenceReport {
        spec: spec.clone(),
        dimension: n,
        trials,
        seed,
        tol,
        verdicts,
        agree,
        outcome,
    })
}
