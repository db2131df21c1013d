use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::spectral::HermitianMatrix;

/// Default relative slack tolerance: a trial violates when
/// `gap < -tol * (1 + |rhs|)`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// The four equivalent membership conditions.
///
/// * `I`: `x ↦ Tr h* df(x)^{-1} h` is concave.
/// * `II`: `(x, h) ↦ Tr h* df(x) h` is jointly convex.
/// * `III`: `(x, y) ↦ Tr (y - x)(f(y) - f(x))` is jointly convex.
/// * `IV`: `(x, y) ↦ g(L_x, R_y)` is concave, `g(t,s) = (s-t)/(f(s)-f(t))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    I,
    II,
    III,
    IV,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::I, Condition::II, Condition::III, Condition::IV];

    /// Names of the sampled matrices, in draw order.
    pub fn matrix_names(self) -> &'static [&'static str] {
        match self {
            Condition::I => &["x1", "x2", "h"],
            Condition::II => &["x1", "h1", "x2", "h2"],
            Condition::III | Condition::IV => &["x1", "y1", "x2", "y2"],
        }
    }

    /// Concavity conditions put the value at the mean on the left.
    pub fn is_concavity(self) -> bool {
        matches!(self, Condition::I | Condition::IV)
    }

    fn stream_tag(self) -> u64 {
        match self {
            Condition::I => 1,
            Condition::II => 2,
            Condition::III => 3,
            Condition::IV => 4,
        }
    }

    /// Independent stream index for `trial` of this condition.
    pub fn stream(self, trial: usize) -> u64 {
        (self.stream_tag() << 48) | trial as u64
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::I => "I",
            Condition::II => "II",
            Condition::III => "III",
            Condition::IV => "IV",
        };
        f.write_str(s)
    }
}

/// One evaluated trial, oriented so that `gap = lhs - rhs ≥ 0` means the
/// inequality holds. For concavity `lhs` is the value at the combined point
/// and `rhs` the combination of endpoint values; for convexity the two swap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl Slack {
    pub fn relative(&self) -> f64 {
        self.gap / (1.0 + self.rhs.abs())
    }

    pub fn violates(&self, tol: f64) -> bool {
        self.gap < -tol * (1.0 + self.rhs.abs())
    }
}

/// A sampled point of a condition: the matrices, the convex weight λ and the
/// resulting slack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub lambda: f64,
    pub matrices: BTreeMap<String, HermitianMatrix>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub passed: bool,
    pub trials: usize,
    pub skipped: usize,
    /// Most negative relative slack `gap / (1 + |rhs|)` over evaluated trials.
    pub worst_gap: f64,
    pub tol: f64,
    /// First violating trial by index.
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl ConditionVerdict {
    pub(crate) fn affine(condition: Condition, trials: usize, tol: f64) -> Self {
        Self {
            condition,
            passed: true,
            trials,
            skipped: 0,
            worst_gap: 0.0,
            tol,
            witness: None,
            note: Some("affine: member by definition".into()),
        }
    }
}
