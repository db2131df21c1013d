use serde::Serialize;

use super::spec::ScalarFunctionSpec;
use crate::membership::sampling::{sample_pd, DEFAULT_COND_CAP};
use crate::spectral::{apply_univariate, min_eigenvalue};
use crate::{rng, Result};

pub const GRID_POINTS: usize = 200;
pub const GRID_RANGE: (f64, f64) = (1e-3, 1e3);

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (points - 1) as f64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubVerdict {
    pub passed: bool,
    pub witness: Option<String>,
}

impl SubVerdict {
    fn pass() -> Self {
        Self { passed: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        Self { passed: false, witness: Some(witness) }
    }
}

/// Numerical evidence that `f'` is positive, numerically decreasing and
/// operator convex. Advisory only: it is a sufficient condition, and
/// operator convexity is sampled rather than proven.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisVerdict {
    pub positive: SubVerdict,
    pub decreasing: SubVerdict,
    pub operator_convex: SubVerdict,
    pub trials: usize,
    pub dimension: usize,
    pub tol: f64,
    pub evidence: &'static str,
}

impl HypothesisVerdict {
    pub fn passed(&self) -> bool {
        self.positive.passed && self.decreasing.passed && self.operator_convex.passed
    }
}

pub fn sufficient_hypothesis_check(
    spec: &ScalarFunctionSpec,
    n: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<HypothesisVerdict> {
    spec.require_increasing()?;
    let grid = log_grid(GRID_RANGE.0, GRID_RANGE.1, GRID_POINTS);
    let values: Vec<f64> = grid.iter().map(|&t| spec.fprime(t)).collect();

    let positive = match grid.iter().zip(&values).find(|(_, &v)| !(v > 0.0)) {
        Some((t, v)) => SubVerdict::fail(format!("f'({t:e}) = {v:e}")),
        None => SubVerdict::pass(),
    };

    let decreasing = match (1..grid.len()).find(|&k| values[k] > values[k - 1] * (1.0 + 1e-12)) {
        Some(k) => SubVerdict::fail(format!(
            "f'({:e}) = {:e} < f'({:e}) = {:e}",
            grid[k - 1],
            values[k - 1],
            grid[k],
            values[k]
        )),
        None => SubVerdict::pass(),
    };

    let role = spec.fprime_role();
    let mut operator_convex = SubVerdict::pass();
    for trial in 0..trials {
        let mut r = rng::stream(seed, trial as u64);
        let x = sample_pd(n, &mut r, DEFAULT_COND_CAP);
        let y = sample_pd(n, &mut r, DEFAULT_COND_CAP);
        let mid = apply_univariate(&role, &x.lerp(&y, 0.5)?)?;
        let avg = apply_univariate(&role, &x)?.lerp(&apply_univariate(&role, &y)?, 0.5)?;
        let gap = min_eigenvalue(avg.sub(&mid)?.as_matrix())?;
        let scale = avg.eigh()?.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if gap < -tol * (1.0 + scale) {
            operator_convex = SubVerdict::fail(format!("trial {trial}: midpoint gap {gap:e}"));
            break;
        }
    }

    Ok(HypothesisVerdict {
        positive,
        decreasing,
        operator_convex,
        trials,
        dimension: n,
        tol,
        evidence: "numerical evidence",
    })
}
