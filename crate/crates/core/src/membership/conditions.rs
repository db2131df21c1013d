use std::collections::BTreeMap;

use rand::Rng;

use super::sampling::{random_hermitian, random_unitary, sample_pd, DEFAULT_COND_CAP};
use super::verdict::{Condition, ConditionVerdict, Slack, Witness};
use crate::phi::{g_kernel, ScalarFunctionSpec};
use crate::spectral::{
    apply_univariate, bivariate_calculus, min_eigenpair, FrechetDifferential, HermitianMatrix,
    Superoperator,
};
use crate::{rng, CMat, Error, Result};

/// Fraction of trials that may be skipped for a near-singular differential.
pub const MAX_SKIP_FRACTION: f64 = 0.05;

/// A point at which one condition is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialPoint {
    pub condition: Condition,
    pub lambda: f64,
    pub matrices: Vec<HermitianMatrix>,
}

impl TrialPoint {
    /// Draws the point for `trial` from its own stream. Even trials use the
    /// midpoint λ = 1/2, odd trials a uniform λ.
    ///
    /// Condition III alternates pairs of trials between independent draws
    /// and commuting draws built by [`straddling_pairs`].
    pub fn sample(condition: Condition, n: usize, seed: u64, trial: usize) -> Self {
        let mut r = rng::stream(seed, condition.stream(trial));
        let lambda = if trial % 2 == 0 { 0.5 } else { r.gen_range(0.0..1.0) };
        let matrices = if condition == Condition::III && trial % 4 >= 2 {
            straddling_pairs(n, lambda, &mut r)
        } else {
            condition
                .matrix_names()
                .iter()
                .map(|name| {
                    if name.starts_with('h') {
                        random_hermitian(n, &mut r)
                    } else {
                        sample_pd(n, &mut r, DEFAULT_COND_CAP)
                    }
                })
                .collect()
        };
        Self { condition, lambda, matrices }
    }

    pub fn named(&self) -> BTreeMap<String, HermitianMatrix> {
        self.condition
            .matrix_names()
            .iter()
            .map(|s| s.to_string())
            .zip(self.matrices.iter().cloned())
            .collect()
    }

    pub fn from_named(condition: Condition, lambda: f64, named: &BTreeMap<String, HermitianMatrix>) -> Result<Self> {
        let matrices = condition
            .matrix_names()
            .iter()
            .map(|name| {
                named
                    .get(*name)
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("witness is missing matrix \"{name}\"")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { condition, lambda, matrices })
    }

    pub fn evaluate(&self, spec: &ScalarFunctionSpec) -> Result<Slack> {
        let m = &self.matrices;
        let expected = self.condition.matrix_names().len();
        if m.len() != expected {
            return Err(Error::Invalid(format!("condition {} needs {expected} matrices", self.condition)));
        }
        match self.condition {
            Condition::I => condition_i_slack(spec, &m[0], &m[1], &m[2], self.lambda),
            Condition::II => condition_ii_slack(spec, &m[0], &m[1], &m[2], &m[3], self.lambda),
            Condition::III => condition_iii_slack(spec, &m[0], &m[1], &m[2], &m[3], self.lambda),
            Condition::IV => condition_iv_slack(spec, &m[0], &m[1], &m[2], &m[3], self.lambda),
        }
    }

    pub fn witness(&self, trial: usize, slack: Slack) -> Witness {
        Witness {
            trial,
            lambda: self.lambda,
            matrices: self.named(),
            lhs: slack.lhs,
            rhs: slack.rhs,
            gap: slack.gap,
        }
    }
}

/// Four commuting matrices `x1, y1, x2, y2` sharing one random eigenbasis.
///
/// In every eigenvalue slot the pairs are written as `(v ∓ u) / 2` with
/// `v = x + y` and `u = y - x`. Both pairs straddle a common `(v, u)` so that
/// their λ-combination is exactly that point; the sum coordinate moves by a
/// large step and the difference coordinate by a small opposing one. All
/// eigenvalues stay positive by construction.
pub fn straddling_pairs<R: Rng + ?Sized>(n: usize, lambda: f64, r: &mut R) -> Vec<HermitianMatrix> {
    let scale = r.gen_range(0.0..50f64.ln()).exp();
    let mut spectra = vec![vec![0.0; n]; 4];
    for i in 0..n {
        let v = scale * r.gen_range(0.5..1.0);
        let su = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let sd = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let u = su * v * r.gen_range(0.05..0.3);
        let dv = sd * v * r.gen_range(0.2..0.5);
        let du = -su * sd * v * r.gen_range(0.0..0.05);
        let (v1, u1) = (v + (1.0 - lambda) * dv, u + (1.0 - lambda) * du);
        let (v2, u2) = (v - lambda * dv, u - lambda * du);
        spectra[0][i] = (v1 - u1) / 2.0;
        spectra[1][i] = (v1 + u1) / 2.0;
        spectra[2][i] = (v2 - u2) / 2.0;
        spectra[3][i] = (v2 + u2) / 2.0;
    }
    let basis = random_unitary(n, r);
    spectra.iter().map(|s| HermitianMatrix::from_spectrum(s, &basis)).collect()
}

fn concave(at_mean: f64, combination: f64) -> Slack {
    Slack { lhs: at_mean, rhs: combination, gap: at_mean - combination }
}

fn convex(at_mean: f64, combination: f64) -> Slack {
    Slack { lhs: combination, rhs: at_mean, gap: combination - at_mean }
}

fn inverse_form(spec: &ScalarFunctionSpec, x: &HermitianMatrix, h: &CMat) -> Result<f64> {
    FrechetDifferential::new(&spec.derivative_role(), x)?.inverse_quadratic_form(h)
}

fn forward_form(spec: &ScalarFunctionSpec, x: &HermitianMatrix, h: &CMat) -> Result<f64> {
    FrechetDifferential::new(&spec.derivative_role(), x)?.quadratic_form(h)
}

/// Concavity slack of `x ↦ Tr h* df(x)^{-1} h`.
pub fn condition_i_slack(
    spec: &ScalarFunctionSpec,
    x1: &HermitianMatrix,
    x2: &HermitianMatrix,
    h: &HermitianMatrix,
    lambda: f64,
) -> Result<Slack> {
    let h = h.as_matrix();
    let mean = x1.lerp(x2, lambda)?;
    let at_mean = inverse_form(spec, &mean, h)?;
    let comb = lambda * inverse_form(spec, x1, h)? + (1.0 - lambda) * inverse_form(spec, x2, h)?;
    Ok(concave(at_mean, comb))
}

/// Joint convexity slack of `(x, h) ↦ Tr h* df(x) h`.
pub fn condition_ii_slack(
    spec: &ScalarFunctionSpec,
    x1: &HermitianMatrix,
    h1: &HermitianMatrix,
    x2: &HermitianMatrix,
    h2: &HermitianMatrix,
    lambda: f64,
) -> Result<Slack> {
    let x = x1.lerp(x2, lambda)?;
    let h = h1.lerp(h2, lambda)?;
    let at_mean = forward_form(spec, &x, h.as_matrix())?;
    let comb = lambda * forward_form(spec, x1, h1.as_matrix())?
        + (1.0 - lambda) * forward_form(spec, x2, h2.as_matrix())?;
    Ok(convex(at_mean, comb))
}

/// `Tr (y - x)(f(y) - f(x))`.
pub fn bivariate_trace(spec: &ScalarFunctionSpec, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    let role = spec.derivative_role();
    let diff = y.sub(x)?;
    let fdiff = apply_univariate(&role, y)?.sub(&apply_univariate(&role, x)?)?;
    Ok((diff.as_matrix() * fdiff.as_matrix()).trace().re)
}

/// Joint convexity slack of `(x, y) ↦ Tr (y - x)(f(y) - f(x))`.
pub fn condition_iii_slack(
    spec: &ScalarFunctionSpec,
    x1: &HermitianMatrix,
    y1: &HermitianMatrix,
    x2: &HermitianMatrix,
    y2: &HermitianMatrix,
    lambda: f64,
) -> Result<Slack> {
    let at_mean = bivariate_trace(spec, &x1.lerp(x2, lambda)?, &y1.lerp(y2, lambda)?)?;
    let comb = lambda * bivariate_trace(spec, x1, y1)? + (1.0 - lambda) * bivariate_trace(spec, x2, y2)?;
    Ok(convex(at_mean, comb))
}

/// `g(L_x, R_y)` for the kernel `g(t,s) = (s-t)/(f(s)-f(t))`.
pub fn g_superop(spec: &ScalarFunctionSpec, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<Superoperator> {
    bivariate_calculus(|t, s| g_kernel(spec, t, s), x, y)
}

/// Concavity slack of `(x, y) ↦ g(L_x, R_y)` in the superoperator order: the
/// smallest eigenvalue of `g(L_x̄, R_ȳ) - λ g(L_x1, R_y1) - (1-λ) g(L_x2, R_y2)`.
/// `lhs` and `rhs` are the two sides paired with the minimizing eigenvector.
pub fn condition_iv_slack(
    spec: &ScalarFunctionSpec,
    x1: &HermitianMatrix,
    y1: &HermitianMatrix,
    x2: &HermitianMatrix,
    y2: &HermitianMatrix,
    lambda: f64,
) -> Result<Slack> {
    let at_mean = g_superop(spec, &x1.lerp(x2, lambda)?, &y1.lerp(y2, lambda)?)?;
    let comb = g_superop(spec, x1, y1)?
        .scale(lambda)
        .add(&g_superop(spec, x2, y2)?.scale(1.0 - lambda))?;
    let diff = at_mean.sub(&comb)?;
    let (gap, v) = min_eigenpair(diff.matrix())?;
    let lhs = (v.adjoint() * at_mean.matrix() * &v)[(0, 0)].re;
    let rhs = (v.adjoint() * comb.matrix() * &v)[(0, 0)].re;
    Ok(Slack { lhs, rhs, gap })
}

/// Runs `trials` independent draws of `condition` at dimension `n`.
pub fn check_condition(
    condition: Condition,
    spec: &ScalarFunctionSpec,
    n: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ConditionVerdict> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if spec.is_affine() {
        return Ok(ConditionVerdict::affine(condition, trials, tol));
    }
    spec.require_increasing()?;

    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut skipped = 0;
    for trial in 0..trials {
        let point = TrialPoint::sample(condition, n, seed, trial);
        let slack = match point.evaluate(spec) {
            Ok(s) => s,
            Err(Error::NearSingularDifferential(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        worst = worst.min(slack.relative());
        if witness.is_none() && slack.violates(tol) {
            witness = Some(point.witness(trial, slack));
        }
    }
    if skipped as f64 > MAX_SKIP_FRACTION * trials as f64 {
        return Err(Error::TooManySkips { skipped, trials });
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    Ok(ConditionVerdict {
        condition,
        passed: worst >= -tol,
        trials,
        skipped,
        worst_gap: worst,
        tol,
        witness,
        note: None,
    })
}

pub fn check_condition_i(spec: &ScalarFunctionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<ConditionVerdict> {
    check_condition(Condition::I, spec, n, trials, seed, tol)
}

pub fn check_condition_ii(spec: &ScalarFunctionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<ConditionVerdict> {
    check_condition(Condition::II, spec, n, trials, seed, tol)
}

pub fn check_condition_iii(spec: &ScalarFunctionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<ConditionVerdict> {
    check_condition(Condition::III, spec, n, trials, seed, tol)
}

pub fn check_condition_iv(spec: &ScalarFunctionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<ConditionVerdict> {
    check_condition(Condition::IV, spec, n, trials, seed, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::verdict::DEFAULT_TOL;
    use crate::phi::CanonicalMeasure;

    fn power(p: f64) -> ScalarFunctionSpec {
        ScalarFunctionSpec::Power { p }
    }

    fn scalar(v: f64) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![v]]).unwrap()
    }

    #[test]
    fn square_gives_zero_slack_for_inverse_and_kernel_forms() {
        let spec = power(2.0);
        for trial in 0..20 {
            let p = TrialPoint::sample(Condition::I, 3, 11, trial);
            let s = p.evaluate(&spec).unwrap();
            assert!(s.gap.abs() <= 1e-12 * (1.0 + s.rhs.abs()), "I: {s:?}");
            let p = TrialPoint::sample(Condition::IV, 3, 11, trial);
            let s = p.evaluate(&spec).unwrap();
            assert!(s.gap.abs() < 1e-12, "IV: {s:?}");
        }
    }

    #[test]
    fn equal_pairs_give_zero_slack() {
        let mut r = rng::stream(5, 0);
        let x1 = sample_pd(3, &mut r, DEFAULT_COND_CAP);
        let x2 = sample_pd(3, &mut r, DEFAULT_COND_CAP);
        for spec in [ScalarFunctionSpec::StandardEntropy, power(1.5), power(3.0)] {
            let s = condition_iii_slack(&spec, &x1, &x1, &x2, &x2, 0.3).unwrap();
            assert!(s.lhs.abs() < 1e-12 && s.rhs.abs() < 1e-12 && s.gap.abs() < 1e-12);
        }
    }

    fn scalar_oracle(p: f64, x1: f64, y1: f64, x2: f64, y2: f64, l: f64) -> f64 {
        let f = |t: f64| p * t.powf(p - 1.0);
        let big_f = |x: f64, y: f64| (y - x) * (f(y) - f(x));
        let (x, y) = (l * x1 + (1.0 - l) * x2, l * y1 + (1.0 - l) * y2);
        l * big_f(x1, y1) + (1.0 - l) * big_f(x2, y2) - big_f(x, y)
    }

    #[test]
    fn scalar_condition_iii_matches_grid_oracle() {
        let grid = [0.05, 0.3, 1.0, 2.5, 7.0];
        for p in [1.5, 3.0] {
            let spec = power(p);
            for &x1 in &grid {
                for &y1 in &grid {
                    for &x2 in &grid {
                        for &y2 in &grid {
                            for l in [0.5, 0.2] {
                                let s = condition_iii_slack(&spec, &scalar(x1), &scalar(y1), &scalar(x2), &scalar(y2), l)
                                    .unwrap();
                                let o = scalar_oracle(p, x1, y1, x2, y2, l);
                                assert!((s.gap - o).abs() <= 1e-10 * (1.0 + o.abs()), "{x1} {y1} {x2} {y2}: {} vs {o}", s.gap);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn straddling_pairs_are_commuting_and_average_correctly() {
        let mut r = rng::stream(3, 1);
        let m = straddling_pairs(3, 0.3, &mut r);
        for a in &m {
            assert!(a.min_eigenvalue().unwrap() > 0.0);
            for b in &m {
                let c = a.as_matrix() * b.as_matrix() - b.as_matrix() * a.as_matrix();
                assert!(c.norm() < 1e-9 * (1.0 + a.as_matrix().norm() * b.as_matrix().norm()));
            }
        }
    }

    #[test]
    fn verdicts_are_deterministic() {
        let spec = power(2.5);
        for c in Condition::ALL {
            let a = check_condition(c, &spec, 2, 40, 99, DEFAULT_TOL).unwrap();
            let b = check_condition(c, &spec, 2, 40, 99, DEFAULT_TOL).unwrap();
            assert_eq!(a.worst_gap.to_bits(), b.worst_gap.to_bits());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_replays_exactly() {
        let spec = power(3.0);
        for c in Condition::ALL {
            let v = check_condition(c, &spec, 2, 200, 4, DEFAULT_TOL).unwrap();
            assert!(!v.passed, "{c}");
            let w = v.witness.expect("violation carries a witness");
            let s = TrialPoint::from_named(c, w.lambda, &w.matrices).unwrap().evaluate(&spec).unwrap();
            assert!((s.gap - w.gap).abs() <= 1e-12, "{c}: {} vs {}", s.gap, w.gap);
        }
    }

    #[test]
    fn members_pass_small_runs() {
        let canonical = ScalarFunctionSpec::Canonical(CanonicalMeasure::new(0.1, vec![(0.0, 1.0), (2.0, 0.3)], 0.0, 0.0).unwrap());
        for spec in [ScalarFunctionSpec::StandardEntropy, power(1.5), canonical] {
            for c in Condition::ALL {
                let v = check_condition(c, &spec, 2, 40, 1, DEFAULT_TOL).unwrap();
                assert!(v.passed && v.witness.is_none(), "{c}: {v:?}");
            }
        }
    }

    #[test]
    fn affine_short_circuits() {
        let spec = ScalarFunctionSpec::Affine { c0: 1.0, c1: 2.0 };
        let v = check_condition_iv(&spec, 3, 10, 0, DEFAULT_TOL).unwrap();
        assert!(v.passed);
        assert_eq!(v.note.as_deref(), Some("affine: member by definition"));
    }

    #[test]
    fn non_increasing_power_is_rejected() {
        assert!(check_condition_i(&power(0.5), 2, 5, 0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn near_coincident_eigenvalues_complete() {
        let mut r = rng::stream(8, 0);
        let u = random_unitary(3, &mut r);
        let x1 = HermitianMatrix::from_spectrum(&[1.0, 1.0 + 1e-9, 2.0], &u);
        let x2 = HermitianMatrix::from_spectrum(&[0.5, 3.0, 3.0 + 5e-7], &u);
        let y1 = HermitianMatrix::from_spectrum(&[2.0, 2.0, 2.0 + 1e-8], &u);
        let h = random_hermitian(3, &mut r);
        for spec in [ScalarFunctionSpec::StandardEntropy, power(1.5), power(3.0)] {
            for s in [
                condition_i_slack(&spec, &x1, &x2, &h, 0.5),
                condition_ii_slack(&spec, &x1, &h, &x2, &h, 0.5),
                condition_iii_slack(&spec, &x1, &y1, &x2, &x1, 0.5),
                condition_iv_slack(&spec, &x1, &y1, &x2, &x1, 0.5),
            ] {
                assert!(s.unwrap().gap.is_finite());
            }
        }
    }

    #[test]
    fn malformed_witness_is_rejected() {
        let named = BTreeMap::new();
        assert!(TrialPoint::from_named(Condition::III, 0.5, &named).is_err());
    }
}
