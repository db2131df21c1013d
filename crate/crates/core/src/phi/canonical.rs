use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point mass of the representing measure at `lambda ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

impl From<(f64, f64)> for Atom {
    fn from((lambda, weight): (f64, f64)) -> Self {
        Self { lambda, weight }
    }
}

impl From<Atom> for (f64, f64) {
    fn from(a: Atom) -> Self {
        (a.lambda, a.weight)
    }
}

/// Data of the canonical family
///
/// ```text
/// φ(x) = a + b x + (β/2) x² + Σ w (1+λ) (1 - x + (x+λ) log((x+λ)/(1+λ)))
/// ```
///
/// for a finite positive measure with atoms `(λ, w)`. Its second derivative is
/// `f'(t) = β + Σ w (1+λ)/(t+λ)`, positive, decreasing and operator convex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct CanonicalMeasure {
    pub beta: f64,
    pub atoms: Vec<Atom>,
    pub a: f64,
    pub b: f64,
}

#[derive(Deserialize)]
struct RawMeasure {
    beta: f64,
    #[serde(default)]
    atoms: Vec<Atom>,
    a: f64,
    b: f64,
}

impl TryFrom<RawMeasure> for CanonicalMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        let m = CanonicalMeasure { beta: raw.beta, atoms: raw.atoms, a: raw.a, b: raw.b };
        m.validate()?;
        Ok(m)
    }
}

impl CanonicalMeasure {
    pub fn new(beta: f64, atoms: Vec<(f64, f64)>, a: f64, b: f64) -> Result<Self> {
        let m = Self { beta, atoms: atoms.into_iter().map(Atom::from).collect(), a, b };
        m.validate()?;
        Ok(m)
    }

    /// Fixes the affine part from reference values `φ(1)` and `φ'(1)`:
    /// `a = φ(1) - φ'(1) + β/2` and `b = φ'(1) - β`.
    pub fn from_reference(phi_at_one: f64, dphi_at_one: f64, beta: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(beta, atoms, phi_at_one - dphi_at_one + beta / 2.0, dphi_at_one - beta)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::Invalid(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::Invalid("affine constants must be finite".into()));
        }
        for atom in &self.atoms {
            if !(atom.lambda.is_finite() && atom.lambda >= 0.0) {
                return Err(Error::Invalid(format!("atom location must be >= 0, got {}", atom.lambda)));
            }
            if !(atom.weight.is_finite() && atom.weight > 0.0) {
                return Err(Error::Invalid(format!("atom weight must be > 0, got {}", atom.weight)));
            }
        }
        Ok(())
    }

    /// `μ([0, ∞))`.
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// `h(x, λ) = (1+λ)(1 - x + (x+λ) log((x+λ)/(1+λ)))`, evaluated as
/// `(1+λ)² q(d)` with `d = (x-1)/(1+λ)` and `q(d) = (1+d) log(1+d) - d`.
pub fn entropy_kernel(x: f64, lambda: f64) -> f64 {
    let scale = 1.0 + lambda;
    scale * scale * entropy_core((x - 1.0) / scale)
}

/// `q(d) = (1+d) log(1+d) - d = Σ_{k≥2} (-d)^k / (k(k-1))`.
fn entropy_core(d: f64) -> f64 {
    if d.abs() < 0.125 {
        let mut sum = 0.0;
        let mut power = d * d;
        for k in 2..40 {
            let term = power / (k * (k - 1)) as f64;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            power *= -d;
        }
        sum
    } else if d == -1.0 {
        1.0
    } else {
        (1.0 + d) * d.ln_1p() - d
    }
}

pub(crate) fn canonical_phi_unchecked(m: &CanonicalMeasure, x: f64) -> f64 {
    let integral: f64 = m.atoms.iter().map(|a| a.weight * entropy_kernel(x, a.lambda)).sum();
    m.a + m.b * x + 0.5 * m.beta * x * x + integral
}

pub fn canonical_phi(m: &CanonicalMeasure, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(x));
    }
    Ok(canonical_phi_unchecked(m, x))
}

/// `f(t) = φ'(t) = b + β t + Σ w (1+λ) log((t+λ)/(1+λ))`.
pub fn canonical_f(m: &CanonicalMeasure, t: f64) -> f64 {
    let integral: f64 = m
        .atoms
        .iter()
        .map(|a| a.weight * (1.0 + a.lambda) * ((t - 1.0) / (1.0 + a.lambda)).ln_1p())
        .sum();
    m.b + m.beta * t + integral
}

/// `f'(t) = β + Σ w (1+λ)/(t+λ)`.
pub fn canonical_fprime(m: &CanonicalMeasure, t: f64) -> f64 {
    m.beta + m.atoms.iter().map(|a| a.weight * (1.0 + a.lambda) / (t + a.lambda)).sum::<f64>()
}

/// Sample points approaching zero used by [`zero_limit_estimate`].
pub const ZERO_LIMIT_POINTS: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Estimate of `lim_{x→0} φ(x)` for the canonical family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroLimit {
    pub samples: Vec<(f64, f64)>,
    pub limit: f64,
    /// `a + Σ w`: the kernel satisfies `0 ≤ h(x, λ) ≤ (1-x)²` on `(0, 1]`.
    pub tight_bound: f64,
    /// `a + Σ w (1+λ)`.
    pub loose_bound: f64,
}

impl ZeroLimit {
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.limit <= self.tight_bound + slack && self.limit <= self.loose_bound + slack
    }
}

/// Evaluates φ at [`ZERO_LIMIT_POINTS`], checks that successive differences
/// shrink and reports the value at the smallest point as the limit.
pub fn zero_limit_estimate(m: &CanonicalMeasure) -> Result<ZeroLimit> {
    let samples: Vec<(f64, f64)> =
        ZERO_LIMIT_POINTS.iter().map(|&x| (x, canonical_phi_unchecked(m, x))).collect();
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Unstable(format!("non-finite values {values:?}")));
    }
    let d1 = (values[1] - values[0]).abs();
    let d2 = (values[2] - values[1]).abs();
    let noise = 8.0 * f64::EPSILON * values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    if d2 > d1 + noise {
        return Err(Error::Unstable(format!("differences grow: {d1:.3e} then {d2:.3e}")));
    }
    Ok(ZeroLimit {
        samples,
        limit: values[2],
        tight_bound: m.a + m.total_weight(),
        loose_bound: m.a + m.atoms.iter().map(|a| a.weight * (1.0 + a.lambda)).sum::<f64>(),
    })
}
