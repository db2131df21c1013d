use super::quadrature::hermite_integral;
use super::spec::ScalarFunctionSpec;
use crate::spectral::{coincident, divided_difference};
use crate::{Error, Result};

fn check_positive(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(t))
    }
}

/// `g(t, s) = (s - t)/(f(s) - f(t))`, with `1/f'` at coincident arguments.
pub fn g_kernel(spec: &ScalarFunctionSpec, t: f64, s: f64) -> Result<f64> {
    check_positive(t)?;
    check_positive(s)?;
    spec.require_increasing()?;
    if coincident(t, s) {
        Ok(1.0 / spec.fprime(0.5 * (t + s)))
    } else {
        Ok((s - t) / (spec.f(s) - spec.f(t)))
    }
}

/// `k(t, s) = (f(t) - f(s))/(t - s)`, the divided difference of `f = φ'`.
pub fn k_kernel(spec: &ScalarFunctionSpec, t: f64, s: f64) -> Result<f64> {
    divided_difference(&spec.derivative_role(), t, s)
}

/// Residual `|k(t, s) - ∫₀¹ f'(λt + (1-λ)s) dλ|` with the integral evaluated by
/// 64-node Gauss–Legendre quadrature.
pub fn hermite_check(spec: &ScalarFunctionSpec, t: f64, s: f64) -> Result<f64> {
    let k = k_kernel(spec, t, s)?;
    let integral = hermite_integral(|u| spec.fprime(u), t, s);
    Ok((k - integral).abs())
}
