use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

pub const QUADRATURE_NODES: usize = 64;

/// The shared 64-node Gauss–Legendre rule.
pub fn gauss_legendre_64() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(QUADRATURE_NODES).unwrap()))
}

/// `∫₀¹ f'(λt + (1-λ)s) dλ` by 64-node Gauss–Legendre.
///
/// When `t` and `s` differ by more than a factor of two the integrand has a
/// pole close to the interval, so the rule is applied after the substitution
/// `u = e^v`, i.e. to `(s-t)^{-1} ∫_{log t}^{log s} f'(e^v) e^v dv`.
pub fn hermite_integral(fprime: impl Fn(f64) -> f64, t: f64, s: f64) -> f64 {
    let rule = gauss_legendre_64();
    let (lo, hi) = if t < s { (t, s) } else { (s, t) };
    if hi <= 2.0 * lo {
        rule.integrate(0.0, 1.0, |l| fprime(l * t + (1.0 - l) * s))
    } else {
        let integral = rule.integrate(lo.ln(), hi.ln(), |v| {
            let u = v.exp();
            fprime(u) * u
        });
        integral / (hi - lo)
    }
}
