//! Representing functions φ, the canonical integral family, and the scalar
//! kernels `g(t,s) = (s-t)/(f(s)-f(t))` and `k = 1/g` built from `f = φ'`.

mod canonical;
mod hypothesis;
mod kernels;
mod quadrature;
mod spec;

pub use canonical::{
    canonical_f, canonical_fprime, canonical_phi, entropy_kernel, zero_limit_estimate,
    CanonicalMeasure, ZeroLimit, ZERO_LIMIT_POINTS,
};
pub use hypothesis::{
    log_grid, sufficient_hypothesis_check, HypothesisVerdict, SubVerdict, GRID_POINTS,
    GRID_RANGE,
};
pub use kernels::{g_kernel, hermite_check, k_kernel};
pub use quadrature::{gauss_legendre_64, hermite_integral, QUADRATURE_NODES};
pub use spec::{Classification, DerivativeRole, FprimeRole, PhiRole, ScalarFunctionSpec};
