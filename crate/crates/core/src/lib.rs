//! Matrix functional calculus and numerical tooling for matrix φ-entropies.
//!
//! The crate is organised in four layers:
//!
//! * [`spectral`]: dense Hermitian eigendecomposition (cyclic Jacobi), univariate
//!   functional calculus, Löwner matrices, Fréchet differentials and their
//!   inverses, and superoperators on the operator space with the trace inner
//!   product (left/right multiplication and the bivariate calculus `g(L_x, R_y)`).
//! * [`phi`]: the catalog of representing functions φ (affine, `t log t`,
//!   powers, and the canonical integral family built from a discrete measure),
//!   with the kernels `g(t,s) = (s-t)/(f(s)-f(t))` and `k = 1/g`.
//! * [`entropy`]: the functional `H_φ(Z) = E Tr φ(Z) - Tr φ(E Z)` over finite
//!   ensembles of positive definite matrices.
//! * [`membership`]: randomized checkers for the four equivalent membership
//!   conditions, the cross-equivalence harness and a counterexample search.
//!
//! Vectorization is column stacking; every identity involving superoperators is
//! tested through trace pairings `Tr h* S(h)` so the convention stays internal.

pub mod entropy;
pub mod error;
pub mod membership;
pub mod phi;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};

/// Dense complex matrix used for general (not necessarily Hermitian) operands.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;

pub use num_complex::Complex64;
