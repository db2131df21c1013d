//! Dense Hermitian spectral machinery and the matrix functional calculus.

mod calculus;
mod eigen;
mod hermitian;
mod superop;

pub use calculus::{
    apply_univariate, coincident, divided_difference, frechet_diff, frechet_diff_inverse,
    frechet_inverse_superop, frechet_superop, loewner_matrix, FrechetDifferential,
    ScalarFunction, Smooth, COINCIDENCE_TOL, INVERSE_FLOOR,
};
pub use eigen::{eigh, eigh_general, SpectralDecomposition, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use hermitian::{HermitianMatrix, MatrixJson, HERMITIAN_TOL};
pub use superop::{
    bivariate_calculus, left_right_superops, min_eigenpair, min_eigenvalue, unvectorize,
    vectorize, Superoperator, SuperoperatorJson, SELF_ADJOINT_TOL,
};
