use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigh, eigh_general};
use super::hermitian::{HermitianMatrix, MatrixJson};
use crate::{CMat, Error, Result};

/// Tolerance for the self-adjointness precondition of eigenvalue queries,
/// relative to `max(1, max |a_ij|)`.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// Column-stacking `vec(h)`.
pub fn vectorize(h: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(h.as_slice())
}

pub fn unvectorize(v: &DVector<Complex64>, n: usize) -> Result<CMat> {
    if v.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: v.len() });
    }
    Ok(CMat::from_column_slice(n, n, v.as_slice()))
}

/// A linear map on the space of `n × n` matrices, stored as a dense
/// `n² × n²` matrix acting on column-stacked operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    n: usize,
    matrix: CMat,
}

impl Superoperator {
    pub fn new(n: usize, matrix: CMat) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if matrix.nrows() != n * n || matrix.ncols() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: matrix.nrows() });
        }
        Ok(Self { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, matrix: CMat::identity(n * n, n * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, h: &CMat) -> Result<CMat> {
        if h.nrows() != self.n || h.ncols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: h.nrows() });
        }
        unvectorize(&(&self.matrix * vectorize(h)), self.n)
    }

    /// The trace pairing `Tr h* S(h)`.
    pub fn pairing(&self, h: &CMat) -> Result<Complex64> {
        let image = self.apply(h)?;
        Ok(h.iter().zip(image.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { n: self.n, matrix: &self.matrix * &other.matrix })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { n: self.n, matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { n: self.n, matrix: &self.matrix - &other.matrix })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { n: self.n, matrix: self.matrix.scale(factor) }
    }

    /// Adjoint with respect to the trace inner product; with the standard
    /// basis of matrix units this is the conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { n: self.n, matrix: self.matrix.adjoint() }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self_adjoint_deviation(&self.matrix) <= tol * scale_of(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.matrix)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }
}

/// Wire format for superoperators: the `n² × n²` matrix in the column-stacking
/// basis of matrix units, plus the underlying dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperoperatorJson {
    pub n: usize,
    pub dim: usize,
    pub vectorization: String,
    pub matrix: MatrixJson,
}

impl From<&Superoperator> for SuperoperatorJson {
    fn from(value: &Superoperator) -> Self {
        Self {
            n: value.n,
            dim: value.n * value.n,
            vectorization: "column-stacking".into(),
            matrix: MatrixJson::from_matrix(&value.matrix),
        }
    }
}

fn self_adjoint_deviation(m: &CMat) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn scale_of(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

fn check_self_adjoint(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let dev = self_adjoint_deviation(m);
    if !(dev <= SELF_ADJOINT_TOL * scale_of(m)) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Smallest eigenvalue of a self-adjoint matrix (or superoperator matrix).
pub fn min_eigenvalue(m: &CMat) -> Result<f64> {
    check_self_adjoint(m)?;
    Ok(eigh_general(m)?.eigenvalues[0])
}

/// Smallest eigenvalue with a unit eigenvector.
pub fn min_eigenpair(m: &CMat) -> Result<(f64, DVector<Complex64>)> {
    check_self_adjoint(m)?;
    let d = eigh_general(m)?;
    Ok((d.eigenvalues[0], d.eigenvectors.column(0).into_owned()))
}

/// `L_x(h) = x h` and `R_x(h) = h x`.
///
/// Under column stacking `vec(x h) = (I ⊗ x) vec(h)` and
/// `vec(h x) = (xᵀ ⊗ I) vec(h)`.
pub fn left_right_superops(x: &HermitianMatrix) -> (Superoperator, Superoperator) {
    let n = x.dim();
    let id = CMat::identity(n, n);
    let a = x.as_matrix();
    let left = id.kronecker(a);
    let right = a.transpose().kronecker(&id);
    (Superoperator { n, matrix: left }, Superoperator { n, matrix: right })
}

/// The bivariate functional calculus `g(L_x, R_y)`.
///
/// With eigenvectors `u_i` of `x` and `v_j` of `y`, the superoperator is
/// diagonal in the basis of matrix units `u_i v_j*` with weights `g(λ_i, μ_j)`.
pub fn bivariate_calculus<K>(g: K, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<Superoperator>
where
    K: Fn(f64, f64) -> Result<f64>,
{
    x.check_dim(y)?;
    let n = x.dim();
    let dx = eigh(x)?;
    let dy = eigh(y)?;
    for &l in dx.eigenvalues.iter().chain(&dy.eigenvalues) {
        if l <= 0.0 {
            return Err(Error::NonPositiveEigenvalue(l));
        }
    }
    // vec(u v*) = conj(v) ⊗ u, so column j*n + i of the basis carries g(λ_i, μ_j).
    let basis = dy.eigenvectors.map(|z| z.conj()).kronecker(&dx.eigenvectors);
    let mut weights = DVector::zeros(n * n);
    for j in 0..n {
        for i in 0..n {
            weights[j * n + i] = Complex64::new(g(dx.eigenvalues[i], dy.eigenvalues[j])?, 0.0);
        }
    }
    let matrix = &basis * CMat::from_diagonal(&weights) * basis.adjoint();
    let matrix = (&matrix + matrix.adjoint()).scale(0.5);
    Ok(Superoperator { n, matrix })
}
