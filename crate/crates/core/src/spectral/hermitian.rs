use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigh, SpectralDecomposition};
use crate::{CMat, Error, Result};

/// Absolute tolerance on `|a_ij - conj(a_ji)|` accepted at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A complex square matrix equal to its conjugate transpose.
///
/// Construction checks the Hermitian property within [`HERMITIAN_TOL`] and then
/// stores the exactly symmetrized matrix `(a + a*) / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HermitianMatrix {
    inner: CMat,
}

impl HermitianMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let dev = hermitian_deviation(&m);
        if !dev.is_finite() || dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds from a matrix that is Hermitian up to round-off, without the
    /// construction tolerance check. Used for results of the calculus itself.
    pub(crate) fn symmetrized(m: CMat) -> Self {
        let inner = (&m + m.adjoint()).scale(0.5);
        Self { inner }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("rows must all have length n".into()));
        }
        Self::new(CMat::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::new(CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: CMat::identity(n, n) }
    }

    /// `U diag(values) U*`.
    pub fn from_spectrum(values: &[f64], vectors: &CMat) -> Self {
        let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        Self::symmetrized(vectors * d * vectors.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.inner
    }

    pub fn into_inner(self) -> CMat {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        eigh(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigh()?.eigenvalues[0])
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn lerp(&self, other: &Self, weight: f64) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::symmetrized(
            self.inner.scale(weight) + other.inner.scale(1.0 - weight),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { inner: &self.inner + &other.inner })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { inner: &self.inner - &other.inner })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { inner: self.inner.scale(factor) }
    }

    /// `u* self u` for a unitary `u`.
    pub fn conjugate_by(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.nrows() });
        }
        Ok(Self::symmetrized(u.adjoint() * &self.inner * u))
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }
}

fn hermitian_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            dev = dev.max(d);
        }
    }
    dev
}

/// Wire format for matrices: `{"n": int, "re": [[...]], "im": [[...]]}`, with
/// `im` optional on input (zero when absent). Rows are listed top to bottom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        Self { n, re, im: Some(im) }
    }

    /// Converts to a dense complex matrix, checking shapes but not symmetry.
    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.n;
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let check = |rows: &Vec<Vec<f64>>, name: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Invalid(format!("\"{name}\" must be an {n}x{n} array")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.re[i][j], im)
        }))
    }
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(value: MatrixJson) -> Result<Self> {
        HermitianMatrix::new(value.to_matrix()?)
    }
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(value: HermitianMatrix) -> Self {
        MatrixJson::from_matrix(&value.inner)
    }
}
