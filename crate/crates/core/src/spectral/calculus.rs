use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::{eigh, SpectralDecomposition};
use super::hermitian::HermitianMatrix;
use super::superop::{unvectorize, vectorize, Superoperator};
use crate::{CMat, Error, Result};

/// Relative gap below which two arguments of a divided difference are treated
/// as coincident and the derivative at their midpoint is used instead.
pub const COINCIDENCE_TOL: f64 = 1e-7;

/// Smallest Löwner entry for which the Fréchet differential is inverted.
pub const INVERSE_FLOOR: f64 = 1e-14;

/// A real function on `(0, ∞)` together with its derivative.
pub trait ScalarFunction {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
}

/// Adapter pairing two closures as a [`ScalarFunction`].
#[derive(Clone, Copy, Debug)]
pub struct Smooth<F, D> {
    pub f: F,
    pub df: D,
}

impl<F, D> Smooth<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pub fn new(f: F, df: D) -> Self {
        Self { f, df }
    }
}

impl<F, D> ScalarFunction for Smooth<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn value(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        (self.df)(t)
    }
}

/// `|t - s| <= τ max(1, |t|, |s|)`.
pub fn coincident(t: f64, s: f64) -> bool {
    (t - s).abs() <= COINCIDENCE_TOL * 1f64.max(t.abs()).max(s.abs())
}

fn check_positive(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(t))
    }
}

/// The divided difference `[t, s]_f`.
pub fn divided_difference<F: ScalarFunction + ?Sized>(f: &F, t: f64, s: f64) -> Result<f64> {
    check_positive(t)?;
    check_positive(s)?;
    if coincident(t, s) {
        Ok(f.derivative(0.5 * (t + s)))
    } else {
        Ok((f.value(t) - f.value(s)) / (t - s))
    }
}

/// The symmetric matrix of divided differences `[λ_i, λ_j]_f`.
pub fn loewner_matrix<F: ScalarFunction + ?Sized>(f: &F, eigenvalues: &[f64]) -> Result<DMatrix<f64>> {
    let n = eigenvalues.len();
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let d = divided_difference(f, eigenvalues[i], eigenvalues[j])?;
            l[(i, j)] = d;
            l[(j, i)] = d;
        }
    }
    Ok(l)
}

fn positive_spectrum(x: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let d = eigh(x)?;
    if let Some(&bad) = d.eigenvalues.iter().find(|&&l| l <= 0.0) {
        return Err(Error::NonPositiveEigenvalue(bad));
    }
    Ok(d)
}

/// `f(x) = U diag(f(λ)) U*` for `x` with spectrum in `(0, ∞)`.
pub fn apply_univariate<F: ScalarFunction + ?Sized>(f: &F, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let d = positive_spectrum(x)?;
    Ok(d.map(|l| f.value(l)))
}

/// The Fréchet differential `df(x)` of the matrix function `x ↦ f(x)` at a
/// positive definite `x`, held as the eigenbasis of `x` and the Löwner matrix.
///
/// In that basis the differential is Hadamard multiplication by the Löwner
/// matrix; its inverse is entry-wise division.
#[derive(Clone, Debug)]
pub struct FrechetDifferential {
    spectrum: SpectralDecomposition,
    loewner: DMatrix<f64>,
}

impl FrechetDifferential {
    pub fn new<F: ScalarFunction + ?Sized>(f: &F, x: &HermitianMatrix) -> Result<Self> {
        let spectrum = positive_spectrum(x)?;
        let loewner = loewner_matrix(f, &spectrum.eigenvalues)?;
        Ok(Self { spectrum, loewner })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn loewner(&self) -> &DMatrix<f64> {
        &self.loewner
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    fn check(&self, h: &CMat) -> Result<()> {
        let n = self.dim();
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h.nrows() });
        }
        Ok(())
    }

    fn to_eigenbasis(&self, h: &CMat) -> CMat {
        let u = &self.spectrum.eigenvectors;
        u.adjoint() * h * u
    }

    fn from_eigenbasis(&self, h: &CMat) -> CMat {
        let u = &self.spectrum.eigenvectors;
        u * h * u.adjoint()
    }

    /// `U [(U* h U) ∘ L] U*`.
    pub fn apply(&self, h: &CMat) -> Result<CMat> {
        self.check(h)?;
        let mut hat = self.to_eigenbasis(h);
        hat.zip_apply(&self.loewner.map(|l| Complex64::new(l, 0.0)), |a, l| *a *= l);
        Ok(self.from_eigenbasis(&hat))
    }

    pub fn apply_inverse(&self, h: &CMat) -> Result<CMat> {
        self.check(h)?;
        self.check_invertible()?;
        let mut hat = self.to_eigenbasis(h);
        hat.zip_apply(&self.loewner.map(|l| Complex64::new(l, 0.0)), |a, l| *a /= l);
        Ok(self.from_eigenbasis(&hat))
    }

    pub fn check_invertible(&self) -> Result<()> {
        let smallest = self.loewner.iter().copied().fold(f64::INFINITY, f64::min);
        if smallest < INVERSE_FLOOR {
            return Err(Error::NearSingularDifferential(smallest));
        }
        Ok(())
    }

    /// `Tr h* df(x) h = Σ |ĥ_ij|² [λ_i, λ_j]_f`.
    pub fn quadratic_form(&self, h: &CMat) -> Result<f64> {
        self.check(h)?;
        let hat = self.to_eigenbasis(h);
        Ok(hat.iter().zip(self.loewner.iter()).map(|(a, l)| a.norm_sqr() * l).sum())
    }

    /// `Tr h* df(x)^{-1} h`.
    pub fn inverse_quadratic_form(&self, h: &CMat) -> Result<f64> {
        self.check(h)?;
        self.check_invertible()?;
        let hat = self.to_eigenbasis(h);
        Ok(hat.iter().zip(self.loewner.iter()).map(|(a, l)| a.norm_sqr() / l).sum())
    }
}

pub fn frechet_diff<F: ScalarFunction + ?Sized>(f: &F, x: &HermitianMatrix, h: &CMat) -> Result<CMat> {
    FrechetDifferential::new(f, x)?.apply(h)
}

pub fn frechet_diff_inverse<F: ScalarFunction + ?Sized>(
    f: &F,
    x: &HermitianMatrix,
    h: &CMat,
) -> Result<CMat> {
    FrechetDifferential::new(f, x)?.apply_inverse(h)
}

fn materialize(n: usize, map: impl Fn(&CMat) -> Result<CMat>) -> Result<Superoperator> {
    let dim = n * n;
    let mut matrix = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut basis = nalgebra::DVector::zeros(dim);
        basis[col] = Complex64::new(1.0, 0.0);
        let image = map(&unvectorize(&basis, n)?)?;
        matrix.set_column(col, &vectorize(&image));
    }
    Superoperator::new(n, matrix)
}

/// `df(x)` as a dense `n² × n²` superoperator, built column by column from
/// its action on matrix units.
pub fn frechet_superop<F: ScalarFunction + ?Sized>(f: &F, x: &HermitianMatrix) -> Result<Superoperator> {
    let d = FrechetDifferential::new(f, x)?;
    materialize(x.dim(), |h| d.apply(h))
}

pub fn frechet_inverse_superop<F: ScalarFunction + ?Sized>(
    f: &F,
    x: &HermitianMatrix,
) -> Result<Superoperator> {
    let d = FrechetDifferential::new(f, x)?;
    d.check_invertible()?;
    materialize(x.dim(), |h| d.apply_inverse(h))
}
