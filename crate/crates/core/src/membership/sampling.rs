use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::phi::CanonicalMeasure;
use crate::spectral::{eigh, HermitianMatrix};
use crate::CMat;

/// Spectral window of sampled positive definite matrices.
pub const EIGEN_RANGE: (f64, f64) = (1e-2, 1e2);

pub const DEFAULT_COND_CAP: f64 = 1e3;

/// Shift added to `B B*` before clamping.
const GRAM_SHIFT: f64 = 1e-3;

pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let g = complex_gaussian(n, n, rng);
    HermitianMatrix::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized by construction")
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    eigh(&random_hermitian(n, rng)).expect("jacobi converges on gaussian input").eigenvectors
}

/// Random positive definite matrix with spectrum in [`EIGEN_RANGE`] and
/// condition number at most `cond_cap`.
pub fn sample_pd<R: Rng + ?Sized>(n: usize, rng: &mut R, cond_cap: f64) -> HermitianMatrix {
    sample_pd_in(n, rng, EIGEN_RANGE.0, EIGEN_RANGE.1, cond_cap)
}

/// `B B* + εI` from a complex Gaussian `B`, rescaled so the top eigenvalue is
/// log-uniform in `[lo, hi]`, then clamped into `[max(lo, top/cond_cap), hi]`.
pub fn sample_pd_in<R: Rng + ?Sized>(n: usize, rng: &mut R, lo: f64, hi: f64, cond_cap: f64) -> HermitianMatrix {
    assert!(n >= 1 && lo > 0.0 && hi >= lo && cond_cap >= 1.0);
    let b = complex_gaussian(n, n, rng);
    let gram = HermitianMatrix::new(&b * b.adjoint() + CMat::identity(n, n).scale(GRAM_SHIFT))
        .unwrap_or_else(|_| HermitianMatrix::identity(n));
    let d = eigh(&gram).expect("jacobi converges on gram matrices");
    let top = (rng.gen::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp();
    let scale = top / d.max();
    let floor = lo.max(top / cond_cap);
    let values: Vec<f64> = d.eigenvalues.iter().map(|&l| (l * scale).clamp(floor, hi)).collect();
    HermitianMatrix::from_spectrum(&values, &d.eigenvectors)
}

/// Random discrete measure for the canonical family: up to five atoms with
/// `λ` log-uniform in `[1e-3, 1e2]` (or zero), weights in `[0.1, 2]`, and
/// `β`, `a`, `b` drawn from small ranges.
pub fn random_canonical_measure<R: Rng + ?Sized>(rng: &mut R) -> CanonicalMeasure {
    let beta = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) };
    let count = rng.gen_range(1..=5);
    let atoms = (0..count)
        .map(|_| {
            let lambda = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(1e-3f64.ln()..1e2f64.ln()).exp() };
            (lambda, rng.gen_range(0.1..2.0))
        })
        .collect();
    CanonicalMeasure::new(beta, atoms, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        .expect("parameters are in range")
}
