//! The matrix φ-entropy `H_φ(Z) = E[Tr φ(Z)] - Tr φ(E[Z])` over finite ensembles.

use serde::{Deserialize, Serialize};

use crate::phi::ScalarFunctionSpec;
use crate::spectral::{eigh, HermitianMatrix};
use crate::{Error, Result};

/// Allowed deviation of the probabilities' sum from one.
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub p: f64,
    pub matrix: HermitianMatrix,
}

/// A finite distribution over positive definite matrices of a common
/// dimension. JSON: `{"outcomes":[{"p":0.5,"matrix":{...}}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct MatrixEnsemble {
    outcomes: Vec<Outcome>,
}

#[derive(Deserialize)]
struct RawEnsemble {
    outcomes: Vec<Outcome>,
}

impl TryFrom<RawEnsemble> for MatrixEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        MatrixEnsemble::new(raw.outcomes)
    }
}

impl MatrixEnsemble {
    pub fn new(outcomes: Vec<Outcome>) -> Result<Self> {
        let first = outcomes.first().ok_or_else(|| Error::Invalid("ensemble has no outcomes".into()))?;
        let n = first.matrix.dim();
        let mut total = 0.0;
        for o in &outcomes {
            if !(o.p > 0.0 && o.p <= 1.0) {
                return Err(Error::Invalid(format!("probability {} outside (0, 1]", o.p)));
            }
            if o.matrix.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: o.matrix.dim() });
            }
            let min = o.matrix.min_eigenvalue()?;
            if min <= 0.0 {
                return Err(Error::NonPositiveEigenvalue(min));
            }
            total += o.p;
        }
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::Invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { outcomes })
    }

    pub fn from_pairs(pairs: Vec<(f64, HermitianMatrix)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(p, matrix)| Outcome { p, matrix }).collect())
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].matrix.dim()
    }

    /// `E[Z] = Σ p_k Z_k`.
    pub fn mean(&self) -> HermitianMatrix {
        let mut acc = self.outcomes[0].matrix.scale(self.outcomes[0].p);
        for o in &self.outcomes[1..] {
            acc = acc.add(&o.matrix.scale(o.p)).expect("dimensions checked at construction");
        }
        acc
    }

    /// Conjugates every outcome by the same unitary.
    pub fn conjugate_by(&self, u: &crate::CMat) -> Result<Self> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| Ok(Outcome { p: o.p, matrix: o.matrix.conjugate_by(u)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(outcomes)
    }
}

/// `Tr φ(a) = Σ φ(λ_i)` over the spectrum of a positive definite `a`.
pub fn trace_phi(spec: &ScalarFunctionSpec, a: &HermitianMatrix) -> Result<f64> {
    if let ScalarFunctionSpec::Affine { c0, c1 } = spec {
        return Ok(c0 * a.dim() as f64 + c1 * a.trace());
    }
    let d = eigh(a)?;
    if let Some(&bad) = d.eigenvalues.iter().find(|&&l| l <= 0.0) {
        return Err(Error::NonPositiveEigenvalue(bad));
    }
    Ok(d.eigenvalues.iter().map(|&l| spec.phi(l)).sum())
}

pub fn matrix_phi_entropy(spec: &ScalarFunctionSpec, z: &MatrixEnsemble) -> Result<f64> {
    let mut expected = 0.0;
    for o in z.outcomes() {
        expected += o.p * trace_phi(spec, &o.matrix)?;
    }
    Ok(expected - trace_phi(spec, &z.mean())?)
}
