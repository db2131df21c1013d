use serde::{Deserialize, Serialize};

use super::canonical::{canonical_f, canonical_fprime, canonical_phi_unchecked, CanonicalMeasure};
use crate::spectral::ScalarFunction;
use crate::{Error, Result};

/// A declared representing function φ with exact evaluators for φ, `f = φ'`
/// and `f'`.
///
/// JSON: `{"kind":"affine","c0":..,"c1":..}`, `{"kind":"xlogx"}`,
/// `{"kind":"power","p":..}` or
/// `{"kind":"canonical","beta":..,"atoms":[[lambda,weight],..],"a":..,"b":..}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalarFunctionSpec {
    /// `φ(t) = c0 + c1 t`.
    Affine { c0: f64, c1: f64 },
    /// `φ(t) = t log t`.
    #[serde(rename = "xlogx")]
    StandardEntropy,
    /// `φ(t) = t^p`.
    Power { p: f64 },
    Canonical(CanonicalMeasure),
}

/// Whether membership of a spec is asserted by known results or only a
/// candidate for the numerical checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    KnownMember,
    Candidate,
}

impl ScalarFunctionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Affine { c0, c1 } if !(c0.is_finite() && c1.is_finite()) => {
                Err(Error::Invalid("affine coefficients must be finite".into()))
            }
            Self::Power { p } if !p.is_finite() => Err(Error::Invalid("power must be finite".into())),
            Self::Canonical(m) => m.validate(),
            _ => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function specs always serialize")
    }

    pub fn label(&self) -> String {
        match self {
            Self::Affine { c0, c1 } => format!("affine(c0={c0}, c1={c1})"),
            Self::StandardEntropy => "xlogx".into(),
            Self::Power { p } => format!("power(p={p})"),
            Self::Canonical(m) => format!("canonical(beta={}, atoms={})", m.beta, m.atoms.len()),
        }
    }

    pub fn is_affine(&self) -> bool {
        match self {
            Self::Affine { .. } => true,
            Self::StandardEntropy => false,
            Self::Power { p } => *p == 0.0 || *p == 1.0,
            Self::Canonical(m) => m.beta == 0.0 && m.atoms.is_empty(),
        }
    }

    pub fn classification(&self) -> Classification {
        match self {
            Self::Power { p } if !(1.0..=2.0).contains(p) => Classification::Candidate,
            _ => Classification::KnownMember,
        }
    }

    /// Fails unless `f = φ'` is strictly increasing on `(0, ∞)`, which the
    /// kernels and the membership checkers require.
    pub fn require_increasing(&self) -> Result<()> {
        if self.is_affine() {
            return Err(Error::DegenerateKernel);
        }
        match self {
            Self::Power { p } if *p > 0.0 && *p < 1.0 => Err(Error::NotIncreasing(format!(
                "t^{p} is concave, its derivative decreases"
            ))),
            _ => Ok(()),
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        match self {
            Self::Affine { c0, c1 } => c0 + c1 * t,
            Self::StandardEntropy => t * t.ln(),
            Self::Power { p } => t.powf(*p),
            Self::Canonical(m) => canonical_phi_unchecked(m, t),
        }
    }

    /// `f = φ'`.
    pub fn f(&self, t: f64) -> f64 {
        match self {
            Self::Affine { c1, .. } => *c1,
            Self::StandardEntropy => 1.0 + t.ln(),
            Self::Power { p } => {
                if *p == 0.0 {
                    0.0
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            Self::Canonical(m) => canonical_f(m, t),
        }
    }

    /// `f' = φ''`.
    pub fn fprime(&self, t: f64) -> f64 {
        match self {
            Self::Affine { .. } => 0.0,
            Self::StandardEntropy => 1.0 / t,
            Self::Power { p } => {
                let c = p * (p - 1.0);
                if c == 0.0 {
                    0.0
                } else {
                    c * t.powf(p - 2.0)
                }
            }
            Self::Canonical(m) => canonical_fprime(m, t),
        }
    }

    /// `f'' = φ'''`.
    pub fn fsecond(&self, t: f64) -> f64 {
        match self {
            Self::Affine { .. } => 0.0,
            Self::StandardEntropy => -1.0 / (t * t),
            Self::Power { p } => {
                let c = p * (p - 1.0) * (p - 2.0);
                if c == 0.0 {
                    0.0
                } else {
                    c * t.powf(p - 3.0)
                }
            }
            Self::Canonical(m) => {
                -m.atoms.iter().map(|a| a.weight * (1.0 + a.lambda) / (t + a.lambda).powi(2)).sum::<f64>()
            }
        }
    }

    /// φ viewed as a function with derivative `f`.
    pub fn phi_role(&self) -> PhiRole<'_> {
        PhiRole(self)
    }

    /// `f = φ'` viewed as a function with derivative `f'`; this is the role in
    /// which Löwner matrices and Fréchet differentials are formed.
    pub fn derivative_role(&self) -> DerivativeRole<'_> {
        DerivativeRole(self)
    }

    pub fn fprime_role(&self) -> FprimeRole<'_> {
        FprimeRole(self)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PhiRole<'a>(&'a ScalarFunctionSpec);

#[derive(Clone, Copy, Debug)]
pub struct DerivativeRole<'a>(&'a ScalarFunctionSpec);

#[derive(Clone, Copy, Debug)]
pub struct FprimeRole<'a>(&'a ScalarFunctionSpec);

impl ScalarFunction for PhiRole<'_> {
    fn value(&self, t: f64) -> f64 {
        self.0.phi(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        self.0.f(t)
    }
}

impl ScalarFunction for DerivativeRole<'_> {
    fn value(&self, t: f64) -> f64 {
        self.0.f(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        self.0.fprime(t)
    }
}

impl ScalarFunction for FprimeRole<'_> {
    fn value(&self, t: f64) -> f64 {
        self.0.fprime(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        self.0.fsecond(t)
    }
}
