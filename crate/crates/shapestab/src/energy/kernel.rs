use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Interaction kernel family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `|x-y|^β`.
    Attractive,
    /// `|x-y|^{α-N}`.
    Riesz,
    /// `|x-y|^{-(N+s)}` on `E × E^c`.
    FracPerimeter,
    /// `(|x-y| ∧ M^{1/β})^β`.
    TruncatedAttractive,
}

/// A kernel family with its exponent and optional truncation level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub exponent: f64,
    pub truncation: Option<f64>,
}

impl KernelSpec {
    pub fn attractive(beta: f64) -> Result<Self> {
        Self::new(KernelKind::Attractive, beta, None, 0)
    }

    pub fn riesz(alpha: f64, n: usize) -> Result<Self> {
        Self::new(KernelKind::Riesz, alpha, None, n)
    }

    pub fn frac_perimeter(s: f64) -> Result<Self> {
        Self::new(KernelKind::FracPerimeter, s, None, 0)
    }

    pub fn truncated(beta: f64, m: f64) -> Result<Self> {
        Self::new(KernelKind::TruncatedAttractive, beta, Some(m), 0)
    }

    /// Validates the exponent; `n` is only consulted for the Riesz range.
    pub fn new(kind: KernelKind, exponent: f64, truncation: Option<f64>, n: usize) -> Result<Self> {
        let ok = match kind {
            KernelKind::Attractive => exponent > 0.0,
            KernelKind::Riesz => exponent > 0.0 && exponent < n as f64,
            KernelKind::FracPerimeter => exponent > 0.0 && exponent < 1.0,
            KernelKind::TruncatedAttractive => {
                exponent > 0.0 && truncation.is_some_and(|m| m > 0.0)
            }
        };
        if !ok || !exponent.is_finite() {
            return Err(domain(format!(
                "invalid {kind:?} kernel: exponent {exponent}, truncation {truncation:?}"
            )));
        }
        Ok(Self {
            kind,
            exponent,
            truncation,
        })
    }

    /// Truncation length `M^{1/β}`.
    pub fn cutoff(&self) -> Option<f64> {
        self.truncation.map(|m| m.powf(1.0 / self.exponent))
    }
}

/// Radial profile `h(s)` of an interaction kernel that enters as
/// `∫∫ f(x) g(y) h(|x-y|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radial {
    /// `s^p` with `p > -N`.
    Power(f64),
    /// `min(s, L)^β`.
    Capped { beta: f64, cutoff: f64 },
}

impl Radial {
    pub fn attractive(beta: f64) -> Self {
        Radial::Power(beta)
    }

    pub fn riesz(alpha: f64, n: usize) -> Self {
        Radial::Power(alpha - n as f64)
    }

    pub fn from_spec(spec: &KernelSpec, n: usize) -> Self {
        match spec.kind {
            KernelKind::Attractive => Radial::Power(spec.exponent),
            KernelKind::Riesz => Radial::Power(spec.exponent - n as f64),
            KernelKind::FracPerimeter => Radial::Power(-(n as f64) - spec.exponent),
            KernelKind::TruncatedAttractive => Radial::Capped {
                beta: spec.exponent,
                cutoff: spec.cutoff().unwrap(),
            },
        }
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Radial::Power(p) => s.powf(p),
            Radial::Capped { beta, cutoff } => s.min(cutoff).powf(beta),
        }
    }

    /// `h(s) s^{N-1}`, formed as one power so tiny `s` cannot overflow.
    #[inline]
    pub fn eval_shell(&self, n: usize, s: f64) -> f64 {
        match *self {
            Radial::Power(p) => s.powf(p + n as f64 - 1.0),
            _ => self.eval(s) * s.powi(n as i32 - 1),
        }
    }

    /// `H(x) = ∫_0^x h(s) s^{N-1} ds`.
    pub fn primitive(&self, n: usize, x: f64) -> f64 {
        let nf = n as f64;
        match *self {
            Radial::Power(p) => x.powf(p + nf) / (p + nf),
            Radial::Capped { beta, cutoff } => {
                if x <= cutoff {
                    x.powf(beta + nf) / (beta + nf)
                } else {
                    cutoff.powf(beta + nf) / (beta + nf)
                        + cutoff.powf(beta) * (x.powf(nf) - cutoff.powf(nf)) / nf
                }
            }
        }
    }

    /// Interior point where `h` is not smooth.
    pub fn kink(&self) -> Option<f64> {
        match *self {
            Radial::Power(_) => None,
            Radial::Capped { cutoff, .. } => Some(cutoff),
        }
    }
}
