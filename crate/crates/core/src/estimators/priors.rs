//! Conjugate priors for the scale and the shape.
//!
//! Each prior's `posterior` method returns a value of the same type, which is
//! what conjugacy means here: the data only move the hyperparameters.

use serde::Serialize;

use super::{QuadLogLikApprox, SufficientStats};
use crate::error::{Error, Result};
use crate::specfun::{inv_digamma, ln_gamma_pos, trigamma_pos};

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Gamma prior on the scale β with shape `d` and rate `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleGammaPrior {
    d: f64,
    e: f64,
}

impl Default for ScaleGammaPrior {
    fn default() -> Self {
        Self { d: 0.01, e: 0.01 }
    }
}

/// Posterior of β given the shape: `Gamma(d̂, ê)` with mean `beta_hat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalePosterior {
    pub d_hat: f64,
    pub e_hat: f64,
    pub beta_hat: f64,
}

impl ScaleGammaPrior {
    pub fn new(d: f64, e: f64) -> Result<Self> {
        positive("d", d)?;
        positive("e", e)?;
        Ok(Self { d, e })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    /// `d̂ = d + nα`, `ê = e + Σ xᵢ⁻¹`, `β̂ = d̂ / ê`.
    pub fn posterior(&self, stats: &SufficientStats, alpha: f64) -> ScalePosterior {
        let d_hat = self.d + stats.n() as f64 * alpha;
        let e_hat = self.e + stats.sum_inv();
        ScalePosterior {
            d_hat,
            e_hat,
            beta_hat: d_hat / e_hat,
        }
    }
}

/// Shape prior `p(α) ∝ a^(−α−1) β^(αc) / Γ(α)^b`.
///
/// `a` is stored as `log a`: after observing data it becomes
/// `a · Πxᵢ`, which overflows for any realistic sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapePriorABC {
    log_a: f64,
    b: f64,
    c: f64,
}

impl Default for ShapePriorABC {
    fn default() -> Self {
        Self {
            log_a: 0.0,
            b: 0.01,
            c: 0.01,
        }
    }
}

impl ShapePriorABC {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        positive("a", a)?;
        Self::from_log_a(a.ln(), b, c)
    }

    pub fn from_log_a(log_a: f64, b: f64, c: f64) -> Result<Self> {
        finite("log_a", log_a)?;
        positive("b", b)?;
        positive("c", c)?;
        Ok(Self { log_a, b, c })
    }

    pub fn log_a(&self) -> f64 {
        self.log_a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `log â = log a + Σ log xᵢ`, `b̂ = b + n`, `ĉ = c + n`.
    pub fn posterior(&self, stats: &SufficientStats) -> Self {
        let n = stats.n() as f64;
        Self {
            log_a: self.log_a + stats.sum_log(),
            b: self.b + n,
            c: self.c + n,
        }
    }

    /// Unnormalized log density at `alpha` for a given scale.
    pub fn log_density(&self, alpha: f64, beta: f64) -> f64 {
        (-alpha - 1.0) * self.log_a + alpha * self.c * beta.ln() - self.b * ln_gamma_pos(alpha)
    }

    /// Mode of the density, which is also the mean of its Laplace
    /// approximation: `Ψ⁻¹((−log a + c log β) / b)`.
    pub fn laplace_mean(&self, beta: f64) -> Result<f64> {
        inv_digamma((-self.log_a + self.c * beta.ln()) / self.b)
    }

    /// Precision of the Laplace approximation at `mean`, `b Ψ₁(mean)`.
    pub fn laplace_precision(&self, mean: f64) -> f64 {
        self.b * trigamma_pos(mean)
    }
}

/// Shape prior `log p(α) = w₀ + w₁ α + w₂ log α`, conjugate to the
/// quadratic-in-log likelihood surrogate. `w₁ = w₂ = 0` is flat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyShapePrior {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
}

impl Default for PolyShapePrior {
    fn default() -> Self {
        Self {
            w0: 1.0,
            w1: 0.0,
            w2: 0.0,
        }
    }
}

impl PolyShapePrior {
    pub fn new(w0: f64, w1: f64, w2: f64) -> Result<Self> {
        finite("w0", w0)?;
        finite("w1", w1)?;
        finite("w2", w2)?;
        Ok(Self { w0, w1, w2 })
    }

    pub fn flat() -> Self {
        Self::default()
    }

    /// `w̃ᵢ = wᵢ + kᵢ`
    pub fn posterior(&self, approx: &QuadLogLikApprox) -> Self {
        Self {
            w0: self.w0 + approx.k0,
            w1: self.w1 + approx.k1,
            w2: self.w2 + approx.k2,
        }
    }

    pub fn log_density(&self, alpha: f64) -> f64 {
        self.w0 + self.w1 * alpha + self.w2 * alpha.ln()
    }

    /// `−w₂ / w₁`, when the density has an interior maximum.
    pub fn laplace_mean(&self) -> Result<f64> {
        if self.w1 < 0.0 && self.w2 > 0.0 {
            Ok(-self.w2 / self.w1)
        } else {
            Err(Error::InvalidPosterior {
                w1: self.w1,
                w2: self.w2,
            })
        }
    }

    /// `w₂ / α²`
    pub fn laplace_precision(&self, alpha: f64) -> f64 {
        self.w2 / (alpha * alpha)
    }
}
