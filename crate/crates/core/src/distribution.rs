//! The Inverse Gamma distribution IG(α, β) with density
//!
//! ```text
//!               β^α
//! f(x|α, β) = ------ x^(-α-1) exp(-β/x),   x > 0
//!              Γ(α)
//! ```
//!
//! α is the shape and β the scale. If `g ~ Gamma(α, rate 1)` then
//! `β / g ~ IG(α, β)`, which is how [`InvGammaParams::sample`] draws variates.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Moment, Result};
use crate::specfun::{digamma_pos, ln_gamma_pos};

/// Shape and scale of an Inverse Gamma distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvGammaParams {
    alpha: f64,
    beta: f64,
}

impl InvGammaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_param("alpha", alpha)?;
        check_param("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Log density at `x`.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain { func: "log_pdf", x });
        }
        let (a, b) = (self.alpha, self.beta);
        Ok(a * b.ln() - ln_gamma_pos(a) - (a + 1.0) * x.ln() - b / x)
    }

    /// `β / (α - 1)`, defined for `α > 1`.
    pub fn mean(&self) -> Result<f64> {
        if self.alpha > 1.0 {
            Ok(self.beta / (self.alpha - 1.0))
        } else {
            Err(Error::UndefinedMoment {
                moment: Moment::Mean,
                alpha: self.alpha,
            })
        }
    }

    /// `β² / ((α - 1)² (α - 2))`, defined for `α > 2`.
    pub fn variance(&self) -> Result<f64> {
        if self.alpha > 2.0 {
            let am1 = self.alpha - 1.0;
            Ok(self.beta * self.beta / (am1 * am1 * (self.alpha - 2.0)))
        } else {
            Err(Error::UndefinedMoment {
                moment: Moment::Variance,
                alpha: self.alpha,
            })
        }
    }

    /// `(mean, variance)`; fails if either is undefined.
    pub fn moments(&self) -> Result<(f64, f64)> {
        Ok((self.mean()?, self.variance()?))
    }

    /// The density maximum, `β / (α + 1)`.
    pub fn mode(&self) -> f64 {
        self.beta / (self.alpha + 1.0)
    }

    /// `E[log x] = log β − Ψ(α)`.
    pub fn expect_log_x(&self) -> f64 {
        self.beta.ln() - digamma_pos(self.alpha)
    }

    /// `E[1/x] = α / β`.
    pub fn expect_inv_x(&self) -> f64 {
        self.alpha / self.beta
    }

    /// `E[log f(x)] = (1 + α) Ψ(α) − α − log(β Γ(α))`, the negative entropy.
    pub fn expect_log_pdf(&self) -> f64 {
        let a = self.alpha;
        (1.0 + a) * digamma_pos(a) - a - self.beta.ln() - ln_gamma_pos(a)
    }

    /// Draw `n` independent variates.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = self.beta / standard_gamma(self.alpha, rng);
            // g can underflow to zero for very small shapes
            if x.is_finite() {
                return x;
            }
        }
    }
}

fn check_param(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    } else if value <= 0.0 {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    } else {
        Ok(())
    }
}

/// Unit-rate Gamma(shape) variate, Marsaglia & Tsang (2000).
///
/// Shapes below one are boosted: `G(a) = G(a + 1) · U^(1/a)`.
fn standard_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = open_unit(rng);
        return standard_gamma(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = open_unit(rng);
        let z2 = z * z;
        // squeeze first, then the exact log test
        if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Uniform on (0, 1].
#[inline]
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Slack below zero that is attributed to rounding in [`kl_divergence`],
/// relative to the magnitude of the largest term.
const KL_ROUNDING_SLACK: f64 = 1e-12;

/// `KL[p || q]` between two Inverse Gamma distributions.
///
/// With `p = IG(α, β)` and `q = IG(α̂, β̂)`:
///
/// ```text
/// KL = (α − α̂) Ψ(α) + β̂ α/β − α + α̂ log(β/β̂) + log Γ(α̂) − log Γ(α)
/// ```
///
/// Small negative results produced by cancellation are clamped to zero.
pub fn kl_divergence(p: &InvGammaParams, q: &InvGammaParams) -> Result<f64> {
    let (a, b) = (p.alpha, p.beta);
    let (ah, bh) = (q.alpha, q.beta);
    let terms = [
        (a - ah) * digamma_pos(a),
        (bh / b) * a,
        -a,
        ah * (b.ln() - bh.ln()),
        ln_gamma_pos(ah),
        -ln_gamma_pos(a),
    ];
    let kl: f64 = terms.iter().sum();
    if kl >= 0.0 {
        return Ok(kl);
    }
    let scale = terms.iter().fold(1.0_f64, |m, t| m.max(t.abs()));
    if kl >= -KL_ROUNDING_SLACK * scale {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!(
            "negative KL divergence {kl:e} for p = ({a}, {b}), q = ({ah}, {bh})"
        )))
    }
}
