//! The five fitting algorithms.
//!
//! | name | method |
//! |------|--------|
//! | MM   | method of moments, closed form |
//! | ML1  | maximum likelihood, fixed point through the inverse digamma |
//! | ML2  | maximum likelihood, Newton-like step on a `k₀ + k₁α + k₂ log α` surrogate |
//! | BL1  | conjugate Bayesian shape prior {a, b, c}, Laplace mean |
//! | BL2  | conjugate prior on the surrogate {w₀, w₁, w₂}, Laplace mean |
//!
//! Every iterative method starts from the MM shape and stops when the
//! relative change in α drops to `rel_tol`. β is computed once, after α.

mod bayes;
mod ml;
mod mm;
mod priors;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use bayes::{bl1_log_posterior_curve, bl1_update, bl2_update, fit_bl1, fit_bl2};
pub use ml::{
    fit_ml1, fit_ml2, log_likelihood, ml1_update, ml2_update, ml_beta_given_alpha, profile_log_likelihood,
    quad_approx_coeffs, QuadLogLikApprox,
};
pub use mm::{fit_mm, params_from_moments};
pub use priors::{PolyShapePrior, ScaleGammaPrior, ScalePosterior, ShapePriorABC};
pub use stats::SufficientStats;

use crate::distribution::InvGammaParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Estimator {
    #[serde(rename = "MM")]
    Mm,
    #[serde(rename = "ML1")]
    Ml1,
    #[serde(rename = "ML2")]
    Ml2,
    #[serde(rename = "BL1")]
    Bl1,
    #[serde(rename = "BL2")]
    Bl2,
}

impl Estimator {
    pub const ALL: [Estimator; 5] = [
        Estimator::Mm,
        Estimator::Ml1,
        Estimator::Ml2,
        Estimator::Bl1,
        Estimator::Bl2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Mm => "MM",
            Estimator::Ml1 => "ML1",
            Estimator::Ml2 => "ML2",
            Estimator::Bl1 => "BL1",
            Estimator::Bl2 => "BL2",
        }
    }

    pub fn is_bayesian(self) -> bool {
        matches!(self, Estimator::Bl1 | Estimator::Bl2)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownEstimator(pub String);

impl fmt::Display for UnknownEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown estimator '{}' (expected one of mm, ml1, ml2, bl1, bl2)",
            self.0
        )
    }
}

impl std::error::Error for UnknownEstimator {}

impl FromStr for Estimator {
    type Err = UnknownEstimator;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownEstimator(s.to_string()))
    }
}

/// Stopping rule for the iterative estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            max_iter: 1000,
        }
    }
}

impl ConvergenceConfig {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: rel_tol,
                reason: "must be positive and finite",
            });
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iter",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(Self { rel_tol, max_iter })
    }
}

/// Gaussian (Laplace) summary of the shape posterior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceSummary {
    pub mean: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub estimator: Estimator,
    pub params: InvGammaParams,
    pub iterations: usize,
    pub converged: bool,
    /// Relative change in α on the last iteration.
    pub residual: f64,
    pub posterior: Option<LaplaceSummary>,
}

/// All hyperparameters used by the Bayesian estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Hyperparams {
    pub shape: ShapePriorABC,
    pub scale: ScaleGammaPrior,
    pub poly: PolyShapePrior,
}

/// Run `estimator` on `stats`.
pub fn fit(
    estimator: Estimator,
    stats: &SufficientStats,
    hyper: &Hyperparams,
    cfg: &ConvergenceConfig,
) -> Result<FitReport> {
    match estimator {
        Estimator::Mm => fit_mm(stats),
        Estimator::Ml1 => fit_ml1(stats, cfg),
        Estimator::Ml2 => fit_ml2(stats, cfg),
        Estimator::Bl1 => fit_bl1(stats, &hyper.shape, &hyper.scale, cfg),
        Estimator::Bl2 => fit_bl2(stats, &hyper.poly, &hyper.scale, cfg),
    }
}

/// Outcome of [`iterate_shape`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShapeIteration {
    pub alpha: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

/// Apply `update` to the shape until the relative change is at most
/// `rel_tol` or `max_iter` updates have been made. On exhaustion the last
/// iterate is returned with `converged == false`.
pub(crate) fn iterate_shape<F>(init: f64, cfg: &ConvergenceConfig, mut update: F) -> Result<ShapeIteration>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut alpha = init;
    let mut residual = f64::INFINITY;
    for it in 1..=cfg.max_iter {
        let next = update(alpha)?;
        residual = ((next - alpha) / alpha).abs();
        alpha = next;
        if residual <= cfg.rel_tol {
            return Ok(ShapeIteration {
                alpha,
                iterations: it,
                converged: true,
                residual,
            });
        }
    }
    Ok(ShapeIteration {
        alpha,
        iterations: cfg.max_iter,
        converged: false,
        residual,
    })
}

/// Floor used by [`guard_step`] when a proposal is not positive.
const STEP_FLOOR: f64 = 1e-8;

/// The surrogate-based updates can propose a non-positive or non-finite
/// shape far from the optimum. Such proposals are replaced by the geometric
/// mean of the previous iterate and `max(proposal, 1e-8)`.
pub(crate) fn guard_step(prev: f64, proposal: f64) -> f64 {
    if proposal > 0.0 && proposal.is_finite() {
        proposal
    } else {
        // a rejected proposal is <= 0 or non-finite, so max(proposal, floor) = floor
        (prev * STEP_FLOOR).sqrt()
    }
}
