//! Conjugate Bayesian estimators.
//!
//! Both use the Gamma prior on β, whose posterior mean is
//! `β̂ = (d + nα) / (e + Σxᵢ⁻¹)`, and differ in the shape prior.
//!
//! BL1 uses [`ShapePriorABC`]. Its posterior is of the same family with
//! `log â = log a + Σ log xᵢ`, `b̂ = b + n`, `ĉ = c + n`, and the Laplace mean
//! `Ψ⁻¹((−log â + ĉ log β̂) / b̂)` is iterated with β̂ substituted from the
//! scale posterior.
//!
//! BL2 uses [`PolyShapePrior`] on the ML2 surrogate; the posterior weights are
//! `w̃ᵢ = wᵢ + kᵢ` and the Laplace mean is `−w̃₂/w̃₁`.

use super::{
    guard_step, iterate_shape, mm::fit_mm, quad_approx_coeffs, ConvergenceConfig, Estimator, FitReport,
    LaplaceSummary, PolyShapePrior, ScaleGammaPrior, ShapePriorABC, SufficientStats,
};
use crate::distribution::InvGammaParams;
use crate::error::Result;
use crate::specfun::inv_digamma;

/// One BL1 step given the *posterior* shape hyperparameters.
pub fn bl1_update(
    stats: &SufficientStats,
    shape_post: &ShapePriorABC,
    scale: &ScaleGammaPrior,
    alpha: f64,
) -> Result<f64> {
    let n = stats.n() as f64;
    let log_e_hat = (scale.e() + stats.sum_inv()).ln();
    let arg =
        (-shape_post.log_a() + shape_post.c() * ((scale.d() + n * alpha).ln() - log_e_hat)) / shape_post.b();
    inv_digamma(arg)
}

pub fn fit_bl1(
    stats: &SufficientStats,
    shape: &ShapePriorABC,
    scale: &ScaleGammaPrior,
    cfg: &ConvergenceConfig,
) -> Result<FitReport> {
    let init = fit_mm(stats)?.params.alpha();
    let post = shape.posterior(stats);
    let it = iterate_shape(init, cfg, |a| bl1_update(stats, &post, scale, a))?;

    let beta = scale.posterior(stats, it.alpha).beta_hat;
    Ok(FitReport {
        estimator: Estimator::Bl1,
        params: InvGammaParams::new(it.alpha, beta)?,
        iterations: it.iterations,
        converged: it.converged,
        residual: it.residual,
        posterior: Some(LaplaceSummary {
            mean: it.alpha,
            precision: post.laplace_precision(it.alpha),
        }),
    })
}

/// Unnormalized BL1 log-posterior of the shape on a grid, for a fixed scale
/// estimate `beta_hat`:
/// `(−α−1) log â + αĉ log β̂ − b̂ log Γ(α)`.
pub fn bl1_log_posterior_curve(
    stats: &SufficientStats,
    shape: &ShapePriorABC,
    beta_hat: f64,
    alphas: &[f64],
) -> Vec<f64> {
    let post = shape.posterior(stats);
    alphas.iter().map(|&a| post.log_density(a, beta_hat)).collect()
}

/// One BL2 step, `−w̃₂/w̃₁` at the surrogate expanded around `alpha`, guarded.
pub fn bl2_update(stats: &SufficientStats, poly: &PolyShapePrior, alpha: f64) -> f64 {
    let post = poly.posterior(&quad_approx_coeffs(stats, alpha));
    guard_step(alpha, -post.w2 / post.w1)
}

pub fn fit_bl2(
    stats: &SufficientStats,
    poly: &PolyShapePrior,
    scale: &ScaleGammaPrior,
    cfg: &ConvergenceConfig,
) -> Result<FitReport> {
    let init = fit_mm(stats)?.params.alpha();
    let mut last = *poly;
    let it = iterate_shape(init, cfg, |a| {
        last = poly.posterior(&quad_approx_coeffs(stats, a));
        Ok(guard_step(a, -last.w2 / last.w1))
    })?;

    let mean = last.laplace_mean()?;
    let beta = scale.posterior(stats, it.alpha).beta_hat;
    Ok(FitReport {
        estimator: Estimator::Bl2,
        params: InvGammaParams::new(it.alpha, beta)?,
        iterations: it.iterations,
        converged: it.converged,
        residual: it.residual,
        posterior: Some(LaplaceSummary {
            mean,
            precision: last.laplace_precision(it.alpha),
        }),
    })
}
