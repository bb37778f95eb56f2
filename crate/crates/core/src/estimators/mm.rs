use super::{Estimator, FitReport, SufficientStats};
use crate::distribution::InvGammaParams;
use crate::error::{Error, Result};

/// Invert the moment map: `α = μ²/v + 2`, `β = μ(μ²/v + 1)`.
pub fn params_from_moments(mean: f64, var: f64) -> Result<InvGammaParams> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "mean",
            value: mean,
            reason: "must be positive and finite",
        });
    }
    if var == 0.0 {
        return Err(Error::DegenerateSample);
    }
    if !(var > 0.0 && var.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "var",
            value: var,
            reason: "must be positive and finite",
        });
    }
    let r = mean * mean / var;
    InvGammaParams::new(r + 2.0, mean * (r + 1.0))
}

/// Method-of-moments fit. Always reports `α̂ > 2`.
pub fn fit_mm(stats: &SufficientStats) -> Result<FitReport> {
    let (mean, var) = stats.moment_pair()?;
    Ok(FitReport {
        estimator: Estimator::Mm,
        params: params_from_moments(mean, var)?,
        iterations: 0,
        converged: true,
        residual: 0.0,
        posterior: None,
    })
}
