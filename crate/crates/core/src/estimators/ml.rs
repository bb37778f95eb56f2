//! Maximum likelihood.
//!
//! For fixed α the likelihood is maximized by `β = nα / Σxᵢ⁻¹`; substituting
//! it leaves the profile log-likelihood in α alone:
//!
//! ```text
//! ℓ(α) = −n(α+1)·mean(log x) − n log Γ(α) + nα log α + nα log n − nα log Σxᵢ⁻¹ − nα
//! ```
//!
//! ML1 maximizes the lower bound obtained from the tangent of `α log α`,
//! giving `α ← Ψ⁻¹(log(nα) + C)` with `C = −log Σxᵢ⁻¹ − mean(log x)`.
//! ML2 maximizes the surrogate `k₀ + k₁α + k₂ log α` matched to ℓ up to
//! second order at the current α, i.e. `α ← −k₂/k₁`.

use serde::Serialize;

use super::{
    guard_step, iterate_shape, mm::fit_mm, ConvergenceConfig, Estimator, FitReport, SufficientStats,
};
use crate::distribution::InvGammaParams;
use crate::error::Result;
use crate::specfun::{digamma_pos, inv_digamma, ln_gamma_pos, trigamma_pos};

/// Log-likelihood of the data summarized by `stats`.
pub fn log_likelihood(stats: &SufficientStats, p: &InvGammaParams) -> f64 {
    let n = stats.n() as f64;
    let (a, b) = (p.alpha(), p.beta());
    -n * (a + 1.0) * stats.mean_log() - n * ln_gamma_pos(a) + n * a * b.ln() - b * stats.sum_inv()
}

/// Log-likelihood with β at its conditional maximum.
pub fn profile_log_likelihood(stats: &SufficientStats, alpha: f64) -> f64 {
    let n = stats.n() as f64;
    let a = alpha;
    -n * (a + 1.0) * stats.mean_log() - n * ln_gamma_pos(a) + n * a * a.ln() + n * a * n.ln()
        - n * a * stats.sum_inv().ln()
        - n * a
}

/// `β = nα / Σxᵢ⁻¹`
pub fn ml_beta_given_alpha(stats: &SufficientStats, alpha: f64) -> f64 {
    stats.n() as f64 * alpha / stats.sum_inv()
}

/// Local surrogate `f(α) = k₀ + k₁α + k₂ log α` of the profile
/// log-likelihood, matching value, slope and curvature at `expansion_point`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadLogLikApprox {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub expansion_point: f64,
    /// Profile log-likelihood at `expansion_point`.
    pub value: f64,
}

impl QuadLogLikApprox {
    /// Evaluated relative to the expansion point, which equals
    /// `k₀ + k₁α + k₂ log α` but is exact at that point and avoids
    /// cancelling against a large `k₀`.
    pub fn eval(&self, alpha: f64) -> f64 {
        let a0 = self.expansion_point;
        self.value + self.k1 * (alpha - a0) + self.k2 * (alpha / a0).ln()
    }

    pub fn derivative(&self, alpha: f64) -> f64 {
        self.k1 + self.k2 / alpha
    }

    pub fn second_derivative(&self, alpha: f64) -> f64 {
        -self.k2 / (alpha * alpha)
    }

    /// Stationary point `−k₂/k₁`; a maximum when `k₂ > 0`.
    pub fn argmax(&self) -> f64 {
        -self.k2 / self.k1
    }
}

pub fn quad_approx_coeffs(stats: &SufficientStats, alpha: f64) -> QuadLogLikApprox {
    let n = stats.n() as f64;
    let psi1 = trigamma_pos(alpha);
    let k2 = n * (alpha * alpha * psi1 - alpha);
    let k1 = n
        * (-stats.mean_log() - digamma_pos(alpha) + (n * alpha).ln() - stats.sum_inv().ln() - alpha * psi1
            + 1.0);
    let value = profile_log_likelihood(stats, alpha);
    QuadLogLikApprox {
        k0: value - k1 * alpha - k2 * alpha.ln(),
        k1,
        k2,
        expansion_point: alpha,
        value,
    }
}

/// One ML1 step: `Ψ⁻¹(log(nα) + C)`.
pub fn ml1_update(stats: &SufficientStats, alpha: f64) -> Result<f64> {
    inv_digamma((stats.n() as f64 * alpha).ln() + stats.ml_constant())
}

/// One ML2 step:
/// `1/α' = 1/α + (C − Ψ(α) + log(nα)) / (α² (1/α − Ψ₁(α)))`, guarded.
pub fn ml2_update(stats: &SufficientStats, alpha: f64) -> f64 {
    let n = stats.n() as f64;
    let num = stats.ml_constant() - digamma_pos(alpha) + (n * alpha).ln();
    let den = alpha * alpha * (1.0 / alpha - trigamma_pos(alpha));
    guard_step(alpha, 1.0 / (1.0 / alpha + num / den))
}

fn ml_report(stats: &SufficientStats, estimator: Estimator, it: super::ShapeIteration) -> Result<FitReport> {
    Ok(FitReport {
        estimator,
        params: InvGammaParams::new(it.alpha, ml_beta_given_alpha(stats, it.alpha))?,
        iterations: it.iterations,
        converged: it.converged,
        residual: it.residual,
        posterior: None,
    })
}

pub fn fit_ml1(stats: &SufficientStats, cfg: &ConvergenceConfig) -> Result<FitReport> {
    let init = fit_mm(stats)?.params.alpha();
    let it = iterate_shape(init, cfg, |a| ml1_update(stats, a))?;
    ml_report(stats, Estimator::Ml1, it)
}

pub fn fit_ml2(stats: &SufficientStats, cfg: &ConvergenceConfig) -> Result<FitReport> {
    let init = fit_mm(stats)?.params.alpha();
    let it = iterate_shape(init, cfg, |a| Ok(ml2_update(stats, a)))?;
    ml_report(stats, Estimator::Ml2, it)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::InvGammaParams;

    fn small() -> SufficientStats {
        SufficientStats::from_samples(&[1.0, 2.0, 4.0]).unwrap()
    }

    #[test]
    fn log_likelihood_is_sum_of_log_pdf() {
        let xs = [1.0, 2.0, 4.0];
        let p = InvGammaParams::new(2.0, 3.0).unwrap();
        let direct: f64 = xs.iter().map(|&x| p.log_pdf(x).unwrap()).sum();
        assert!((log_likelihood(&small(), &p) - direct).abs() < 1e-10);

        let one = SufficientStats::from_samples(&[1.0]).unwrap();
        let p = InvGammaParams::new(1.0, 1.0).unwrap();
        assert!((log_likelihood(&one, &p) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn beta_stationarity() {
        let s = small();
        let alpha = 2.0;
        let beta = ml_beta_given_alpha(&s, alpha);
        assert!((beta - 24.0 / 7.0).abs() < 1e-14);
        let h = 1e-6;
        let ll = |b| log_likelihood(&s, &InvGammaParams::new(alpha, b).unwrap());
        let slope = (ll(beta + h) - ll(beta - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-7, "{slope}");
        assert!((ml_beta_given_alpha(&s, 2.0 * alpha) - 2.0 * beta).abs() < 1e-14);
    }

    #[test]
    fn profile_identity_on_small_sample() {
        let s = small();
        for alpha in [0.3, 1.0, 2.5, 9.0] {
            let p = InvGammaParams::new(alpha, ml_beta_given_alpha(&s, alpha)).unwrap();
            let lhs = profile_log_likelihood(&s, alpha);
            assert!((lhs - log_likelihood(&s, &p)).abs() < 1e-10, "alpha {alpha}");
        }
    }

    #[test]
    fn k2_hand_value() {
        let q = quad_approx_coeffs(&small(), 1.0);
        let want = 3.0 * (std::f64::consts::PI.powi(2) / 6.0 - 1.0);
        assert!((q.k2 - want).abs() < 1e-11);
        assert!((q.k2 - 1.934_802_2).abs() < 1e-7);
        assert_eq!(q.eval(1.0), profile_log_likelihood(&small(), 1.0));
        let k0_form = q.k0 + q.k1 * 2.5 + q.k2 * 2.5f64.ln();
        assert!((q.eval(2.5) - k0_form).abs() < 1e-12);
    }

    #[test]
    fn ml2_surrogate_step_equals_argmax() {
        let s = small();
        for alpha in [0.5, 2.0, 6.0] {
            let q = quad_approx_coeffs(&s, alpha);
            let step = ml2_update(&s, alpha);
            assert!((step - q.argmax()).abs() < 1e-10 * step, "{alpha}");
        }
    }
}
