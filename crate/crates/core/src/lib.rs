//! Estimation of Inverse Gamma distributions.
//!
//! * [`specfun`]: log-gamma, digamma, trigamma and inverse digamma.
//! * [`distribution`]: the density, moments, sampling and the closed-form
//!   KL divergence between two Inverse Gamma distributions.
//! * [`estimators`]: method of moments (MM), two maximum-likelihood
//!   fixed-point schemes (ML1, ML2) and two conjugate Bayesian schemes
//!   (BL1, BL2).
//! * [`harness`]: seeded Monte-Carlo experiments, rank-sum tests and CSV
//!   output.
//!
//! ```
//! use invgamma::{fit, ConvergenceConfig, Estimator, Hyperparams, SufficientStats};
//!
//! let stats = SufficientStats::from_samples(&[1.0, 2.0, 4.0]).unwrap();
//! let report = fit(Estimator::Mm, &stats, &Hyperparams::default(), &ConvergenceConfig::default()).unwrap();
//! assert!((report.params.alpha() - 13.0 / 3.0).abs() < 1e-12);
//! ```

pub mod distribution;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod specfun;

pub use distribution::{kl_divergence, InvGammaParams};
pub use error::{Error, Moment, Result};
pub use estimators::{
    fit, ConvergenceConfig, Estimator, FitReport, Hyperparams, LaplaceSummary, PolyShapePrior,
    ScaleGammaPrior, ShapePriorABC, SufficientStats,
};
pub use harness::{ExperimentConfig, SimulationRecord};
