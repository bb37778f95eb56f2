use serde::Serialize;

use crate::error::{Error, Result};

/// The data reductions every estimator consumes.
///
/// `var` is the unbiased (n − 1) variance and is `None` when fewer than two
/// observations are available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SufficientStats {
    n: usize,
    mean: f64,
    var: Option<f64>,
    sum_inv: f64,
    sum_log: f64,
}

impl SufficientStats {
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = xs.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x.is_finite())) {
            return Err(Error::NonPositiveSample { index, value });
        }

        let n = xs.len();
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = if n < 2 {
            None
        } else if xs.iter().all(|&x| x == xs[0]) {
            Some(0.0)
        } else {
            // corrected two-pass
            let (ss, s) = xs.iter().fold((0.0, 0.0), |(ss, s), &x| {
                let d = x - mean;
                (ss + d * d, s + d)
            });
            Some(((ss - s * s / nf) / (nf - 1.0)).max(0.0))
        };
        let sum_inv = xs.iter().map(|x| x.recip()).sum();
        let sum_log = xs.iter().map(|x| x.ln()).sum();

        Ok(Self {
            n,
            mean,
            var,
            sum_inv,
            sum_log,
        })
    }

    /// Statistics of an empty data set. Posterior updates applied to these
    /// return the prior unchanged.
    pub fn empty() -> Self {
        Self {
            n: 0,
            mean: 0.0,
            var: None,
            sum_inv: 0.0,
            sum_log: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn var(&self) -> Option<f64> {
        self.var
    }

    /// `Σ 1/xᵢ`
    pub fn sum_inv(&self) -> f64 {
        self.sum_inv
    }

    /// `Σ log xᵢ`
    pub fn sum_log(&self) -> f64 {
        self.sum_log
    }

    /// `Σ log xᵢ / n`, zero for the empty set.
    pub fn mean_log(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum_log / self.n as f64
        }
    }

    /// The constant `C = −log Σ xᵢ⁻¹ − mean(log x)` shared by both ML updates.
    pub(crate) fn ml_constant(&self) -> f64 {
        -self.sum_inv.ln() - self.mean_log()
    }

    /// Mean and variance for the moment-based initialization, or the reason
    /// they are unusable.
    pub(crate) fn moment_pair(&self) -> Result<(f64, f64)> {
        match self.var {
            None => Err(Error::InsufficientData { n: self.n }),
            Some(v) if v <= 0.0 => Err(Error::DegenerateSample),
            Some(v) => Ok((self.mean, v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_stats() {
        let s = SufficientStats::from_samples(&[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.n(), 3);
        assert!((s.mean() - 7.0 / 3.0).abs() < 1e-14);
        assert!((s.var().unwrap() - 7.0 / 3.0).abs() < 1e-14);
        assert_eq!(s.sum_inv(), 1.75);
        assert!((s.sum_log() - 8f64.ln()).abs() < 1e-14);
        assert!((s.sum_log() - 2.079_441_5).abs() < 1e-7);
        assert!((s.mean_log() - 8f64.ln() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_has_zero_variance() {
        let s = SufficientStats::from_samples(&[0.1; 7]).unwrap();
        assert_eq!(s.var(), Some(0.0));
        assert_eq!(s.moment_pair(), Err(Error::DegenerateSample));
    }

    #[test]
    fn single_observation_has_no_variance() {
        let s = SufficientStats::from_samples(&[1.0]).unwrap();
        assert_eq!(s.var(), None);
        assert_eq!(s.moment_pair(), Err(Error::InsufficientData { n: 1 }));
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(
            SufficientStats::from_samples(&[1.0, -1.0]),
            Err(Error::NonPositiveSample {
                index: 1,
                value: -1.0
            })
        );
        assert!(SufficientStats::from_samples(&[0.0]).is_err());
        assert!(SufficientStats::from_samples(&[f64::NAN]).is_err());
        assert_eq!(SufficientStats::from_samples(&[]), Err(Error::EmptySample));
    }
}
