//! Log-prior and log-posterior curves of the BL1 shape prior.

use std::io::{self, Write};

use serde::Serialize;

use super::csv::format_f64;
use crate::error::Result;
use crate::estimators::{
    bl1_log_posterior_curve, bl1_update, fit_mm, iterate_shape, ConvergenceConfig, ScaleGammaPrior,
    ShapePriorABC, SufficientStats,
};

pub const CURVES_HEADER: &str = "variant,alpha,log_prior,log_posterior,alpha_true,alpha_hat";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub variant: String,
    pub alpha: f64,
    pub log_prior: f64,
    pub log_posterior: f64,
    pub alpha_true: f64,
    pub alpha_hat: f64,
}

pub fn variant_label(p: &ShapePriorABC) -> String {
    // a is stored as log a; round away the exp(ln a) wobble
    let short = |x: f64| format!("{:.10e}", x).parse::<f64>().unwrap_or(x);
    format!(
        "a={} b={} c={}",
        short(p.log_a().exp()),
        short(p.b()),
        short(p.c())
    )
}

/// BL1 shape and scale estimates `(α̂, β̂)` for one prior variant.
///
/// Starts from the moment estimate when the sample allows it and from
/// `α = 1` otherwise; with no data the update is constant and returns the
/// prior mode.
pub fn bl1_point(
    stats: &SufficientStats,
    shape: &ShapePriorABC,
    scale: &ScaleGammaPrior,
    cfg: &ConvergenceConfig,
) -> Result<(f64, f64)> {
    let init = fit_mm(stats).map(|f| f.params.alpha()).unwrap_or(1.0);
    let post = shape.posterior(stats);
    let it = iterate_shape(init, cfg, |a| bl1_update(stats, &post, scale, a))?;
    Ok((it.alpha, scale.posterior(stats, it.alpha).beta_hat))
}

/// For each shape-prior variant, the log-prior and log-posterior over
/// `grid`, both evaluated at that variant's BL1 scale estimate β̂.
pub fn emit_prior_posterior_curves(
    stats: &SufficientStats,
    variants: &[ShapePriorABC],
    scale: &ScaleGammaPrior,
    grid: &[f64],
    alpha_true: f64,
    cfg: &ConvergenceConfig,
) -> Result<Vec<CurveRow>> {
    let mut rows = Vec::with_capacity(variants.len() * grid.len());
    for prior in variants {
        let (alpha_hat, beta_hat) = bl1_point(stats, prior, scale, cfg)?;
        let posterior = bl1_log_posterior_curve(stats, prior, beta_hat, grid);
        let label = variant_label(prior);
        for (&alpha, log_posterior) in grid.iter().zip(posterior) {
            rows.push(CurveRow {
                variant: label.clone(),
                alpha,
                log_prior: prior.log_density(alpha, beta_hat),
                log_posterior,
                alpha_true,
                alpha_hat,
            });
        }
    }
    Ok(rows)
}

pub fn write_curves_csv<W: Write>(mut w: W, rows: &[CurveRow]) -> io::Result<()> {
    writeln!(w, "{CURVES_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.variant,
            format_f64(r.alpha),
            format_f64(r.log_prior),
            format_f64(r.log_posterior),
            format_f64(r.alpha_true),
            format_f64(r.alpha_hat)
        )?;
    }
    w.flush()
}

/// Four prior settings: the weak default, `a` at both ends of the range that
/// keeps BL1 close to ML1, and a stronger `b = c = 1`.
pub fn default_variants() -> Vec<ShapePriorABC> {
    [
        (1.0, 0.01, 0.01),
        (0.5, 0.01, 0.01),
        (5.0, 0.01, 0.01),
        (1.0, 1.0, 1.0),
    ]
    .into_iter()
    .map(|(a, b, c)| ShapePriorABC::new(a, b, c).expect("positive constants"))
    .collect()
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count).map(|i| lo + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_data_gives_identical_curves() {
        let grid = linspace(0.5, 30.0, 60);
        let rows = emit_prior_posterior_curves(
            &SufficientStats::empty(),
            &default_variants(),
            &ScaleGammaPrior::default(),
            &grid,
            10.0,
            &ConvergenceConfig::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 4 * 60);
        assert!(rows.iter().all(|r| r.log_prior == r.log_posterior));
    }

    #[test]
    fn labels() {
        for v in default_variants() {
            assert!(!variant_label(&v).contains(','));
        }
        assert_eq!(variant_label(&default_variants()[2]), "a=5 b=0.01 c=0.01");
        assert_eq!(variant_label(&default_variants()[3]), "a=1 b=1 c=1");
        assert_eq!(variant_label(&default_variants()[0]), "a=1 b=0.01 c=0.01");
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(1.0, 2.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 1.0);
        assert!((g[10] - 2.0).abs() < 1e-15);
    }
}
