use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

/// Combined size below which the normal approximation is not reported.
pub const MIN_COMBINED_SIZE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankSumTest {
    /// Mann–Whitney U of the first sample, `R₁ − n₁(n₁+1)/2`.
    pub statistic: f64,
    pub z: f64,
    pub p_two_sided: f64,
}

/// Midranks (1-based) of `values`, ties sharing their average rank.
/// Returns the ranks in input order and `Σ (t³ − t)` over tie groups.
pub fn midranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));

    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

/// Unpaired Wilcoxon rank-sum (Mann–Whitney) test with midranks for ties
/// and a continuity-corrected normal approximation.
pub fn wilcoxon_rank_sum(xs: &[f64], ys: &[f64]) -> Result<RankSumTest> {
    let (nx, ny) = (xs.len(), ys.len());
    if nx == 0 || ny == 0 || nx + ny < MIN_COMBINED_SIZE {
        return Err(Error::SampleSize {
            nx,
            ny,
            min: MIN_COMBINED_SIZE,
        });
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::Internal("NaN in rank-sum input".into()));
    }

    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let r1: f64 = ranks[..nx].iter().sum();

    let (n1, n2) = (nx as f64, ny as f64);
    let n = n1 + n2;
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        // every value tied
        return Ok(RankSumTest {
            statistic: u,
            z: 0.0,
            p_two_sided: 1.0,
        });
    }

    let dev = ((u - mean).abs() - 0.5).max(0.0);
    let z = dev / var.sqrt();
    let p = libm::erfc(z / std::f64::consts::SQRT_2).min(1.0);
    Ok(RankSumTest {
        statistic: u,
        z: if u < mean { -z } else { z },
        p_two_sided: p,
    })
}
