//! Aggregation of simulation records into the tables printed by the CLI.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use super::csv::format_f64;
use super::wilcoxon::{wilcoxon_rank_sum, RankSumTest};
use super::SimulationRecord;
use crate::estimators::Estimator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Parameter {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "beta")]
    Beta,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Alpha => "alpha",
            Parameter::Beta => "beta",
        }
    }
}

/// Mean, sample standard deviation (n − 1) and sample skewness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
}

pub fn describe(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let std = if xs.len() > 1 {
        (m2 * n / (n - 1.0)).sqrt()
    } else {
        f64::NAN
    };
    Moments {
        count: xs.len(),
        mean,
        std,
        skewness: m3 / m2.powf(1.5),
    }
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn usable(r: &SimulationRecord) -> bool {
    r.alpha_hat.is_finite() && r.beta_hat.is_finite() && r.kl.is_finite()
}

/// Usable values of `field` per (N, estimator), plus how many rows were
/// dropped because the fit failed.
fn grouped<F>(records: &[SimulationRecord], field: F) -> BTreeMap<(usize, Estimator), (Vec<f64>, usize)>
where
    F: Fn(&SimulationRecord) -> f64,
{
    let mut out: BTreeMap<(usize, Estimator), (Vec<f64>, usize)> = BTreeMap::new();
    for r in records {
        let slot = out.entry((r.n, r.estimator)).or_default();
        if usable(r) {
            slot.0.push(field(r));
        } else {
            slot.1 += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KlSummaryRow {
    pub n: usize,
    pub estimator: Estimator,
    pub median_kl: f64,
    pub mean_kl: f64,
    pub mean_iterations: f64,
    pub count: usize,
    pub excluded: usize,
}

pub fn kl_summary(records: &[SimulationRecord]) -> Vec<KlSummaryRow> {
    let kls = grouped(records, |r| r.kl);
    let iters = grouped(records, |r| r.iterations as f64);
    kls.into_iter()
        .map(|((n, estimator), (v, excluded))| {
            let it = &iters[&(n, estimator)].0;
            KlSummaryRow {
                n,
                estimator,
                median_kl: median(&v),
                mean_kl: v.iter().sum::<f64>() / v.len() as f64,
                mean_iterations: it.iter().sum::<f64>() / it.len() as f64,
                count: v.len(),
                excluded,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseTest {
    pub n: usize,
    pub first: Estimator,
    pub second: Estimator,
    pub test: Option<RankSumTest>,
}

/// Rank-sum comparison of the KL distributions of every estimator pair at
/// each N. `test` is `None` when a group is too small.
pub fn pairwise_kl_tests(records: &[SimulationRecord]) -> Vec<PairwiseTest> {
    let kls = grouped(records, |r| r.kl);
    let mut sizes: Vec<usize> = kls.keys().map(|k| k.0).collect();
    sizes.dedup();

    let mut out = Vec::new();
    for n in sizes {
        let ests: Vec<Estimator> = kls.keys().filter(|k| k.0 == n).map(|k| k.1).collect();
        for (i, &a) in ests.iter().enumerate() {
            for &b in &ests[i + 1..] {
                let test = wilcoxon_rank_sum(&kls[&(n, a)].0, &kls[&(n, b)].0).ok();
                out.push(PairwiseTest {
                    n,
                    first: a,
                    second: b,
                    test,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRow {
    pub n: usize,
    pub estimator: Estimator,
    pub parameter: Parameter,
    pub mean_bias: f64,
    pub std_bias: f64,
    pub skewness: f64,
    pub count: usize,
    pub excluded: usize,
}

pub const BIAS_HEADER: &str = "N,estimator,parameter,mean_bias,std_bias,skewness,count,excluded";

pub fn bias_table(records: &[SimulationRecord]) -> Vec<BiasRow> {
    let mut rows = Vec::new();
    for (param, field) in [
        (
            Parameter::Alpha,
            (|r: &SimulationRecord| r.bias_alpha) as fn(&SimulationRecord) -> f64,
        ),
        (Parameter::Beta, |r: &SimulationRecord| r.bias_beta),
    ] {
        for ((n, estimator), (v, excluded)) in grouped(records, field) {
            let m = describe(&v);
            rows.push(BiasRow {
                n,
                estimator,
                parameter: param,
                mean_bias: m.mean,
                std_bias: m.std,
                skewness: m.skewness,
                count: m.count,
                excluded,
            });
        }
    }
    rows.sort_by_key(|r| (r.n, r.estimator, r.parameter));
    rows
}

pub fn write_bias_csv<W: Write>(mut w: W, rows: &[BiasRow]) -> io::Result<()> {
    writeln!(w, "{BIAS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.estimator,
            r.parameter.name(),
            format_f64(r.mean_bias),
            format_f64(r.std_bias),
            format_f64(r.skewness),
            r.count,
            r.excluded
        )?;
    }
    w.flush()
}
