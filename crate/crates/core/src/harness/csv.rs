//! CSV emission and parsing for the experiment tables.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::io::{self, BufRead, Write};

use super::SimulationRecord;
use crate::estimators::Estimator;

pub const RECORD_HEADER: &str =
    "N,sim,estimator,alpha_true,beta_true,alpha_hat,beta_hat,kl,bias_alpha,bias_beta,iterations,converged,runtime_s";

/// Render `x` like C's `%.17g`: fixed notation for decimal exponents in
/// `[-4, 17)`, scientific otherwise, trailing zeros removed.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }

    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-4..17).contains(&exp) {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        return if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        };
    }

    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        ("0".to_string(), format!("{zeros}{digits}"))
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "NaN" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

pub fn write_records_csv<W: Write>(mut w: W, records: &[SimulationRecord]) -> io::Result<()> {
    writeln!(w, "{RECORD_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.sim,
            r.estimator,
            format_f64(r.alpha_true),
            format_f64(r.beta_true),
            format_f64(r.alpha_hat),
            format_f64(r.beta_hat),
            format_f64(r.kl),
            format_f64(r.bias_alpha),
            format_f64(r.bias_beta),
            r.iterations,
            r.converged,
            format_f64(r.runtime_s),
        )?;
    }
    w.flush()
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Parse a table written by [`write_records_csv`]. The residual column is
/// not part of the file and comes back as NaN.
pub fn read_records_csv<R: BufRead>(r: R) -> Result<Vec<SimulationRecord>, CsvError> {
    let mut lines = r.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != RECORD_HEADER {
        return Err(CsvError::Parse {
            line: 1,
            msg: format!("unexpected header '{header}'"),
        });
    }

    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| CsvError::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(err("expected 13 fields"));
        }
        let num = |k: usize| parse_f64(f[k]).ok_or_else(|| err("bad number"));
        let int = |k: usize| f[k].parse::<usize>().map_err(|_| err("bad integer"));
        out.push(SimulationRecord {
            n: int(0)?,
            sim: int(1)?,
            estimator: f[2].parse::<Estimator>().map_err(|e| err(&e.to_string()))?,
            alpha_true: num(3)?,
            beta_true: num(4)?,
            alpha_hat: num(5)?,
            beta_hat: num(6)?,
            kl: num(7)?,
            bias_alpha: num(8)?,
            bias_beta: num(9)?,
            iterations: int(10)?,
            converged: f[11].parse::<bool>().map_err(|_| err("bad boolean"))?,
            runtime_s: num(12)?,
            residual: f64::NAN,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_like_percent_g() {
        assert_eq!(format_f64(25.0), "25");
        assert_eq!(format_f64(-2.5), "-2.5");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_f64(1e20), "1e20");
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(f64::NAN), "NaN");
        assert_eq!(format_f64(123456.0), "123456");
        assert_eq!(format_f64(0.000125), "0.000125");
    }

    proptest! {
        #[test]
        fn format_roundtrips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_f64(x);
            prop_assert_eq!(parse_f64(&s).unwrap().to_bits(), x.to_bits());
        }
    }
}
