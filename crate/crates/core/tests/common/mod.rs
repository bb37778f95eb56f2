//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the library's special functions, so agreement
//! between these and the library is meaningful.

#![allow(dead_code)]

use invgamma::estimators::SufficientStats;
use invgamma::InvGammaParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature to an absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    // start from a handful of panels so narrow peaks are not missed
    let pieces = 16;
    let w = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            rec(
                f,
                a + w * i as f64,
                a + w * (i + 1) as f64,
                tol / pieces as f64,
                40,
            )
        })
        .sum()
}

/// `E_p[g(x)]` by quadrature in `u = log(x/β)`, which maps the bulk of any
/// Inverse Gamma onto a window around `−log α` of width `O(1/√α)`.
pub fn ig_expectation<G: Fn(f64) -> f64>(p: &InvGammaParams, g: G, tol: f64) -> f64 {
    let (a, b) = (p.alpha(), p.beta());
    let ln_norm = a * b.ln() - statrs::function::gamma::ln_gamma(a);
    let centre = -a.ln();
    let lo = centre - 8.0;
    let hi = centre + 2.0 + 80.0 / a;
    let f = |u: f64| {
        let x = b * u.exp();
        // pdf(x)·x written in logs
        let log_px_x = ln_norm - a * x.ln() - b / x;
        let w = log_px_x.exp();
        if w == 0.0 {
            0.0
        } else {
            w * g(x)
        }
    };
    integrate(&f, lo, hi, tol)
}

/// Closed-form-free log density, for use inside quadrature oracles.
pub fn oracle_log_pdf(p: &InvGammaParams, x: f64) -> f64 {
    let (a, b) = (p.alpha(), p.beta());
    a * b.ln() - statrs::function::gamma::ln_gamma(a) - (a + 1.0) * x.ln() - b / x
}

/// `KL[p || q]` by quadrature of `p log(p/q)`.
pub fn kl_quadrature(p: &InvGammaParams, q: &InvGammaParams) -> f64 {
    ig_expectation(p, |x| oracle_log_pdf(p, x) - oracle_log_pdf(q, x), 1e-10)
}

fn kahan(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let y = t - c;
        let u = s + y;
        c = (u - s) - y;
        s = u;
    }
    s
}

const SERIES_TERMS: usize = 200_000;

/// `Ψ(x) = −γ + Σ_{k≥0} (1/(k+1) − 1/(k+x))`, truncated with an
/// Euler–Maclaurin tail.
pub fn digamma_series(x: f64) -> f64 {
    let k = SERIES_TERMS as f64;
    let head = kahan((0..SERIES_TERMS).rev().map(|i| {
        let i = i as f64;
        (x - 1.0) / ((i + 1.0) * (i + x))
    }));
    let f = |t: f64| 1.0 / (t + 1.0) - 1.0 / (t + x);
    let df = |t: f64| -1.0 / (t + 1.0).powi(2) + 1.0 / (t + x).powi(2);
    let tail = ((k + x) / (k + 1.0)).ln() + 0.5 * f(k) - df(k) / 12.0;
    -EULER_GAMMA + head + tail
}

/// `Ψ₁(x) = Σ_{k≥0} (x+k)⁻²` with an Euler–Maclaurin tail.
pub fn trigamma_series(x: f64) -> f64 {
    let k = SERIES_TERMS as f64;
    let head = kahan((0..SERIES_TERMS).rev().map(|i| (x + i as f64).powi(-2)));
    let t = x + k;
    head + 1.0 / t + 0.5 / (t * t) + 1.0 / (6.0 * t * t * t)
}

/// Exact two-sided rank-sum p-value by enumerating every split of the
/// pooled midranks. Only practical for tiny samples.
pub fn exact_rank_sum_p(xs: &[f64], ys: &[f64]) -> f64 {
    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let n = pooled.len();
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|&v| {
            let below = pooled.iter().filter(|&&w| w < v).count() as f64;
            let equal = pooled.iter().filter(|&&w| w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let m = xs.len();
    let centre = m as f64 * (n as f64 + 1.0) / 2.0;
    let observed = (ranks[..m].iter().sum::<f64>() - centre).abs();

    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let r: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        total += 1;
        if (r - centre).abs() >= observed - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

/// Golden-section search for the maximizer of a unimodal function on
/// `[lo, hi]`. `better(x1, x2)` must return true when `f(x1) > f(x2)`.
pub fn golden_max<B: Fn(f64, f64) -> bool>(mut lo: f64, mut hi: f64, better: B, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    while hi - lo > tol * (lo.abs() + hi.abs()).max(1e-300) {
        if better(x1, x2) {
            hi = x2;
            x2 = x1;
            x1 = hi - r * (hi - lo);
        } else {
            lo = x1;
            x1 = x2;
            x2 = lo + r * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}

/// Kolmogorov–Smirnov distance between `xs` and the Inverse Gamma CDF.
///
/// The CDF is accumulated by quadrature of the density between consecutive
/// order statistics.
pub fn ks_statistic(p: &InvGammaParams, xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pdf = |x: f64| oracle_log_pdf(p, x).exp();
    let n = v.len() as f64;
    let mut cdf = integrate(&pdf, 0.0_f64.max(v[0] * 1e-3), v[0], 1e-13);
    let mut d = 0.0f64;
    for (i, w) in v.iter().enumerate() {
        if i > 0 {
            cdf += gk15(&pdf, v[i - 1], *w).0;
        }
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ig(a: f64, b: f64) -> InvGammaParams {
    InvGammaParams::new(a, b).unwrap()
}

/// Sufficient statistics of `n` seeded draws from `IG(alpha, beta)`.
pub fn seeded_stats(alpha: f64, beta: f64, n: usize, seed: u64) -> SufficientStats {
    let xs = ig(alpha, beta).sample(n, &mut rng(seed));
    SufficientStats::from_samples(&xs).unwrap()
}

/// The 100 datasets shared by the equivalence and limit checks: truth drawn
/// from α ∈ [2.5, 15], β ∈ [1, 50], half with n = 100 and half with 1000.
pub fn reference_datasets() -> Vec<(InvGammaParams, SufficientStats)> {
    use rand::Rng;
    let mut r = rng(2024);
    (0..100)
        .map(|i| {
            let a = r.random_range(2.5..15.0);
            let b = r.random_range(1.0..50.0);
            let n = if i % 2 == 0 { 100 } else { 1000 };
            let p = ig(a, b);
            let xs = p.sample(n, &mut r);
            (p, SufficientStats::from_samples(&xs).unwrap())
        })
        .collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
