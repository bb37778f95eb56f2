use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use invgamma::specfun::{digamma, inv_digamma, ln_gamma, trigamma};

// small arguments pay for the upward recurrence, large ones go straight to the series
const ARGS: [f64; 4] = [0.01, 1.5, 12.0, 1e5];

fn bench_specfun(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    for x in ARGS {
        g.bench_function(format!("ln_gamma/{x}"), |b| b.iter(|| ln_gamma(black_box(x))));
        g.bench_function(format!("digamma/{x}"), |b| b.iter(|| digamma(black_box(x))));
        g.bench_function(format!("trigamma/{x}"), |b| b.iter(|| trigamma(black_box(x))));
    }
    for y in [-5.0, 0.0, 2.5, 10.0] {
        g.bench_function(format!("inv_digamma/{y}"), |b| {
            b.iter(|| inv_digamma(black_box(y)))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_specfun);
criterion_main!(benches);
