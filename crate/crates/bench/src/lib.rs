//! Shared fixtures for the criterion benches.

use invgamma::{InvGammaParams, SufficientStats};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sufficient statistics of `n` seeded draws from IG(alpha, beta).
pub fn fixture(alpha: f64, beta: f64, n: usize, seed: u64) -> SufficientStats {
    let p = InvGammaParams::new(alpha, beta).expect("valid parameters");
    let xs = p.sample(n, &mut ChaCha8Rng::seed_from_u64(seed));
    SufficientStats::from_samples(&xs).expect("positive samples")
}
