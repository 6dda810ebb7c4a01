//! Deterministic input generators shared by the benchmarks.

use ordcut::{canonicalize, DataSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform noise over [0, 100) at x = 1..=n.
pub fn uniform_series(n: usize, seed: u64) -> DataSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| ((i + 1) as f64, rng.gen_range(0.0..100.0)))
        .collect();
    canonicalize(&pts).expect("generated points are valid")
}

/// A step function with `levels` plateaus plus Gaussian-ish jitter,
/// the shape the solvers are typically pointed at.
pub fn noisy_step_series(n: usize, levels: usize, seed: u64) -> DataSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let level = (i * levels / n) as f64 * 25.0;
            let jitter: f64 = rng.gen_range(-2.0..2.0);
            ((i + 1) as f64, level + jitter)
        })
        .collect();
    canonicalize(&pts).expect("generated points are valid")
}
