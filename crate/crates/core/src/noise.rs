//! Additive Gaussian noise on measured boundary samples.
//!
//! Draws come from ChaCha8 seeded with `seed_from_u64` and are turned into
//! standard normals by `rand_distr::StandardNormal` (ziggurat). The stream is
//! therefore fixed by the seed alone and is the same on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSpec {
    /// Percentage `p`; the standard deviation is `p/100` of the largest sample.
    pub percent: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(percent: f64, seed: u64) -> Self {
        Self { percent, seed }
    }

    pub fn sigma(&self, clean: &[f64]) -> f64 {
        let peak = clean.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.percent / 100.0 * peak
    }
}

/// `clean + eps`, one independent `N(0, sigma^2)` draw per sample.
pub fn perturb(clean: &[f64], spec: NoiseSpec) -> Vec<f64> {
    let sigma = spec.sigma(clean);
    if sigma == 0.0 {
        return clean.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    clean
        .iter()
        .map(|v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + sigma * z
        })
        .collect()
}
