//! Reproducible random source.
//!
//! The generator is xoshiro256** (Blackman & Vigna) with its 256-bit state
//! filled by four consecutive SplitMix64 outputs of the 64-bit seed. Uniforms
//! take the top 53 bits, `u = (x >> 11) * 2^-53`, and normal deviates come in
//! pairs from the Box-Muller transform
//! `sqrt(-2 ln(1 - u1)) * (cos 2 pi u2, sin 2 pi u2)`. Any implementation of
//! these three steps reproduces the same sequences.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

pub struct GaussianStream {
    rng: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        GaussianStream {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..bound` by 128-bit multiply-shift.
    pub fn next_index(&mut self, bound: usize) -> usize {
        ((self.rng.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}
