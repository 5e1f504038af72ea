//! Synthetic fractal signals with known exponents.
//!
//! Fractional Gaussian noise is drawn exactly by circulant embedding of its
//! autocovariance; the binomial multiplicative cascade is a deterministic
//! multifractal with a closed-form generalized Hurst exponent. Both serve as
//! reference inputs for the analyzers.

mod rng;
mod spec;

pub use rng::GaussianStream;
pub use spec::{GeneratorKind, GeneratorSpec};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::Signal;

pub const MAX_FGN_EXPONENT: u32 = 24;
pub const MAX_CASCADE_EXPONENT: u32 = 22;

/// Tolerance below zero for circulant eigenvalues before embedding is declared failed.
const EMBEDDING_TOLERANCE: f64 = 1e-9;

/// Autocovariance of unit-variance fGn at lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let two_h = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

fn check_hurst(hurst: f64) -> Result<()> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Range(format!("H = {hurst} outside (0, 1)")));
    }
    Ok(())
}

fn check_exponent(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::Range(format!("length exponent {n} outside [1, {max}]")));
    }
    Ok(())
}

/// `2^n` samples of fractional Gaussian noise with Hurst exponent `hurst`.
pub fn gen_fgn(hurst: f64, n: u32, seed: u64) -> Result<Signal> {
    check_hurst(hurst)?;
    check_exponent(n, MAX_FGN_EXPONENT)?;
    let len = 1usize << n;
    let m = 2 * len;
    // first row of the 2N circulant: c_0..c_N, c_{N-1}..c_1
    let mut eig: Vec<Complex64> = (0..m)
        .map(|j| {
            let lag = if j <= len { j } else { m - j };
            Complex64::new(fgn_autocovariance(hurst, lag), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut eig);
    for (index, e) in eig.iter().enumerate() {
        if e.re < -EMBEDDING_TOLERANCE {
            return Err(Error::EmbeddingFailure {
                index,
                value: e.re,
            });
        }
    }
    let mut rng = GaussianStream::new(seed);
    let mut w: Vec<Complex64> = eig
        .iter()
        .map(|e| {
            let amp = (e.re.max(0.0) / m as f64).sqrt();
            let re = rng.next_gaussian();
            let im = rng.next_gaussian();
            Complex64::new(re, im) * amp
        })
        .collect();
    fft.process(&mut w);
    Signal::new(w[..len].iter().map(|c| c.re).collect())
}

/// Cumulative sum of [`gen_fgn`].
pub fn gen_fbm(hurst: f64, n: u32, seed: u64) -> Result<Signal> {
    let noise = gen_fgn(hurst, n, seed)?;
    let mut acc = 0.0;
    Signal::new(
        noise
            .samples()
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect(),
    )
}

/// `2^n` independent standard normal samples.
pub fn gen_white_noise(n: u32, seed: u64) -> Result<Signal> {
    check_exponent(n, MAX_FGN_EXPONENT)?;
    let mut rng = GaussianStream::new(seed);
    Signal::new((0..1usize << n).map(|_| rng.next_gaussian()).collect())
}

/// Fisher-Yates permutation of `0..len` driven by `seed`; `perm[i]` is the
/// source index placed at position `i`.
pub fn cascade_permutation(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = GaussianStream::new(seed);
    let mut perm: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.next_index(i + 1);
        perm.swap(i, j);
    }
    perm
}

/// Binomial multiplicative cascade of `2^n` samples: sample `k` (0-based)
/// holds `a^(n - z) (1 - a)^z` where `z` counts the ones in `k`'s binary
/// expansion. `shuffle` reorders the samples by [`cascade_permutation`].
pub fn gen_binomial_cascade(a: f64, n: u32, shuffle: Option<u64>) -> Result<Signal> {
    if !(a > 0.5 && a < 1.0) {
        return Err(Error::Range(format!("cascade weight a = {a} outside (0.5, 1)")));
    }
    check_exponent(n, MAX_CASCADE_EXPONENT)?;
    let len = 1usize << n;
    let b = 1.0 - a;
    let values: Vec<f64> = (0..len)
        .map(|k| {
            let z = k.count_ones() as i32;
            a.powi(n as i32 - z) * b.powi(z)
        })
        .collect();
    let values = match shuffle {
        Some(seed) => cascade_permutation(len, seed)
            .into_iter()
            .map(|src| values[src])
            .collect(),
        None => values,
    };
    Signal::new(values)
}

/// Closed-form generalized Hurst exponent of the binomial cascade,
/// `h(q) = 1/q - ln(a^q + (1-a)^q) / (q ln 2)`, with the `q -> 0` limit
/// `-(ln a + ln(1-a)) / (2 ln 2)`.
pub fn analytic_h_binomial(q: f64, a: f64) -> f64 {
    let b = 1.0 - a;
    if q.abs() < 1e-8 {
        return -(a.ln() + b.ln()) / (2.0 * std::f64::consts::LN_2);
    }
    1.0 / q - (a.powf(q) + b.powf(q)).ln() / (q * std::f64::consts::LN_2)
}
