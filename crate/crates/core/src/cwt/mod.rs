//! Continuous wavelet transform with complex Gaussian wavelets, and wavelet
//! coherence between two signals.
//!
//! The transform is the discretized `T(a, b) = a^{-1/2} sum_t x(t) conj(psi((t - b) / a))`
//! at integer positions `b`, with zero padding outside the signal. Each scale
//! row is computed as one FFT convolution against the sampled wavelet.

mod coherence;
mod wavelet;

pub use coherence::{
    smooth_spectrum, wavelet_coherence, CoherenceMap, SmoothingDescriptor, SmoothingParams,
};
pub use wavelet::{
    complex_gaussian_wavelet, ComplexGaussian, WaveletDescriptor, DEFAULT_DERIVATIVE,
    MAX_DERIVATIVE, MIN_DERIVATIVE,
};

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::Signal;

pub const DEFAULT_VOICES_PER_OCTAVE: usize = 12;
pub const DEFAULT_MIN_SCALE: f64 = 2.0;

/// Strictly increasing positive scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ScaleGrid(Vec<f64>);

impl ScaleGrid {
    pub fn new(scales: Vec<f64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidParameter("scale grid is empty".into()));
        }
        if scales.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidParameter(
                "scales must be finite and positive".into(),
            ));
        }
        if scales.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "scales must be strictly increasing".into(),
            ));
        }
        Ok(ScaleGrid(scales))
    }

    /// `min * 2^(k / voices)` for every `k` that stays at or below `max`.
    pub fn log_spaced(min: f64, max: f64, voices_per_octave: usize) -> Result<Self> {
        if voices_per_octave == 0 || !(min > 0.0) || !(max >= min) {
            return Err(Error::InvalidParameter(format!(
                "cannot build a log grid from {min} to {max} with {voices_per_octave} voices"
            )));
        }
        let steps = ((max / min).log2() * voices_per_octave as f64 + 1e-9).floor() as usize;
        ScaleGrid::new(
            (0..=steps)
                .map(|k| (min * (k as f64 / voices_per_octave as f64).exp2()).min(max))
                .collect(),
        )
    }

    /// 12 voices per octave from 2 to `n / 4`.
    pub fn default_for(n: usize) -> Result<Self> {
        ScaleGrid::log_spaced(DEFAULT_MIN_SCALE, n as f64 / 4.0, DEFAULT_VOICES_PER_OCTAVE)
    }

    pub fn scales(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Wavelet coefficients on a scales x positions grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CwtMatrix {
    rows: Vec<Vec<Complex64>>,
    scales: ScaleGrid,
    signal_length: usize,
    wavelet: WaveletDescriptor,
}

impl CwtMatrix {
    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn row(&self, scale_index: usize) -> &[Complex64] {
        &self.rows[scale_index]
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn signal_length(&self) -> usize {
        self.signal_length
    }

    pub fn wavelet(&self) -> WaveletDescriptor {
        self.wavelet
    }

    /// Whether `(scale_index, position)` lies inside the cone of influence,
    /// i.e. within `sqrt(2) * a` of either end.
    pub fn in_cone_of_influence(&self, scale_index: usize, position: usize) -> bool {
        let a = self.scales.0[scale_index];
        cone_of_influence(self.signal_length)[position] <= a
    }
}

/// Per-position smallest scale whose coefficients are edge-affected:
/// `min(b, N - 1 - b) / sqrt(2)`.
pub fn cone_of_influence(n: usize) -> Vec<f64> {
    (0..n)
        .map(|b| b.min(n - 1 - b) as f64 / std::f64::consts::SQRT_2)
        .collect()
}

/// Forward and inverse plans for one length.
type FftPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

struct Transformer {
    planner: FftPlanner<f64>,
    cache: HashMap<usize, FftPair>,
}

impl Transformer {
    fn new() -> Self {
        Transformer {
            planner: FftPlanner::new(),
            cache: HashMap::new(),
        }
    }

    fn plans(&mut self, len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
        let planner = &mut self.planner;
        self.cache
            .entry(len)
            .or_insert_with(|| (planner.plan_fft_forward(len), planner.plan_fft_inverse(len)))
            .clone()
    }
}

/// Convolution length that avoids wrap-around for signal length `n` and a kernel
/// reaching `radius` samples to either side.
fn fft_len(n: usize, radius: usize) -> usize {
    (n + radius + 1).next_power_of_two()
}

fn kernel_radius(wavelet: &ComplexGaussian, scale: f64) -> usize {
    (wavelet.support_radius() * scale).ceil() as usize
}

/// Wavelet transform of `signal` on `scales`, scales restricted to `[1, N/4]`.
pub fn cwt(signal: &Signal, wavelet: &ComplexGaussian, scales: &ScaleGrid) -> Result<CwtMatrix> {
    let n = signal.len();
    if n < 4 {
        return Err(Error::SignalTooShort {
            required: 4,
            actual: n,
        });
    }
    let max_scale = n as f64 / 4.0;
    for &a in scales.scales() {
        if !(1.0..=max_scale).contains(&a) {
            return Err(Error::ScaleOutOfRange {
                scale: a,
                min: 1.0,
                max: max_scale,
            });
        }
    }
    let mut tf = Transformer::new();
    let mut spectra: HashMap<usize, Vec<Complex64>> = HashMap::new();
    let mut rows = Vec::with_capacity(scales.len());
    for &a in scales.scales() {
        // offsets beyond n - 1 never meet a sample
        let radius = kernel_radius(wavelet, a).min(n - 1);
        let len = fft_len(n, radius);
        let (fwd, inv) = tf.plans(len);
        let x_hat = spectra.entry(len).or_insert_with(|| {
            let mut buf: Vec<Complex64> = signal
                .samples()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
                .take(len)
                .collect();
            fwd.process(&mut buf);
            buf
        });
        // T(b) = sum_j x(j) r(b - j) with r(m) = conj(psi(-m / a)) / sqrt(a)
        let gain = 1.0 / a.sqrt();
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for m in -(radius as isize)..=radius as isize {
            let idx = m.rem_euclid(len as isize) as usize;
            kernel[idx] = wavelet.eval(-(m as f64) / a).conj() * gain;
        }
        fwd.process(&mut kernel);
        for (k, xh) in kernel.iter_mut().zip(x_hat.iter()) {
            *k *= xh;
        }
        inv.process(&mut kernel);
        let scale = 1.0 / len as f64;
        rows.push(kernel[..n].iter().map(|c| c * scale).collect());
    }
    Ok(CwtMatrix {
        rows,
        scales: scales.clone(),
        signal_length: n,
        wavelet: wavelet.descriptor(),
    })
}
