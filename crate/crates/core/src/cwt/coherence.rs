use num_complex::Complex64;
use serde::Serialize;

use super::{cone_of_influence, cwt, ComplexGaussian, CwtMatrix, ScaleGrid};
use crate::error::{Error, Result};
use crate::signal::Signal;

pub const DEFAULT_TIME_FACTOR: f64 = 0.6;
pub const DEFAULT_SCALE_WINDOW: usize = 3;
const MIN_TIME_WINDOW: usize = 3;
/// Smoothed auto-spectra below this fraction of their peak are rounding noise
/// and count as zero.
const ZERO_POWER_RATIO: f64 = 1e-20;

/// Boxcar smoothing: `time_factor * a` samples along positions at scale `a`,
/// then `scale_window` adjacent scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingParams {
    pub time_factor: f64,
    pub scale_window: usize,
}

impl Default for SmoothingParams {
    fn default() -> Self {
        SmoothingParams {
            time_factor: DEFAULT_TIME_FACTOR,
            scale_window: DEFAULT_SCALE_WINDOW,
        }
    }
}

impl SmoothingParams {
    fn validate(&self) -> Result<()> {
        if !(self.time_factor.is_finite() && self.time_factor > 0.0) {
            return Err(Error::BadWindow(format!(
                "time window factor must be positive, got {}",
                self.time_factor
            )));
        }
        if self.scale_window == 0 || self.scale_window.is_multiple_of(2) {
            return Err(Error::BadWindow(format!(
                "scale window must be a positive odd count, got {}",
                self.scale_window
            )));
        }
        Ok(())
    }

    /// Time window in samples at scale `a`: `round(factor * a)`, at least 3, made odd.
    pub fn time_window(&self, scale: f64) -> usize {
        let w = ((self.time_factor * scale).round() as usize).max(MIN_TIME_WINDOW);
        w | 1
    }
}

/// The windows actually used, as recorded in outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingDescriptor {
    pub time_factor: f64,
    pub time_windows: Vec<usize>,
    pub scale_window: usize,
}

/// Centered boxcar of odd `width`, truncated and renormalized at the ends.
///
/// Blocks of length `width` carry running prefix and suffix sums, so every
/// window is one suffix plus one prefix and no sum is formed by subtraction.
fn boxcar(row: &[Complex64], width: usize) -> Vec<Complex64> {
    let n = row.len();
    let zero = Complex64::new(0.0, 0.0);
    let half = width / 2;
    let block = width.max(1);
    let mut prefix = vec![zero; n];
    let mut suffix = vec![zero; n];
    for start in (0..n).step_by(block) {
        let end = (start + block).min(n);
        let mut acc = zero;
        for i in start..end {
            acc += row[i];
            prefix[i] = acc;
        }
        let mut acc = zero;
        for i in (start..end).rev() {
            acc += row[i];
            suffix[i] = acc;
        }
    }
    (0..n)
        .map(|b| {
            let lo = b.saturating_sub(half);
            let hi = (b + half).min(n - 1);
            let sum = if lo / block == hi / block {
                // a window inside one block touches the block start or end
                if lo % block == 0 {
                    prefix[hi]
                } else {
                    suffix[lo]
                }
            } else {
                suffix[lo] + prefix[hi]
            };
            sum / (hi - lo + 1) as f64
        })
        .collect()
}

/// Smooths a scales x positions matrix along positions, then across scales.
pub fn smooth_spectrum(
    matrix: &[Vec<Complex64>],
    scales: &ScaleGrid,
    params: &SmoothingParams,
) -> Result<Vec<Vec<Complex64>>> {
    params.validate()?;
    if matrix.len() != scales.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows for {} scales",
            matrix.len(),
            scales.len()
        )));
    }
    let in_time: Vec<Vec<Complex64>> = matrix
        .iter()
        .zip(scales.scales())
        .map(|(row, &a)| boxcar(row, params.time_window(a)))
        .collect();
    let m = in_time.len();
    let half = params.scale_window / 2;
    Ok((0..m)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(m - 1);
            let count = (hi - lo + 1) as f64;
            let n = in_time[i].len();
            (0..n)
                .map(|b| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for row in &in_time[lo..=hi] {
                        acc += row[b];
                    }
                    acc / count
                })
                .collect()
        })
        .collect())
}

/// Coherence magnitude and relative phase on a scales x positions grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceMap {
    pub scales: Vec<f64>,
    pub positions: usize,
    /// Row-major, `scales.len() * positions` entries.
    pub coherence: Vec<f64>,
    /// Row-major, radians in (-pi, pi].
    pub phase: Vec<f64>,
    /// Row-major flat indices of cells with a numerically zero smoothed auto-spectrum.
    pub invalid: Vec<usize>,
    pub smoothing: SmoothingDescriptor,
    pub coi: Vec<f64>,
}

impl CoherenceMap {
    pub fn coherence_at(&self, scale_index: usize, position: usize) -> f64 {
        self.coherence[scale_index * self.positions + position]
    }

    pub fn phase_at(&self, scale_index: usize, position: usize) -> f64 {
        self.phase[scale_index * self.positions + position]
    }

    pub fn is_valid(&self, scale_index: usize, position: usize) -> bool {
        self.invalid
            .binary_search(&(scale_index * self.positions + position))
            .is_err()
    }

    /// Whether the cell lies outside the cone of influence.
    pub fn is_interior(&self, scale_index: usize, position: usize) -> bool {
        self.coi[position] > self.scales[scale_index]
    }
}

fn wrap_phase(p: f64) -> f64 {
    if p <= -std::f64::consts::PI {
        p + 2.0 * std::f64::consts::PI
    } else {
        p
    }
}

/// `smoothing = None` skips the smoothing operator; that ratio is identically 1
/// wherever defined and is only reachable from tests.
pub(crate) fn coherence_from_transforms(
    wx: &CwtMatrix,
    wy: &CwtMatrix,
    smoothing: Option<&SmoothingParams>,
) -> Result<CoherenceMap> {
    let scales = wx.scales();
    let n = wx.signal_length();
    let product = |f: &dyn Fn(Complex64, Complex64) -> Complex64| -> Vec<Vec<Complex64>> {
        wx.rows()
            .iter()
            .zip(wy.rows())
            .map(|(rx, ry)| rx.iter().zip(ry).map(|(a, b)| f(*a, *b)).collect())
            .collect()
    };
    let cross = product(&|a, b| a * b.conj());
    let auto_x = product(&|a, _| a * a.conj());
    let auto_y = product(&|_, b| b * b.conj());
    let (cross, auto_x, auto_y, descriptor) = match smoothing {
        Some(p) => (
            smooth_spectrum(&cross, scales, p)?,
            smooth_spectrum(&auto_x, scales, p)?,
            smooth_spectrum(&auto_y, scales, p)?,
            SmoothingDescriptor {
                time_factor: p.time_factor,
                time_windows: scales.scales().iter().map(|&a| p.time_window(a)).collect(),
                scale_window: p.scale_window,
            },
        ),
        None => (
            cross,
            auto_x,
            auto_y,
            SmoothingDescriptor {
                time_factor: 0.0,
                time_windows: vec![1; scales.len()],
                scale_window: 1,
            },
        ),
    };
    let floor = |m: &[Vec<Complex64>]| {
        ZERO_POWER_RATIO * m.iter().flatten().map(|c| c.re).fold(0.0, f64::max)
    };
    let (floor_x, floor_y) = (floor(&auto_x), floor(&auto_y));
    let total = scales.len() * n;
    let mut coherence = Vec::with_capacity(total);
    let mut phase = Vec::with_capacity(total);
    let mut invalid = Vec::new();
    for i in 0..scales.len() {
        for b in 0..n {
            let sxx = auto_x[i][b].re;
            let syy = auto_y[i][b].re;
            let sxy = cross[i][b];
            if sxx <= floor_x || syy <= floor_y {
                invalid.push(i * n + b);
                coherence.push(0.0);
                phase.push(0.0);
            } else {
                coherence.push(sxy.norm_sqr() / (sxx * syy));
                phase.push(wrap_phase(sxy.im.atan2(sxy.re)));
            }
        }
    }
    if invalid.len() * 2 > total {
        return Err(Error::DegenerateSmoothing {
            invalid: invalid.len(),
            total,
        });
    }
    Ok(CoherenceMap {
        scales: scales.scales().to_vec(),
        positions: n,
        coherence,
        phase,
        invalid,
        smoothing: descriptor,
        coi: cone_of_influence(n),
    })
}

/// Wavelet coherence `|S(Wx Wy*)|^2 / (S|Wx|^2 S|Wy|^2)` and phase `arg S(Wx Wy*)`.
pub fn wavelet_coherence(
    x: &Signal,
    y: &Signal,
    wavelet: &ComplexGaussian,
    scales: &ScaleGrid,
    smoothing: &SmoothingParams,
) -> Result<CoherenceMap> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    smoothing.validate()?;
    for (name, s) in [("x", x), ("y", y)] {
        if s.variance() == 0.0 {
            return Err(Error::ZeroVariance(format!(
                "signal {name} is constant; coherence is undefined"
            )));
        }
    }
    let wx = cwt(x, wavelet, scales)?;
    let wy = cwt(y, wavelet, scales)?;
    coherence_from_transforms(&wx, &wy, Some(smoothing))
}
