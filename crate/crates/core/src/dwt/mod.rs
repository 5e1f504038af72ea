//! Multilevel orthogonal discrete wavelet transform.
//!
//! Standard pyramid: at every level the current approximation is filtered by
//! the low/high-pass pair and downsampled by two, using
//! `c[n] = sum_k h[k] x(2n + k)`. Details are stored finest first.
//!
//! Two boundary conventions are supported. `Periodic` wraps the signal (odd
//! lengths get one periodic sample appended, dropped again on reconstruction)
//! and keeps the transform orthonormal. `Symmetric` reflects the signal about
//! its half-sample ends and keeps `ceil((len + taps - 1) / 2)` coefficients per
//! level, which is enough for exact reconstruction.

mod filters;

pub use filters::{daubechies_filters, WaveletFilter, MAX_ORDER, MIN_ORDER};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    #[default]
    Periodic,
    Symmetric,
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryMode::Periodic),
            "symmetric" => Ok(BoundaryMode::Symmetric),
            _ => Err(Error::InvalidParameter(format!("unknown boundary mode '{s}'"))),
        }
    }
}

/// Approximation at the coarsest level plus one detail band per level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DwtDecomposition {
    order: usize,
    levels: usize,
    boundary_mode: BoundaryMode,
    original_length: usize,
    approx: Vec<f64>,
    details: Vec<Vec<f64>>,
}

impl DwtDecomposition {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn boundary_mode(&self) -> BoundaryMode {
        self.boundary_mode
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    /// Detail bands, `details()[0]` is level 1 (finest).
    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Detail coefficients of level `j` (1-based).
    pub fn detail(&self, j: usize) -> Option<&[f64]> {
        j.checked_sub(1)
            .and_then(|i| self.details.get(i))
            .map(Vec::as_slice)
    }

    pub fn approx_mut(&mut self) -> &mut Vec<f64> {
        &mut self.approx
    }

    pub fn details_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.details
    }

    /// Total coefficient energy.
    pub fn energy(&self) -> f64 {
        let sq = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>();
        sq(&self.approx) + self.details.iter().map(|d| sq(d)).sum::<f64>()
    }

    /// Copy with every band zeroed except detail level `j` (`None` keeps only the approximation).
    pub fn isolate_band(&self, j: Option<usize>) -> DwtDecomposition {
        let mut out = self.clone();
        if j.is_some() {
            out.approx.iter_mut().for_each(|c| *c = 0.0);
        }
        for (i, d) in out.details.iter_mut().enumerate() {
            if j != Some(i + 1) {
                d.iter_mut().for_each(|c| *c = 0.0);
            }
        }
        out
    }
}

/// Coefficient count produced from an input of length `len`.
fn coeff_len(len: usize, taps: usize, mode: BoundaryMode) -> usize {
    match mode {
        BoundaryMode::Periodic => len.div_ceil(2),
        BoundaryMode::Symmetric => (len + taps - 1).div_ceil(2),
    }
}

/// Lengths of the approximation entering each level, `lens[0] = N`, plus the final one.
fn level_lengths(n: usize, levels: usize, taps: usize, mode: BoundaryMode) -> Vec<usize> {
    let mut lens = Vec::with_capacity(levels + 1);
    lens.push(n);
    for _ in 0..levels {
        let prev = *lens.last().unwrap();
        lens.push(coeff_len(prev, taps, mode));
    }
    lens
}

/// Deepest level allowed for length `n`: each level keeps a full filter span.
pub fn max_levels(n: usize, filter: &WaveletFilter) -> usize {
    let span = filter.taps() - 1;
    let mut j = 0;
    while span << (j + 1) <= n {
        j += 1;
    }
    j
}

fn symmetric_index(i: isize, len: usize) -> usize {
    let period = 2 * len as isize;
    let r = i.rem_euclid(period) as usize;
    if r < len {
        r
    } else {
        2 * len - 1 - r
    }
}

fn analyze_level(x: &[f64], filter: &WaveletFilter, mode: BoundaryMode) -> (Vec<f64>, Vec<f64>) {
    let h = filter.low_pass();
    let g = filter.high_pass();
    let taps = h.len();
    let out_len = coeff_len(x.len(), taps, mode);
    let mut approx = Vec::with_capacity(out_len);
    let mut detail = Vec::with_capacity(out_len);
    match mode {
        BoundaryMode::Periodic => {
            let padded = 2 * out_len;
            let sample = |i: usize| {
                let r = i % padded;
                if r < x.len() {
                    x[r]
                } else {
                    x[0]
                }
            };
            for n in 0..out_len {
                let (mut a, mut d) = (0.0, 0.0);
                for k in 0..taps {
                    let v = sample(2 * n + k);
                    a += h[k] * v;
                    d += g[k] * v;
                }
                approx.push(a);
                detail.push(d);
            }
        }
        BoundaryMode::Symmetric => {
            let offset = (taps / 2 - 1) as isize;
            for m in 0..out_len {
                let base = 2 * (m as isize - offset);
                let (mut a, mut d) = (0.0, 0.0);
                for k in 0..taps {
                    let v = x[symmetric_index(base + k as isize, x.len())];
                    a += h[k] * v;
                    d += g[k] * v;
                }
                approx.push(a);
                detail.push(d);
            }
        }
    }
    (approx, detail)
}

fn synthesize_level(
    approx: &[f64],
    detail: &[f64],
    filter: &WaveletFilter,
    mode: BoundaryMode,
    out_len: usize,
) -> Vec<f64> {
    let h = filter.low_pass();
    let g = filter.high_pass();
    let taps = h.len();
    match mode {
        BoundaryMode::Periodic => {
            let padded = 2 * approx.len();
            let mut y = vec![0.0; padded];
            for n in 0..approx.len() {
                for k in 0..taps {
                    y[(2 * n + k) % padded] += h[k] * approx[n] + g[k] * detail[n];
                }
            }
            y.truncate(out_len);
            y
        }
        BoundaryMode::Symmetric => {
            let offset = taps / 2 - 1;
            (0..out_len)
                .map(|i| {
                    let mut acc = 0.0;
                    // k = i - 2n must lie in [0, taps)
                    let n_hi = i / 2;
                    let n_lo = (i as isize - taps as isize + 2).div_euclid(2);
                    for n in n_lo..=n_hi as isize {
                        let k = (i as isize - 2 * n) as usize;
                        let m = (n + offset as isize) as usize;
                        acc += h[k] * approx[m] + g[k] * detail[m];
                    }
                    acc
                })
                .collect()
        }
    }
}

/// Forward transform with `levels` levels.
pub fn dwt_multilevel(
    signal: &Signal,
    filter: &WaveletFilter,
    levels: usize,
    mode: BoundaryMode,
) -> Result<DwtDecomposition> {
    let n = signal.len();
    if n < filter.taps() {
        return Err(Error::SignalTooShort {
            required: filter.taps(),
            actual: n,
        });
    }
    if levels == 0 {
        return Err(Error::InvalidParameter("at least one level is required".into()));
    }
    let max = max_levels(n, filter);
    if levels > max {
        return Err(Error::TooManyLevels {
            levels,
            max,
            length: n,
        });
    }
    let mut current = signal.samples().to_vec();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (a, d) = analyze_level(&current, filter, mode);
        details.push(d);
        current = a;
    }
    Ok(DwtDecomposition {
        order: filter.order(),
        levels,
        boundary_mode: mode,
        original_length: n,
        approx: current,
        details,
    })
}

/// Inverse transform; exact for decompositions produced by [`dwt_multilevel`].
pub fn idwt_multilevel(decomp: &DwtDecomposition, filter: &WaveletFilter) -> Result<Signal> {
    if decomp.order != filter.order() {
        return Err(Error::ShapeMismatch(format!(
            "decomposition uses order {} but filter has order {}",
            decomp.order,
            filter.order()
        )));
    }
    if decomp.details.len() != decomp.levels || decomp.levels == 0 {
        return Err(Error::ShapeMismatch(format!(
            "{} detail bands for {} levels",
            decomp.details.len(),
            decomp.levels
        )));
    }
    let lens = level_lengths(
        decomp.original_length,
        decomp.levels,
        filter.taps(),
        decomp.boundary_mode,
    );
    for (j, d) in decomp.details.iter().enumerate() {
        if d.len() != lens[j + 1] {
            return Err(Error::ShapeMismatch(format!(
                "level {} has {} detail coefficients, expected {}",
                j + 1,
                d.len(),
                lens[j + 1]
            )));
        }
    }
    if decomp.approx.len() != lens[decomp.levels] {
        return Err(Error::ShapeMismatch(format!(
            "approximation has {} coefficients, expected {}",
            decomp.approx.len(),
            lens[decomp.levels]
        )));
    }
    let mut current = decomp.approx.clone();
    for j in (0..decomp.levels).rev() {
        current = synthesize_level(
            &current,
            &decomp.details[j],
            filter,
            decomp.boundary_mode,
            lens[j],
        );
    }
    Signal::new(current)
}

/// Signal-domain trace of detail band `j` (or of the approximation for `None`).
pub fn band_trace(
    decomp: &DwtDecomposition,
    filter: &WaveletFilter,
    band: Option<usize>,
) -> Result<Signal> {
    if let Some(j) = band {
        if j == 0 || j > decomp.levels {
            return Err(Error::InvalidParameter(format!(
                "band {} outside 1..={}",
                j, decomp.levels
            )));
        }
    }
    idwt_multilevel(&decomp.isolate_band(band), filter)
}

/// Default band for fluctuation extraction.
pub const DEFAULT_FLUCTUATION_LEVEL: usize = 5;

/// Localized fluctuations at level `level`: the reconstruction from that
/// detail band alone, same length as the input.
pub fn extract_fluctuations(
    signal: &Signal,
    filter: &WaveletFilter,
    level: usize,
    mode: BoundaryMode,
) -> Result<Signal> {
    let decomp = dwt_multilevel(signal, filter, level, mode)?;
    band_trace(&decomp, filter, Some(level))
}
