//! Multifractal detrended fluctuation analysis.
//!
//! The profile is cut into non-overlapping segments of length `s`, counted
//! both from the start and from the end. Each segment is detrended by a
//! least-squares polynomial, and the residual variances are combined into the
//! q-th order fluctuation function
//! `F_q(s) = { mean_b [F^2(b, s)]^(q/2) }^(1/q)`, with the logarithmic
//! average `exp(mean_b ln F^2(b, s) / 2)` at `q = 0`. The log-log slope of
//! `F_q(s)` against `s` is the generalized Hurst exponent `h(q)`, from which
//! `tau(q) = q h(q) - 1` and its Legendre transform `(alpha, f(alpha))` follow.

mod detrend;
mod legendre;

pub use detrend::{detrended_variance, Direction};
pub use legendre::{
    classify_correlation, scaling_exponents, singularity_spectrum, Classification,
    SingularitySpectrum, DEFAULT_DEAD_BAND,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{Cell, Table};
use crate::signal::{build_profile, Profile, Signal};
use crate::stats::linear_fit;

use detrend::{segment, PolyBasis, ZERO_VARIANCE_RATIO};

pub const DEFAULT_DETREND_ORDER: usize = 1;
pub const MAX_DETREND_ORDER: usize = 3;
pub const MAX_ABS_MOMENT: f64 = 10.0;
pub const DEFAULT_SCALE_COUNT: usize = 20;
pub const DEFAULT_MIN_SEGMENT: usize = 16;
pub const MIN_FIT_SCALES: usize = 4;
/// Largest tolerated fraction of zero-variance segments at any scale.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.1;

/// Strictly increasing moment orders, bounded by 10 in magnitude and
/// containing `q = 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MomentGrid(Vec<f64>);

impl MomentGrid {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.iter().any(|v| !v.is_finite() || v.abs() > MAX_ABS_MOMENT) {
            return Err(Error::InvalidParameter(format!(
                "moment orders must be finite with |q| <= {MAX_ABS_MOMENT}"
            )));
        }
        if q.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "moment orders must be strictly increasing".into(),
            ));
        }
        if !q.contains(&2.0) {
            return Err(Error::InvalidParameter(
                "moment grid must contain q = 2".into(),
            ));
        }
        Ok(MomentGrid(q))
    }

    /// `lo, lo + step, ..., hi`, each value computed as `lo + k * step`.
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi >= lo) {
            return Err(Error::InvalidParameter(format!(
                "cannot build a moment grid from {lo} to {hi} with step {step}"
            )));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        MomentGrid::new((0..=count).map(|k| lo + k as f64 * step).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, q: f64) -> Option<usize> {
        self.0.iter().position(|&v| v == q)
    }
}

impl Default for MomentGrid {
    /// `-5, -4.75, ..., 5`.
    fn default() -> Self {
        MomentGrid((0..=40).map(|k| -5.0 + 0.25 * k as f64).collect())
    }
}

/// Segment lengths checked against the detrending order and signal length.
pub fn validate_scales(scales: &[usize], order: usize, n: usize) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidParameter("segment scale grid is empty".into()));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "segment scales must be strictly increasing".into(),
        ));
    }
    if scales[0] < order + 2 {
        return Err(Error::DegenerateFit {
            scale: scales[0],
            order,
        });
    }
    let s_max = *scales.last().unwrap();
    if n < 4 * s_max {
        return Err(Error::SignalTooShort {
            required: 4 * s_max,
            actual: n,
        });
    }
    Ok(())
}

/// `count` log-spaced integers from `lo` to `hi`, rounded and deduplicated.
pub fn log_spaced_scales(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || hi <= lo {
        return vec![lo];
    }
    let ratio = hi as f64 / lo as f64;
    let mut out: Vec<usize> = (0..count)
        .map(|k| (lo as f64 * ratio.powf(k as f64 / (count - 1) as f64)).round() as usize)
        .collect();
    out.dedup();
    out
}

/// 20 log-spaced segment lengths in `[16, N/4]`.
pub fn default_scales(n: usize) -> Result<Vec<usize>> {
    let hi = n / 4;
    if hi < DEFAULT_MIN_SEGMENT {
        return Err(Error::SignalTooShort {
            required: 4 * DEFAULT_MIN_SEGMENT,
            actual: n,
        });
    }
    Ok(log_spaced_scales(DEFAULT_MIN_SEGMENT, hi, DEFAULT_SCALE_COUNT))
}

/// `F_q(s)` over a moment grid and a scale grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluctuationTable {
    q: Vec<f64>,
    scales: Vec<usize>,
    /// `values[i][j]` is `F_{q_i}(s_j)`.
    values: Vec<Vec<f64>>,
    detrend_order: usize,
    /// Zero-variance segments left out at each `(q, s)`.
    excluded: Vec<Vec<usize>>,
    /// Segments available at each scale, both directions together.
    segments: Vec<usize>,
}

impl FluctuationTable {
    /// Wraps precomputed values, e.g. from another implementation.
    pub fn from_values(
        q: &MomentGrid,
        scales: Vec<usize>,
        values: Vec<Vec<f64>>,
        detrend_order: usize,
    ) -> Result<Self> {
        if values.len() != q.len() || values.iter().any(|row| row.len() != scales.len()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} x {} fluctuation values",
                q.len(),
                scales.len()
            )));
        }
        if values.iter().flatten().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Range("fluctuation values must be finite and positive".into()));
        }
        let zeros = vec![vec![0; scales.len()]; q.len()];
        Ok(FluctuationTable {
            q: q.values().to_vec(),
            segments: vec![0; scales.len()],
            scales,
            values,
            detrend_order,
            excluded: zeros,
        })
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn scales(&self) -> &[usize] {
        &self.scales
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, qi: usize, si: usize) -> f64 {
        self.values[qi][si]
    }

    pub fn detrend_order(&self) -> usize {
        self.detrend_order
    }

    pub fn excluded(&self) -> &[Vec<usize>] {
        &self.excluded
    }

    /// Long format `q, s, F, excluded`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::with_header(&["q", "s", "F", "excluded"]);
        for (i, &q) in self.q.iter().enumerate() {
            for (j, &s) in self.scales.iter().enumerate() {
                t.push(vec![
                    Cell::from(q),
                    Cell::from(s),
                    Cell::from(self.values[i][j]),
                    Cell::from(self.excluded[i][j]),
                ]);
            }
        }
        t
    }
}

/// Residual variances of all `2 N_s` segments at scale `s`, forward ones first.
fn segment_variances(profile: &Profile, s: usize, basis: &PolyBasis) -> Vec<f64> {
    let values = profile.values();
    let count = values.len() / s;
    [Direction::Forward, Direction::Backward]
        .into_iter()
        .flat_map(|dir| (1..=count).map(move |b| (dir, b)))
        .map(|(dir, b)| {
            let (res, raw) = basis.residual_variance(segment(values, s, b, dir));
            if res <= ZERO_VARIANCE_RATIO * raw {
                0.0
            } else {
                res
            }
        })
        .collect()
}

/// q-th order average of positive variances, evaluated in log space.
fn moment_average(q: f64, log_var: &[f64]) -> f64 {
    let n = log_var.len() as f64;
    if q == 0.0 {
        return (log_var.iter().sum::<f64>() / n / 2.0).exp();
    }
    let exps: Vec<f64> = log_var.iter().map(|l| 0.5 * q * l).collect();
    let peak = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exps.iter().map(|e| (e - peak).exp()).sum();
    ((peak + (sum / n).ln()) / q).exp()
}

/// `F_q(s)` for every moment and scale.
pub fn fluctuation_function(
    profile: &Profile,
    q: &MomentGrid,
    scales: &[usize],
    order: usize,
) -> Result<FluctuationTable> {
    if order > MAX_DETREND_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            min: 0,
            max: MAX_DETREND_ORDER,
        });
    }
    validate_scales(scales, order, profile.len())?;
    let mut values = vec![Vec::with_capacity(scales.len()); q.len()];
    let mut excluded = vec![Vec::with_capacity(scales.len()); q.len()];
    let mut segments = Vec::with_capacity(scales.len());
    for &s in scales {
        let basis = PolyBasis::new(s, order)?;
        let var = segment_variances(profile, s, &basis);
        let total = var.len();
        let log_var: Vec<f64> = var.iter().filter(|v| **v > 0.0).map(|v| v.ln()).collect();
        let dropped = total - log_var.len();
        if dropped as f64 > MAX_EXCLUDED_FRACTION * total as f64 {
            return Err(Error::TooManyDegenerateSegments {
                scale: s,
                excluded: dropped,
                total,
            });
        }
        for (i, &qv) in q.values().iter().enumerate() {
            values[i].push(moment_average(qv, &log_var));
            excluded[i].push(dropped);
        }
        segments.push(total);
    }
    Ok(FluctuationTable {
        q: q.values().to_vec(),
        scales: scales.to_vec(),
        values,
        detrend_order: order,
        excluded,
        segments,
    })
}

/// Per-moment log-log slopes of a fluctuation table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurstFit {
    pub h: Vec<f64>,
    pub stderr: Vec<f64>,
    pub r_squared: Vec<f64>,
}

/// Fits `ln F_q(s) = c + h(q) ln s` over scales in `[fit_range.0, fit_range.1]`.
pub fn fit_hurst_exponents(table: &FluctuationTable, fit_range: (usize, usize)) -> Result<HurstFit> {
    let idx: Vec<usize> = table
        .scales
        .iter()
        .enumerate()
        .filter(|(_, s)| (fit_range.0..=fit_range.1).contains(*s))
        .map(|(j, _)| j)
        .collect();
    if idx.len() < MIN_FIT_SCALES {
        return Err(Error::InsufficientScales {
            found: idx.len(),
            required: MIN_FIT_SCALES,
        });
    }
    let x: Vec<f64> = idx.iter().map(|&j| (table.scales[j] as f64).ln()).collect();
    let mut fit = HurstFit {
        h: Vec::with_capacity(table.q.len()),
        stderr: Vec::with_capacity(table.q.len()),
        r_squared: Vec::with_capacity(table.q.len()),
    };
    for row in &table.values {
        let y: Vec<f64> = idx.iter().map(|&j| row[j].ln()).collect();
        let line = linear_fit(&x, &y).ok_or(Error::InsufficientScales {
            found: idx.len(),
            required: MIN_FIT_SCALES,
        })?;
        fit.h.push(line.slope);
        fit.stderr.push(line.slope_stderr);
        fit.r_squared.push(line.r_squared);
    }
    Ok(fit)
}

/// Analysis settings; `None` fields take their defaults for the input length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MfdfaConfig {
    pub q: MomentGrid,
    pub scales: Option<Vec<usize>>,
    pub detrend_order: usize,
    pub fit_range: Option<(usize, usize)>,
    pub dead_band: f64,
}

impl Default for MfdfaConfig {
    fn default() -> Self {
        MfdfaConfig {
            q: MomentGrid::default(),
            scales: None,
            detrend_order: DEFAULT_DETREND_ORDER,
            fit_range: None,
            dead_band: DEFAULT_DEAD_BAND,
        }
    }
}

impl MfdfaConfig {
    /// Copy with every default filled in for a series of length `n`.
    pub fn resolved(&self, n: usize) -> Result<MfdfaConfig> {
        let scales = match &self.scales {
            Some(s) => s.clone(),
            None => default_scales(n)?,
        };
        let fit_range = self
            .fit_range
            .unwrap_or((scales[0], *scales.last().unwrap()));
        Ok(MfdfaConfig {
            q: self.q.clone(),
            scales: Some(scales),
            detrend_order: self.detrend_order,
            fit_range: Some(fit_range),
            dead_band: self.dead_band,
        })
    }
}

/// Everything derived from one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultifractalSpectrum {
    pub q: Vec<f64>,
    pub h: Vec<f64>,
    pub h_stderr: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f_alpha: Vec<f64>,
    pub width: f64,
    pub hurst: f64,
    pub classification: Classification,
    pub config: MfdfaConfig,
}

/// Full pipeline, also returning the fluctuation table.
pub fn analyze_with_table(
    signal: &Signal,
    config: &MfdfaConfig,
) -> Result<(MultifractalSpectrum, FluctuationTable)> {
    let config = config.resolved(signal.len())?;
    let profile = build_profile(signal)?;
    let scales = config.scales.as_deref().unwrap_or_default();
    let table = fluctuation_function(&profile, &config.q, scales, config.detrend_order)?;
    let fit = fit_hurst_exponents(&table, config.fit_range.unwrap_or_default())?;
    let q = config.q.values().to_vec();
    let tau = scaling_exponents(&fit.h, &q);
    let spectrum = singularity_spectrum(&tau, &q)?;
    let hurst = fit.h[config.q.index_of(2.0).expect("grid contains q = 2")];
    let classification = classify_correlation(hurst, config.dead_band);
    Ok((
        MultifractalSpectrum {
            q,
            h: fit.h,
            h_stderr: fit.stderr,
            tau,
            alpha: spectrum.alpha,
            f_alpha: spectrum.f_alpha,
            width: spectrum.width,
            hurst,
            classification,
            config,
        },
        table,
    ))
}

pub fn analyze(signal: &Signal, config: &MfdfaConfig) -> Result<MultifractalSpectrum> {
    analyze_with_table(signal, config).map(|(s, _)| s)
}
