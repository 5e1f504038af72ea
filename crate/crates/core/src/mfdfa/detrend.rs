use crate::error::{Error, Result};
use crate::signal::Profile;

/// Which end of the profile segments are counted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Segments whose residual energy falls below this fraction of their raw
/// energy are treated as exactly fitted.
pub(crate) const ZERO_VARIANCE_RATIO: f64 = 1e-24;

/// Orthonormal polynomial basis of degree `0..=order` sampled on `0..len`.
///
/// Projecting onto this basis is the least-squares polynomial fit without
/// forming normal equations.
#[derive(Debug, Clone)]
pub(crate) struct PolyBasis {
    vectors: Vec<Vec<f64>>,
}

impl PolyBasis {
    pub(crate) fn new(len: usize, order: usize) -> Result<Self> {
        if len < order + 2 {
            return Err(Error::DegenerateFit { scale: len, order });
        }
        let center = (len as f64 - 1.0) / 2.0;
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut v: Vec<f64> = (0..len)
                .map(|i| ((i as f64 - center) / len as f64).powi(k as i32))
                .collect();
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for e in &vectors {
                    let dot: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                    for (vi, ei) in v.iter_mut().zip(e) {
                        *vi -= dot * ei;
                    }
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            vectors.push(v);
        }
        Ok(PolyBasis { vectors })
    }

    /// Mean squared residual of `y` after removing its projection, together
    /// with the mean raw energy of `y`.
    pub(crate) fn residual_variance(&self, y: &[f64]) -> (f64, f64) {
        let mut r = y.to_vec();
        for e in &self.vectors {
            let dot: f64 = r.iter().zip(e).map(|(a, b)| a * b).sum();
            for (ri, ei) in r.iter_mut().zip(e) {
                *ri -= dot * ei;
            }
        }
        let s = y.len() as f64;
        let res = r.iter().map(|a| a * a).sum::<f64>() / s;
        let raw = y.iter().map(|a| a * a).sum::<f64>() / s;
        (res, raw)
    }
}

/// Slice of segment `b` (1-based) of length `s`, counted from the chosen end.
pub(crate) fn segment(values: &[f64], s: usize, b: usize, direction: Direction) -> &[f64] {
    match direction {
        Direction::Forward => &values[(b - 1) * s..b * s],
        Direction::Backward => {
            let n = values.len();
            &values[n - b * s..n - (b - 1) * s]
        }
    }
}

/// Mean squared deviation of segment `b` (1-based) of length `s` from its
/// least-squares polynomial of degree `order`.
pub fn detrended_variance(
    profile: &Profile,
    s: usize,
    b: usize,
    order: usize,
    direction: Direction,
) -> Result<f64> {
    let basis = PolyBasis::new(s, order)?;
    let n = profile.len();
    let segments = n / s;
    if b == 0 || b > segments {
        return Err(Error::InvalidParameter(format!(
            "segment index {b} outside [1, {segments}] for s = {s}, N = {n}"
        )));
    }
    let y = segment(profile.values(), s, b, direction);
    let (res, raw) = basis.residual_variance(y);
    Ok(if res <= ZERO_VARIANCE_RATIO * raw { 0.0 } else { res })
}
