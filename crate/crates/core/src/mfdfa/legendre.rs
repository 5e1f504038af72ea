use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_DEAD_BAND: f64 = 0.02;
const MIN_SPECTRUM_POINTS: usize = 5;

/// `tau(q) = q h(q) - 1`.
pub fn scaling_exponents(h: &[f64], q: &[f64]) -> Vec<f64> {
    h.iter().zip(q).map(|(h, q)| q * h - 1.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularitySpectrum {
    pub alpha: Vec<f64>,
    pub f_alpha: Vec<f64>,
    /// `max(alpha) - min(alpha)`.
    pub width: f64,
}

/// Legendre transform of `tau(q)` on a uniform grid: `alpha = d tau / d q`
/// by central differences (one-sided at the ends) and `f = q alpha - tau`.
pub fn singularity_spectrum(tau: &[f64], q: &[f64]) -> Result<SingularitySpectrum> {
    let n = q.len();
    if n < MIN_SPECTRUM_POINTS || tau.len() != n {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SPECTRUM_POINTS} matching q and tau values, got {} and {}",
            n,
            tau.len()
        )));
    }
    let step = q[1] - q[0];
    let uniform = q
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step.abs().max(1.0));
    if !uniform || !(step > 0.0) {
        return Err(Error::NonUniformGrid(format!(
            "q grid spacing varies around {step}"
        )));
    }
    let alpha: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => (tau[1] - tau[0]) / step,
            i if i == n - 1 => (tau[n - 1] - tau[n - 2]) / step,
            i => (tau[i + 1] - tau[i - 1]) / (2.0 * step),
        })
        .collect();
    let f_alpha = alpha
        .iter()
        .zip(q)
        .zip(tau)
        .map(|((a, q), t)| q * a - t)
        .collect();
    let max = alpha.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = alpha.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(SingularitySpectrum {
        alpha,
        f_alpha,
        width: max - min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    AntiCorrelated,
    Uncorrelated,
    LongRangeCorrelated,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::AntiCorrelated => "anti_correlated",
            Classification::Uncorrelated => "uncorrelated",
            Classification::LongRangeCorrelated => "long_range_correlated",
        }
    }
}

/// Uncorrelated within `dead_band` of 1/2, otherwise by the side of 1/2.
pub fn classify_correlation(hurst: f64, dead_band: f64) -> Classification {
    if (hurst - 0.5).abs() <= dead_band {
        Classification::Uncorrelated
    } else if hurst > 0.5 {
        Classification::LongRangeCorrelated
    } else {
        Classification::AntiCorrelated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..=40).map(|k| -5.0 + 0.25 * k as f64).collect()
    }

    #[test]
    fn monofractal_line() {
        let q = grid();
        let h = vec![0.7; q.len()];
        let tau = scaling_exponents(&h, &q);
        assert_eq!(tau[20], -1.0);
        let s = singularity_spectrum(&tau, &q).unwrap();
        for (a, f) in s.alpha.iter().zip(&s.f_alpha) {
            assert!((a - 0.7).abs() < 1e-12);
            assert!((f - 1.0).abs() < 1e-12);
        }
        assert!(s.width < 1e-12);
        assert_eq!(s.f_alpha[20], 1.0);
    }

    #[test]
    fn quadratic_tau_has_linear_alpha() {
        // tau = q^2: central differences are exact, alpha = 2q inside
        let q = grid();
        let tau: Vec<f64> = q.iter().map(|q| q * q).collect();
        let s = singularity_spectrum(&tau, &q).unwrap();
        for i in 1..q.len() - 1 {
            assert!((s.alpha[i] - 2.0 * q[i]).abs() < 1e-12);
        }
        // one-sided ends: (tau_1 - tau_0) / dq = q_0 + q_1
        assert!((s.alpha[0] - (q[0] + q[1])).abs() < 1e-12);
    }

    #[test]
    fn grid_checks() {
        let q = vec![0.0, 1.0, 2.0, 3.5, 4.0];
        assert!(matches!(
            singularity_spectrum(&[0.0; 5], &q),
            Err(Error::NonUniformGrid(_))
        ));
        assert!(singularity_spectrum(&[0.0; 4], &[0.0, 1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_correlation(0.6480, DEFAULT_DEAD_BAND), Classification::LongRangeCorrelated);
        assert_eq!(classify_correlation(0.5048, DEFAULT_DEAD_BAND), Classification::Uncorrelated);
        assert_eq!(classify_correlation(0.4028, DEFAULT_DEAD_BAND), Classification::AntiCorrelated);
        assert_eq!(classify_correlation(0.5, DEFAULT_DEAD_BAND), Classification::Uncorrelated);
        assert_eq!(classify_correlation(0.515, 0.02), Classification::Uncorrelated);
        assert_eq!(classify_correlation(0.545, 0.05), Classification::Uncorrelated);
    }
}
