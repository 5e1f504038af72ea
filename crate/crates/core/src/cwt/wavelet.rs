use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_DERIVATIVE: usize = 1;
pub const MAX_DERIVATIVE: usize = 8;
pub const DEFAULT_DERIVATIVE: usize = 2;

/// Complex Gaussian wavelet of derivative order `n`:
/// `psi(t) = C_n * d^n/dt^n [exp(-i t) exp(-t^2)]`, unit L2 norm.
///
/// The derivative is `P_n(t) exp(-i t - t^2)` with the complex polynomial
/// recursion `P_{k+1} = P_k' + (-i - 2t) P_k`, `P_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGaussian {
    order: usize,
    // coefficients of P_n, lowest degree first
    poly: Vec<Complex64>,
    norm: f64,
}

/// Family and order, as recorded in outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WaveletDescriptor {
    pub family: &'static str,
    pub derivative_order: usize,
}

/// Integral of `t^m exp(-2 t^2)` over the real line.
fn gaussian_moment(m: usize) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let mut v = (std::f64::consts::PI / 2.0).sqrt();
    for r in 0..m / 2 {
        v *= (2 * r + 1) as f64 / 4.0;
    }
    v
}

/// Trapezoid rule over [-8, 8]; exponentially accurate for these integrands.
pub(crate) fn integrate_on_support<F: Fn(f64) -> Complex64>(f: F, intervals: usize) -> Complex64 {
    let (lo, hi) = (-8.0, 8.0);
    let h = (hi - lo) / intervals as f64;
    let mut acc = (f(lo) + f(hi)) * 0.5;
    for i in 1..intervals {
        acc += f(lo + i as f64 * h);
    }
    acc * h
}

impl ComplexGaussian {
    pub fn new(order: usize) -> Result<Self> {
        if !(MIN_DERIVATIVE..=MAX_DERIVATIVE).contains(&order) {
            return Err(Error::UnsupportedOrder {
                order,
                min: MIN_DERIVATIVE,
                max: MAX_DERIVATIVE,
            });
        }
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..order {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                if k > 0 {
                    next[k - 1] += c * k as f64;
                }
                next[k] += c * Complex64::new(0.0, -1.0);
                next[k + 1] += c * -2.0;
            }
            poly = next;
        }
        let mut energy = 0.0;
        for (j, pj) in poly.iter().enumerate() {
            for (k, pk) in poly.iter().enumerate() {
                energy += (pj * pk.conj()).re * gaussian_moment(j + k);
            }
        }
        let wavelet = ComplexGaussian {
            order,
            poly,
            norm: 1.0 / energy.sqrt(),
        };
        let mean = integrate_on_support(|t| wavelet.eval(t), 8192);
        if mean.norm() > 1e-8 {
            return Err(Error::InvalidParameter(format!(
                "complex Gaussian wavelet of order {order} fails the zero-mean check ({:e})",
                mean.norm()
            )));
        }
        Ok(wavelet)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Normalization constant `C_n`.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn descriptor(&self) -> WaveletDescriptor {
        WaveletDescriptor {
            family: "complex_gaussian",
            derivative_order: self.order,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let p = self
            .poly
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
        let envelope = (-t * t).exp();
        p * Complex64::from_polar(envelope * self.norm, -t)
    }

    /// Angular frequency magnitude where `|psi_hat|` peaks: `(1 + sqrt(1 + 8n)) / 2`.
    pub fn peak_frequency(&self) -> f64 {
        (1.0 + (1.0 + 8.0 * self.order as f64).sqrt()) / 2.0
    }

    /// Angular frequency magnitude where the `1/sqrt(a)` normalized transform
    /// of a sinusoid peaks across scales: `(1 + sqrt(5 + 8n)) / 2`. A sinusoid
    /// of angular frequency `w` responds most strongly at scale
    /// `response_frequency() / w`.
    pub fn response_frequency(&self) -> f64 {
        (1.0 + (5.0 + 8.0 * self.order as f64).sqrt()) / 2.0
    }

    /// Half-width of the sampled support, in units of the scale.
    pub fn support_radius(&self) -> f64 {
        8.0
    }
}

pub fn complex_gaussian_wavelet(order: usize, t: f64) -> Result<Complex64> {
    Ok(ComplexGaussian::new(order)?.eval(t))
}
