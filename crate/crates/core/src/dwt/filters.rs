//! Daubechies filter banks generated by spectral factorization.
//!
//! The squared magnitude response of an order-`p` Daubechies low-pass filter
//! is `cos^{2p}(w/2) * P(sin^2(w/2))` with
//! `P(y) = sum_{k<p} C(p-1+k, k) y^k`. Each root `y_i` of `P` maps to a pair of
//! reciprocal zeros of the filter polynomial through `z + 1/z = 2 - 4 y_i`;
//! keeping one zero per pair (the extremal-phase choice) and multiplying by
//! `(1 + z)^p` gives the taps.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 1;
pub const MAX_ORDER: usize = 10;

/// Quadrature-mirror pair of an orthogonal Daubechies wavelet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveletFilter {
    order: usize,
    low_pass: Vec<f64>,
    high_pass: Vec<f64>,
}

impl WaveletFilter {
    /// Number of vanishing moments.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn low_pass(&self) -> &[f64] {
        &self.low_pass
    }

    pub fn high_pass(&self) -> &[f64] {
        &self.high_pass
    }

    /// Filter length, `2p`.
    pub fn taps(&self) -> usize {
        self.low_pass.len()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn poly_eval_derivative(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * x + c * k as f64)
}

/// All complex roots of the polynomial `sum coeffs[k] x^k` (Weierstrass /
/// Durand-Kerner iteration followed by Newton polishing).
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..degree].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let seed = Complex64::from_polar(radius.min(2.0), 0.4);
    let mut roots: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..degree {
            let num = poly_eval(&monic, roots[i]);
            let den = (0..degree)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = num / den;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = poly_eval_derivative(&monic, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= poly_eval(&monic, *r) / d;
        }
    }
    roots
}

/// Order-`p` Daubechies filters, `1 <= p <= 10`. `p = 1` is Haar.
pub fn daubechies_filters(order: usize) -> Result<WaveletFilter> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::UnsupportedOrder {
            order,
            min: MIN_ORDER,
            max: MAX_ORDER,
        });
    }
    let p = order;
    let p_coeffs: Vec<f64> = (0..p).map(|k| binomial(p - 1 + k, k)).collect();

    // polynomial in w = z^{-1}, lowest degree first
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    let mul = |poly: &mut Vec<Complex64>, root: Complex64| {
        // poly *= (w - root)
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * root;
        }
        *poly = next;
    };
    for _ in 0..p {
        mul(&mut poly, Complex64::new(-1.0, 0.0));
    }
    for y in polynomial_roots(&p_coeffs) {
        let b = Complex64::new(2.0, 0.0) - 4.0 * y;
        let disc = (b * b - 4.0).sqrt();
        let r1 = (b + disc) / 2.0;
        let r2 = (b - disc) / 2.0;
        // extremal phase: zeros in w outside the unit circle
        let root = if r1.norm() >= r2.norm() { r1 } else { r2 };
        mul(&mut poly, root);
    }
    let raw: Vec<f64> = poly.iter().map(|c| c.re).collect();
    let sum: f64 = raw.iter().sum();
    let scale = std::f64::consts::SQRT_2 / sum;
    let low_pass: Vec<f64> = raw.iter().map(|c| c * scale).collect();
    let taps = low_pass.len();
    let high_pass = (0..taps)
        .map(|k| {
            let v = low_pass[taps - 1 - k];
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(WaveletFilter {
        order,
        low_pass,
        high_pass,
    })
}
