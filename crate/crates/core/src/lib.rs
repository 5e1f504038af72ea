//! Fractal and wavelet analysis of one-dimensional signals and unfolded
//! grayscale images.
//!
//! * [`dwt`]: Daubechies filter banks, multilevel decomposition and
//!   single-band reconstruction.
//! * [`cwt`]: complex Gaussian continuous wavelet transform and wavelet
//!   coherence with phase.
//! * [`mfdfa`]: multifractal detrended fluctuation analysis, generalized
//!   Hurst exponents and the singularity spectrum.
//! * [`synth`]: reproducible fractional Gaussian noise, fractional Brownian
//!   motion, white noise and binomial cascades.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cwt;
pub mod dwt;
pub mod error;
pub mod io;
pub mod mfdfa;
pub mod signal;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use signal::{build_profile, unfold_image, GrayImage, Profile, Signal, UnfoldDirection};
