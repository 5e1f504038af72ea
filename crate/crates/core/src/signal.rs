//! Shared domain types: 1-D signals, grayscale images and MFDFA profiles.
//!
//! A [`Signal`] is a finite real sequence with unit index spacing. Images are
//! turned into signals by concatenating pixels along one linear direction
//! ([`unfold_image`]), and signals are integrated into a [`Profile`] before
//! detrended fluctuation analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite real samples with implicit unit spacing. Never empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::SignalTooShort {
                required: 1,
                actual: 0,
            });
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Range(format!(
                "sample {} is not finite ({})",
                i, samples[i]
            )));
        }
        Ok(Signal(samples))
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Population variance about the sample mean.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.0.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / self.0.len() as f64
    }

    pub fn reversed(&self) -> Signal {
        let mut v = self.0.clone();
        v.reverse();
        Signal(v)
    }

    /// Elementwise `gain * x + offset`.
    pub fn affine(&self, gain: f64, offset: f64) -> Result<Signal> {
        Signal::new(self.0.iter().map(|v| gain * v + offset).collect())
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Single-channel image, pixels stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
    range: (f64, f64),
}

impl GrayImage {
    /// Builds an image whose pixels must lie in the declared `range`.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>, range: (f64, f64)) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::ShapeMismatch(format!(
                "{} pixels for a {}x{} image",
                pixels.len(),
                width,
                height
            )));
        }
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Range(format!("invalid value range ({lo}, {hi})")));
        }
        if let Some(i) = pixels
            .iter()
            .position(|p| !p.is_finite() || *p < lo || *p > hi)
        {
            return Err(Error::Range(format!(
                "pixel {} = {} outside declared range [{}, {}]",
                i, pixels[i], lo, hi
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
            range,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.pixels[r * self.width..(r + 1) * self.width]
    }
}

/// Order in which pixels are concatenated into a 1-D series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnfoldDirection {
    /// Rows top to bottom, each left to right.
    #[default]
    RowMajor,
    /// Columns left to right, each top to bottom.
    ColumnMajor,
    /// Rows top to bottom, every second row right to left.
    Boustrophedon,
}

impl std::str::FromStr for UnfoldDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "row_major" => Ok(UnfoldDirection::RowMajor),
            "column_major" => Ok(UnfoldDirection::ColumnMajor),
            "boustrophedon" => Ok(UnfoldDirection::Boustrophedon),
            _ => Err(Error::InvalidParameter(format!(
                "unknown unfold direction '{s}'"
            ))),
        }
    }
}

/// Pixel-wise unfolding of an image into a signal of length `W * H`.
pub fn unfold_image(image: &GrayImage, direction: UnfoldDirection) -> Signal {
    let (w, h) = (image.width, image.height);
    let samples = match direction {
        UnfoldDirection::RowMajor => image.pixels.clone(),
        UnfoldDirection::ColumnMajor => (0..w)
            .flat_map(|c| (0..h).map(move |r| (r, c)))
            .map(|(r, c)| image.pixels[r * w + c])
            .collect(),
        UnfoldDirection::Boustrophedon => (0..h)
            .flat_map(|r| {
                let row = image.row(r);
                let it: Box<dyn Iterator<Item = &f64>> = if r % 2 == 1 {
                    Box::new(row.iter().rev())
                } else {
                    Box::new(row.iter())
                };
                it.copied()
            })
            .collect(),
    };
    // pixels were validated finite and the image is non-empty
    Signal(samples)
}

/// Cumulative sum of the mean-subtracted signal, `Y(i) = sum_{k<=i} (x_k - <x>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
    source_mean: f64,
}

impl Profile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_mean(&self) -> f64 {
        self.source_mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Profile read back to front. Used for reversal checks; the source mean is kept.
    pub fn reversed(&self) -> Profile {
        let mut values = self.values.clone();
        values.reverse();
        Profile {
            values,
            source_mean: self.source_mean,
        }
    }

    /// Wraps precomputed profile values (e.g. a synthetic trend).
    pub fn from_values(values: Vec<f64>) -> Result<Profile> {
        if values.len() < 2 {
            return Err(Error::SignalTooShort {
                required: 2,
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Range("profile contains non-finite values".into()));
        }
        Ok(Profile {
            values,
            source_mean: 0.0,
        })
    }
}

pub fn build_profile(signal: &Signal) -> Result<Profile> {
    let n = signal.len();
    if n < 2 {
        return Err(Error::SignalTooShort {
            required: 2,
            actual: n,
        });
    }
    let mean = signal.mean();
    let mut acc = 0.0;
    let values = signal
        .samples()
        .iter()
        .map(|x| {
            acc += x - mean;
            acc
        })
        .collect();
    Ok(Profile {
        values,
        source_mean: mean,
    })
}
