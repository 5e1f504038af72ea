use std::path::PathBuf;

/// Errors produced by the analyzers and the file readers.
///
/// Variant names double as the diagnostic tag shown to command-line users,
/// so every message starts with the variant name.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("SignalTooShort: need at least {required} samples, got {actual}")]
    SignalTooShort { required: usize, actual: usize },

    #[error("RangeError: {0}")]
    Range(String),

    #[error("ParseError: {path}: {position}: {message}")]
    Parse {
        path: String,
        position: String,
        message: String,
    },

    #[error("UnsupportedOrder: order {order} outside [{min}, {max}]")]
    UnsupportedOrder { order: usize, min: usize, max: usize },

    #[error("TooManyLevels: {levels} levels requested, at most {max} allowed for length {length}")]
    TooManyLevels {
        levels: usize,
        max: usize,
        length: usize,
    },

    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),

    #[error("ScaleOutOfRange: scale {scale} outside [{min}, {max}]")]
    ScaleOutOfRange { scale: f64, min: f64, max: f64 },

    #[error("BadWindow: {0}")]
    BadWindow(String),

    #[error("LengthMismatch: signals have lengths {0} and {1}")]
    LengthMismatch(usize, usize),

    #[error("DegenerateSmoothing: {invalid} of {total} cells have a zero smoothed auto-spectrum")]
    DegenerateSmoothing { invalid: usize, total: usize },

    #[error("ZeroVariance: {0}")]
    ZeroVariance(String),

    #[error("DegenerateFit: segment length {scale} cannot support a degree-{order} fit")]
    DegenerateFit { scale: usize, order: usize },

    #[error("TooManyDegenerateSegments: {excluded} of {total} segments have zero variance at s = {scale}")]
    TooManyDegenerateSegments {
        scale: usize,
        excluded: usize,
        total: usize,
    },

    #[error("InsufficientScales: {found} scales in the fit range, need at least {required}")]
    InsufficientScales { found: usize, required: usize },

    #[error("NonUniformGrid: {0}")]
    NonUniformGrid(String),

    #[error("EmbeddingFailure: circulant eigenvalue {value:e} at index {index}")]
    EmbeddingFailure { index: usize, value: f64 },

    #[error("SpecParseError: {message} (at '{token}')")]
    SpecParse { token: String, message: String },

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("IoError: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short tag naming the failure kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SignalTooShort { .. } => "SignalTooShort",
            Error::Range(_) => "RangeError",
            Error::Parse { .. } => "ParseError",
            Error::UnsupportedOrder { .. } => "UnsupportedOrder",
            Error::TooManyLevels { .. } => "TooManyLevels",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::ScaleOutOfRange { .. } => "ScaleOutOfRange",
            Error::BadWindow(_) => "BadWindow",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::DegenerateSmoothing { .. } => "DegenerateSmoothing",
            Error::ZeroVariance(_) => "ZeroVariance",
            Error::DegenerateFit { .. } => "DegenerateFit",
            Error::TooManyDegenerateSegments { .. } => "TooManyDegenerateSegments",
            Error::InsufficientScales { .. } => "InsufficientScales",
            Error::NonUniformGrid(_) => "NonUniformGrid",
            Error::EmbeddingFailure { .. } => "EmbeddingFailure",
            Error::SpecParse { .. } => "SpecParseError",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Io { .. } => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
