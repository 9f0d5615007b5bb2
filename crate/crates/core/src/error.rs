use thiserror::Error;

/// Errors raised by witness construction, classification and certification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),

    #[error("operation requires n = {expected}, got n = {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("operand is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid alpha vector: {0}")]
    InvalidAlpha(String),

    #[error("not a valid witness parameterization: alpha[{index}] = {value:e} is negative")]
    NegativeAlpha { index: usize, value: f64 },

    #[error("invalid spectral coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid torus parameters: {0}")]
    InvalidTorus(String),

    #[error("matrix is not orthogonal: deviation {0:.3e}")]
    NotOrthogonal(f64),

    #[error("invalid stochastic profile: {0}")]
    InvalidProfile(String),

    #[error("profile is not circulant: deviation {deviation:.3e} at ({row}, {col})")]
    NotCirculant { deviation: f64, row: usize, col: usize },

    #[error("alpha is not symmetric: alpha[{index}] = {value} but alpha[{mirror}] = {mirror_value}")]
    NotSymmetric {
        index: usize,
        mirror: usize,
        value: f64,
        mirror_value: f64,
    },

    #[error("circulant part has negative eigenvalue {value:e} at frequency {index}")]
    NegativeCirculantEigenvalue { index: usize, value: f64 },

    #[error("no certificate exists at index {0} (decomposable direction)")]
    NoCertificateAtIndex(usize),

    #[error("alpha[{0}] is zero; a PPT certificate needs a positive coefficient at the chosen index")]
    ZeroCoefficient(usize),

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("eigensolver produced non-finite output for a {0}x{0} matrix")]
    EigenSolver(usize),

    #[error("point is off the simplex: sum = {sum}, expected {expected}")]
    OffSimplex { sum: f64, expected: f64 },

    #[error("gray zone: asymmetry margin {margin:.3e} is too small to certify either way")]
    GrayZone { margin: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
