use thiserror::Error;

/// Errors produced by state construction, linear-algebra primitives, model
/// builders and the protocol/factor engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("tensor size {entries} entries exceeds the configured maximum of {max}")]
    SizeLimit { entries: usize, max: usize },

    #[error("index {index} out of range for bound {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("invalid system dimension {dim}; need at least 2")]
    InvalidDimension { dim: usize },

    #[error("operation defined only for dimension {required}, model has dimension {actual}")]
    UnsupportedDimension { required: usize, actual: usize },

    #[error("conditional evolutions do not commute (defect {defect:.3e} exceeds {tolerance:.0e})")]
    NonCommuting { defect: f64, tolerance: f64 },

    #[error("spectral exponent s = {s} is infrared divergent; need s >= 1")]
    InfraredDivergent { s: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("eigensolver failed to converge after {sweeps} sweeps (residual {residual:.3e})")]
    EigenNoConvergence { sweeps: usize, residual: f64 },

    #[error("result has unexpected imaginary part {imag:.3e} in {context}")]
    NonRealResult { imag: f64, context: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
