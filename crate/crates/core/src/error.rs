use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shifted solve with shift {shift} is singular or nearly singular (pivot {pivot:e})")]
    SingularShift { shift: String, pivot: f64 },

    #[error("Gershgorin lower bound {lower} is not positive; supply an explicit lower spectral bound")]
    NonPositiveLowerBound { lower: f64 },

    #[error("operator of order {n} exceeds the dense limit {limit}")]
    DenseLimit { n: usize, limit: usize },

    #[error("symmetric eigensolver did not converge")]
    EigenNoConvergence,

    #[error("function {label} is undefined at {at}")]
    FunctionUndefined { label: String, at: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid spectral interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("pole {pole} lies inside the evaluation set [{lo}, {hi}]")]
    PoleInDomain { pole: f64, lo: f64, hi: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("decomposition is flagged after total deflation at step {step}; it cannot be extended")]
    Deflated { step: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("f(0+) is infinite for {label}; apply a positive shift eta < a to obtain a finite bound")]
    InfiniteAnchor { label: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
