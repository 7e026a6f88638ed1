use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs that cannot be combined (mismatched grids, dimensions, ranks).
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition of an operation was violated by its caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The bundle map is numerically singular where the truncation is active.
    #[error("truncation region touches zero set: condition number {condition:.3e} at chart {chart}")]
    TruncationTouchesZeroSet { chart: usize, condition: f64 },

    /// The boundary degree integral did not land near an integer.
    #[error("non-integral degree (sphere too coarse or crosses zero set): value {value}, residual {residual:.3e}")]
    NonIntegralDegree { value: f64, residual: f64 },

    /// The transgression time integral changed between 8 and 16 nodes.
    #[error("transgression t-quadrature did not converge: |I8 - I16| = {0:.3e}")]
    TransgressionNotConverged(f64),

    /// A pointwise classification contradicted the structure of the zero set.
    #[error("zero-set classification violation: {0}")]
    ZeroSetClassificationViolation(String),

    /// Declared zero components disagree with sampled classification.
    #[error("zero-set mismatch: {0}")]
    ZeroSetMismatch(String),

    /// Fiber-integration diagnostic requested for an odd-codimension component.
    #[error("diagnostic undefined: {0}")]
    DiagnosticUndefined(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(format!("json: {e}"))
    }
}
