use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Probabilities or alphabet size outside the supported domain.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    /// Two inputs disagree on alphabet size, dimension or length.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A coordinate, letter, level or flat index is out of range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// The requested enumeration would exceed a size cap.
    #[error("size cap exceeded: {what} needs {required} entries, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },
    /// Non-finite table values or a degenerate Gram-Schmidt residual.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A table expected to take values in {0, 1} does not.
    #[error("function is not a 0/1 indicator")]
    NotIndicator,
    /// A function expected to have mean zero does not.
    #[error("function is not centered: |E g| = {0:e}")]
    NotCentered(f64),
    /// Input data that does not parse into the expected file schema.
    #[error("malformed input: {0}")]
    Parse(String),
    /// Any other violated precondition (bad parameter combination).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
