use std::fmt;
use std::path::Path;

use talabounds_core::Error;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter combinations (exit 1).
    Usage(String),
    /// Unreadable or malformed input data, or an unwritable output (exit 2).
    Data(String),
    /// A size cap would be exceeded (exit 3).
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Cap(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::CapExceeded { .. } => CliError::Cap(msg),
            Error::InvalidArgument(_) | Error::OutOfRange(_) => CliError::Usage(msg),
            Error::InvalidMeasure(_)
            | Error::DimensionMismatch(_)
            | Error::Numerical(_)
            | Error::NotIndicator
            | Error::NotCentered(_)
            | Error::Parse(_) => CliError::Data(msg),
        }
    }
}
