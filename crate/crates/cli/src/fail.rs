//! Process-level error taxonomy: every failure carries the exit code the
//! process should terminate with (2 usage, 3 data, 4 numeric).

use std::fmt;

use tailmix_core::Error;

#[derive(Debug)]
pub enum Failure {
    /// Flags or configuration that never touch the data (exit 2).
    Usage(String),
    /// Unreadable, malformed or unusable input data (exit 3).
    Data(String),
    /// A computation that could not be completed (exit 4).
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numeric(m) => f.write_str(m),
        }
    }
}

/// Attach the failing stage's name to a library error. Data complaints keep
/// the data exit code; everything else counts as a numerical failure.
pub fn stage<T>(name: &str, result: tailmix_core::Result<T>) -> Result<T, Failure> {
    result.map_err(|e| match e {
        Error::InvalidData(_) => Failure::Data(format!("{name}: {e}")),
        other => Failure::Numeric(format!("{name}: {other}")),
    })
}
