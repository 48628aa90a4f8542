use core::fmt;

/// Errors raised by model construction, evaluation and estimation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution or model parameter is outside its admissible range.
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A probability argument lies outside the open interval (0, 1).
    ProbabilityOutOfRange(f64),
    /// The density-crossing equation has no root inside the search interval.
    NoCrossing {
        /// Lower end of the scanned interval.
        lo: f64,
        /// Upper end of the scanned interval.
        hi: f64,
    },
    /// Adjacent blending zones overlap, so the mixing maps are not well defined.
    ZoneOverlap {
        /// Upper edge of the lower zone.
        lower_end: f64,
        /// Lower edge of the upper zone.
        upper_start: f64,
    },
    /// A component carries no probability mass on its band.
    EmptyBand {
        /// Index of the offending component.
        index: usize,
    },
    /// The transition polynomial of a tail warp is not strictly increasing.
    NonMonotoneWarp,
    /// Input data violates a precondition (empty, non-finite, degenerate, ...).
    InvalidData(&'static str),
    /// A configuration value is inconsistent or incomplete.
    InvalidConfig(&'static str),
    /// The optimizer could not produce a usable fit.
    FitFailed(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::ProbabilityOutOfRange(p) => {
                write!(f, "probability {p} is outside the open interval (0, 1)")
            }
            Error::NoCrossing { lo, hi } => {
                write!(f, "no density crossing found in [{lo}, {hi}]")
            }
            Error::ZoneOverlap {
                lower_end,
                upper_start,
            } => write!(
                f,
                "blending zones overlap: lower zone ends at {lower_end}, upper zone starts at {upper_start}"
            ),
            Error::EmptyBand { index } => {
                write!(f, "component {index} has no mass on its band")
            }
            Error::NonMonotoneWarp => {
                write!(f, "tail warp transition is not strictly increasing")
            }
            Error::InvalidData(why) => write!(f, "invalid data: {why}"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            Error::FitFailed(why) => write!(f, "fit failed: {why}"),
        }
    }
}

impl core::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
