use crate::rational::{ExtendedSlope, Fraction};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// 0/0 has no normal form as a fraction or a slope.
    #[error("0/0 does not determine a slope")]
    ZeroOverZero,

    /// A fraction proper was requested but the denominator is zero;
    /// 1/0 is only meaningful as the slope `inf`.
    #[error("denominator is zero (1/0 is a slope, not a fraction)")]
    ZeroDenominator,

    /// A fractional-linear map was evaluated at the one point where both
    /// its rows vanish.
    #[error("map evaluates to 0/0 at {at}")]
    UndefinedValue { at: ExtendedSlope },

    /// Simple continued fraction expansions exist for positive values only.
    #[error("expected a positive fraction, got {0}")]
    NonPositiveInput(Fraction),

    /// The fraction normalizes to p <= 1 and presents an unknot or unlink,
    /// not a 2-bridge link.
    #[error("fraction {0} does not present a 2-bridge link (p <= 1)")]
    DegenerateLink(Fraction),

    #[error("{0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input is well formed but belongs to a family the construction
    /// deliberately does not cover.
    #[error("excluded case: {0}")]
    ExcludedCase(String),

    #[error("parse error at byte {pos} of {input:?}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
