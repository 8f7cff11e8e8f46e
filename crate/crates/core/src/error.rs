//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by the exact and interval routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text did not match the rational or b-file grammar.
    #[error("parse error: {0}")]
    Parse(String),

    /// A power-series operation needed more coefficients than supplied.
    #[error("insufficient series order: {0}")]
    SeriesOrder(String),

    /// `exp` of a series whose constant term is nonzero.
    #[error("constant term must vanish")]
    ConstantTerm,

    /// An adaptive summation hit its term cap before converging.
    #[error("series truncation cap exceeded")]
    TruncationCap,
}
