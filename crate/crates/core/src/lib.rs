//! Exact-arithmetic study of the function `(1+x)^(1/x)`.
//!
//! The crate computes the Maclaurin coefficients of `(1+x)^(1/x)` as exact
//! rationals, evaluates provable one- and two-sided enclosures of the
//! function from its alternating partial sums, and generates the
//! generalized Keller-type asymptotic expansions together with certified
//! high-precision evaluations of the underlying limit expressions.
//!
//! Modules:
//! - [`exactnum`]: big rationals, factorials, binomials, Stirling numbers
//!   of the first kind.
//! - [`powerseries`]: truncated formal power series over exact rationals,
//!   including the independent series oracle for the coefficients.
//! - [`coeffs`]: the closed-form coefficients `e_n`, the positive sequence
//!   `f_n`, and their numeric cross-checks.
//! - [`enclosure`]: partial-sum sandwich bounds for `(1+x)^(1/x)`.
//! - [`keller`]: Keller-type asymptotic expansion coefficients and limits.
//! - [`highprec`]: directed-rounded dyadic interval arithmetic.

pub mod coeffs;
pub mod enclosure;
pub mod error;
pub mod exactnum;
pub mod highprec;
pub mod keller;
pub mod powerseries;

pub use error::Error;
pub use exactnum::ExactRational;
