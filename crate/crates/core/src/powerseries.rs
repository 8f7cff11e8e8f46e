//! Truncated formal power series over exact rationals.
//!
//! Every series carries its truncation order explicitly; binary operations
//! truncate to the smaller order of their inputs, so a coefficient is never
//! reported beyond the range on which it is valid. The module also houses
//! the series oracle for the Maclaurin coefficients of `(1+x)^(1/x)`:
//! `exp(ln(1+x)/x - 1)`, computed coefficient-exactly.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactnum::{rational_to_string, ExactRational};

/// A formal power series truncated at an explicit order (inclusive), with
/// exact rational coefficients and an optional convergence-radius hint.
///
/// The radius hint is metadata only; no series operation enforces it. It
/// feeds the validity threshold of the asymptotic expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<ExactRational>,
    radius_hint: Option<ExactRational>,
}

impl SeriesPoly {
    /// Build a series from coefficients `c_0..c_N`; the truncation order is
    /// `N = coeffs.len() - 1`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        SeriesPoly {
            coeffs,
            radius_hint: None,
        }
    }

    /// Constant series `c` at the given truncation order.
    pub fn constant(c: ExactRational, order: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); order + 1];
        coeffs[0] = c;
        SeriesPoly::new(coeffs)
    }

    pub fn with_radius_hint(mut self, rho: ExactRational) -> Self {
        assert!(rho.is_positive(), "radius hint must be positive");
        self.radius_hint = Some(rho);
        self
    }

    /// Truncation order `N` (inclusive).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`. Panics beyond the truncation order: a
    /// coefficient we did not compute is not silently zero.
    pub fn coeff(&self, k: usize) -> &ExactRational {
        assert!(k <= self.order(), "coefficient {k} beyond truncation order");
        &self.coeffs[k]
    }

    pub fn radius_hint(&self) -> Option<&ExactRational> {
        self.radius_hint.as_ref()
    }

    /// Cauchy product truncated at `min(self.order(), other.order())`.
    pub fn mul(&self, other: &SeriesPoly) -> SeriesPoly {
        let order = self.order().min(other.order());
        let mut coeffs = vec![ExactRational::zero(); order + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            for i in 0..=k {
                *c += &self.coeffs[i] * &other.coeffs[k - i];
            }
        }
        let radius_hint = match (&self.radius_hint, &other.radius_hint) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            _ => None,
        };
        SeriesPoly {
            coeffs,
            radius_hint,
        }
    }

    /// `exp` of a series with vanishing constant term, truncated at
    /// `self.order()`, by the derivative-convolution recurrence
    /// `k b_k = sum_{j=1..k} j a_j b_{k-j}` with `b_0 = 1`.
    pub fn exp(&self) -> Result<SeriesPoly, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm);
        }
        let order = self.order();
        let mut out = vec![ExactRational::zero(); order + 1];
        out[0] = ExactRational::one();
        for k in 1..=order {
            let mut acc = ExactRational::zero();
            for j in 1..=k {
                acc += ExactRational::from(num_bigint::BigInt::from(j as u64))
                    * &self.coeffs[j]
                    * &out[k - j];
            }
            out[k] = acc / ExactRational::from(num_bigint::BigInt::from(k as u64));
        }
        Ok(SeriesPoly {
            coeffs: out,
            radius_hint: self.radius_hint.clone(),
        })
    }

    /// JSON array of rational strings, lowest order first.
    pub fn to_json(&self) -> String {
        let strings: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        serde_json::to_string(&strings).expect("string array serializes")
    }
}

/// The series of `ln(1+x)` truncated at `order`: coefficients
/// `0, 1, -1/2, 1/3, -1/4, ...`.
pub fn ps_log1p(order: usize) -> SeriesPoly {
    let coeffs = (0..=order)
        .map(|k| {
            if k == 0 {
                ExactRational::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                ExactRational::new(sign.into(), (k as u64).into())
            }
        })
        .collect();
    SeriesPoly::new(coeffs)
}

/// Independent oracle for the Maclaurin coefficients of `(1+x)^(1/x) / e`:
/// returns `1 + sum_{k=1..order} e_k x^k` computed as
/// `exp(ln(1+x)/x - 1)`.
///
/// The division by `x` is an index shift (drop the vanishing constant term
/// of `ln(1+x)` and relabel), which is exact and total.
pub fn oracle_e_coeffs(order: usize) -> SeriesPoly {
    let log = ps_log1p(order + 1);
    // ln(1+x)/x: coefficient k becomes coefficient k+1 of ln(1+x).
    let mut shifted: Vec<ExactRational> = log.coeffs()[1..].to_vec();
    // Subtract 1: the shifted series starts with constant term exactly 1.
    debug_assert!(shifted[0].is_one());
    shifted[0] = ExactRational::zero();
    SeriesPoly::new(shifted)
        .exp()
        .expect("constant term vanishes by construction")
}
