//! Partial-sum enclosures of `(1+x)^(1/x)` on `(-1, 1)`.
//!
//! The partial sums `e_n(x) = e * (1 + sum_{k=1..n} (-1)^k f_k x^k)` form
//! alternating over/under-approximations of the function on `(0, 1)` and an
//! increasing sequence of under-approximations on `(-1, 0)`. Bounds are
//! carried as exact rational multiples of `e` so the orderings stay exact;
//! numeric renderings multiply by a certified enclosure of `e`, rounding
//! lower bounds down and upper bounds up.

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coeffs::f_coeff;
use crate::error::Error;
use crate::exactnum::{rational_to_string, to_decimal, ExactRational, RoundDir};
use crate::highprec::{enclose_constant_e, eval_e_of_x, FloatInterval};

/// A value of the form `multiplier * e`. Because `e > 0`, comparing
/// multiples of `e` is the same as comparing their multipliers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EMultiple {
    multiplier: ExactRational,
}

impl EMultiple {
    pub fn new(multiplier: ExactRational) -> Self {
        EMultiple { multiplier }
    }

    pub fn multiplier(&self) -> &ExactRational {
        &self.multiplier
    }

    /// Numeric rendering against a given enclosure of `e`.
    pub fn to_interval(&self, e: &FloatInterval) -> FloatInterval {
        e.scale(&self.multiplier)
    }
}

/// Which sides of the sandwich are certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sided {
    Two,
    LowerOnly,
}

/// Certified bounds on `(1+x)^(1/x)` from the order-`n` partial sums.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub x: ExactRational,
    pub order: u32,
    pub lower: EMultiple,
    pub upper: Option<EMultiple>,
    pub sided: Sided,
    /// Dyadic lower rendering of `lower * e`, rounded down.
    pub numeric_lo: ExactRational,
    /// Dyadic upper rendering of `upper * e`, rounded up; two-sided only.
    pub numeric_hi: Option<ExactRational>,
    /// Non-certified high-precision estimate of the function value,
    /// attached for display when only a lower bound is available.
    pub estimate: Option<ExactRational>,
    pub precision_bits: u32,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let digits = decimal_digits(self.precision_bits);
        let mut s = serializer.serialize_struct("BoundReport", 9)?;
        s.serialize_field("x", &rational_to_string(&self.x))?;
        s.serialize_field("n", &self.order)?;
        s.serialize_field("lower_mul", &rational_to_string(self.lower.multiplier()))?;
        s.serialize_field(
            "upper_mul",
            &self
                .upper
                .as_ref()
                .map(|u| rational_to_string(u.multiplier())),
        )?;
        s.serialize_field(
            "sided",
            match self.sided {
                Sided::Two => "two",
                Sided::LowerOnly => "lower",
            },
        )?;
        s.serialize_field(
            "numeric_lo",
            &to_decimal(&self.numeric_lo, digits, RoundDir::Down),
        )?;
        s.serialize_field(
            "numeric_hi",
            &self
                .numeric_hi
                .as_ref()
                .map(|h| to_decimal(h, digits, RoundDir::Up)),
        )?;
        s.serialize_field(
            "estimate",
            &self
                .estimate
                .as_ref()
                .map(|e| to_decimal(e, digits, RoundDir::Nearest)),
        )?;
        s.serialize_field("precision_bits", &self.precision_bits)?;
        s.end()
    }
}

fn decimal_digits(precision_bits: u32) -> u32 {
    // ~0.301 decimal digits per bit, capped for readability.
    ((precision_bits * 3) / 10).clamp(20, 60)
}

fn check_open_unit(x: &ExactRational) -> Result<(), Error> {
    if x.abs() >= ExactRational::one() {
        return Err(Error::Domain(format!(
            "partial sums require -1 < x < 1, got {}",
            rational_to_string(x)
        )));
    }
    Ok(())
}

/// The multiplier `e_n(x)/e = 1 + sum_{k=1..n} (-1)^k f_k x^k`, exactly.
pub fn partial_sum_multiplier(x: &ExactRational, n: u32) -> Result<ExactRational, Error> {
    check_open_unit(x)?;
    let mut acc = ExactRational::one();
    let mut x_pow = ExactRational::one();
    for k in 1..=n {
        x_pow *= x;
        let term = f_coeff(k) * &x_pow;
        if k % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// Sandwich (or one-sided) bounds of order `n` at the point `x`.
///
/// For `x` in `(0, 1)` the lower bound is the largest odd-order partial sum
/// of order at most `n` and the upper bound the largest even-order one; for
/// `x` in `(-1, 0)` only the increasing lower bounds exist and a
/// non-certified estimate of the function value is attached for display;
/// `x = 0` degenerates to the exact bound `e`.
pub fn enclose(x: &ExactRational, n: u32, precision_bits: u32) -> Result<BoundReport, Error> {
    check_open_unit(x)?;
    if n < 1 {
        return Err(Error::Domain("enclosure order must be at least 1".into()));
    }
    let e = enclose_constant_e(precision_bits)?;

    if x.is_zero() {
        let one = EMultiple::new(ExactRational::one());
        return Ok(BoundReport {
            x: x.clone(),
            order: n,
            lower: one.clone(),
            upper: Some(one),
            sided: Sided::Two,
            numeric_lo: e.lo().clone(),
            numeric_hi: Some(e.hi().clone()),
            estimate: None,
            precision_bits,
        });
    }

    if x.is_positive() {
        let odd = if n % 2 == 1 { n } else { n - 1 };
        let even = if n % 2 == 0 { n } else { n - 1 };
        let lower = EMultiple::new(partial_sum_multiplier(x, odd)?);
        let upper = EMultiple::new(partial_sum_multiplier(x, even)?);
        debug_assert!(lower < upper);
        let lo_interval = lower.to_interval(&e);
        let hi_interval = upper.to_interval(&e);
        Ok(BoundReport {
            x: x.clone(),
            order: n,
            numeric_lo: lo_interval.lo().clone(),
            numeric_hi: Some(hi_interval.hi().clone()),
            lower,
            upper: Some(upper),
            sided: Sided::Two,
            estimate: None,
            precision_bits,
        })
    } else {
        let lower = EMultiple::new(partial_sum_multiplier(x, n)?);
        let lo_interval = lower.to_interval(&e);
        let estimate = eval_e_of_x(x, precision_bits)?.midpoint();
        Ok(BoundReport {
            x: x.clone(),
            order: n,
            numeric_lo: lo_interval.lo().clone(),
            numeric_hi: None,
            lower,
            upper: None,
            sided: Sided::LowerOnly,
            estimate: Some(estimate),
            precision_bits,
        })
    }
}

/// Width of the two-sided sandwich at multiplier level:
/// `upper.multiplier - lower.multiplier`. Strictly positive and strictly
/// decreasing in `n`; defined for `x` in `(0, 1)` only.
pub fn enclosure_defect(x: &ExactRational, n: u32) -> Result<ExactRational, Error> {
    if !x.is_positive() || x >= &ExactRational::one() {
        return Err(Error::Domain(
            "enclosure defect is defined for 0 < x < 1".into(),
        ));
    }
    let report = enclose(x, n, 64)?;
    let upper = report.upper.expect("two-sided for x in (0,1)");
    let defect = upper.multiplier() - report.lower.multiplier();
    debug_assert!(defect.is_positive());
    Ok(defect)
}
