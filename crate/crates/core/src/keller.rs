//! Keller-type asymptotic expansions.
//!
//! For a Maclaurin series `g(x) = sum a_k x^k` with `G(y) = g(1/y)`, the
//! difference `(y+1)G(y+c) - yG(y+c-1)` admits a convergent asymptotic
//! expansion `a_0 + sum_{k>=2} b_k/(y+c)^k` valid for
//! `y > 1 + max(1, 1/rho)`; in particular the limit as `y -> infinity` is
//! `a_0` for every shift `c`. This module generates the integer coefficient
//! rows (OEIS A193815), the plain and shifted expansions, and evaluates
//! truncations with directed rounding.
//!
//! Coefficients are stored signed so that the expansion value is always
//! `a_0 + sum b_k/(y+c)^k`, which normalizes the plain and shifted
//! presentations into one evaluation path. A series is either purely
//! rational or uniformly scaled by `e`; the two kinds never mix.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coeffs::e_closed_form;
use crate::error::Error;
use crate::exactnum::{binomial, rational_to_string, ExactRational};
use crate::highprec::{enclose_constant_e, FloatInterval};
use crate::powerseries::SeriesPoly;

/// A Maclaurin series together with its scalar kind: the coefficients are
/// either the stored rationals themselves or those rationals times `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSeries {
    poly: SeriesPoly,
    scaled_by_e: bool,
}

impl ScaledSeries {
    /// Series with purely rational coefficients.
    pub fn rational(poly: SeriesPoly) -> Self {
        ScaledSeries {
            poly,
            scaled_by_e: false,
        }
    }

    /// Series whose true coefficients are `e` times the stored rationals.
    pub fn e_scaled(poly: SeriesPoly) -> Self {
        ScaledSeries {
            poly,
            scaled_by_e: true,
        }
    }

    pub fn poly(&self) -> &SeriesPoly {
        &self.poly
    }

    pub fn scaled_by_e(&self) -> bool {
        self.scaled_by_e
    }
}

/// The flagship series: `(1+x)^(1/x) = e * (1 + sum e_k x^k)`, truncated at
/// `order`, with convergence radius 1.
pub fn e_series(order: usize) -> ScaledSeries {
    let coeffs = (0..=order as u32).map(e_closed_form).collect();
    ScaledSeries::e_scaled(SeriesPoly::new(coeffs).with_radius_hint(ExactRational::one()))
}

/// Integer coefficient row multiplying `a_1..a_k` in the `1/y^k` term:
/// `C(k,0), C(k,1), ..., C(k,k-2), C(k,k-1) - 1` (OEIS A193815).
pub fn keller_row(k: u32) -> Result<Vec<BigInt>, Error> {
    if k < 2 {
        return Err(Error::Domain("keller rows start at k = 2".into()));
    }
    let mut row: Vec<BigInt> = (0..k - 1).map(|i| binomial(k, i64::from(i))).collect();
    row.push(binomial(k, i64::from(k) - 1) - BigInt::one());
    Ok(row)
}

/// A truncated Keller-type expansion `a_0 + sum_{k=2..K} b_k/(y+c)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KellerExpansion {
    a0: ExactRational,
    /// `b[k - 2]` is the signed coefficient of `1/(y+c)^k`.
    b: Vec<ExactRational>,
    shift: ExactRational,
    k_max: usize,
    scaled_by_e: bool,
    validity_lower_y: ExactRational,
}

impl KellerExpansion {
    pub fn a0(&self) -> &ExactRational {
        &self.a0
    }

    /// Signed coefficient of `1/(y+c)^k`, for `2 <= k <= k_max`.
    pub fn b_coeff(&self, k: usize) -> &ExactRational {
        assert!((2..=self.k_max).contains(&k), "k out of range");
        &self.b[k - 2]
    }

    pub fn b_coeffs(&self) -> &[ExactRational] {
        &self.b
    }

    pub fn shift(&self) -> &ExactRational {
        &self.shift
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn scaled_by_e(&self) -> bool {
        self.scaled_by_e
    }

    pub fn validity_lower_y(&self) -> &ExactRational {
        &self.validity_lower_y
    }

    /// Exact rational value of the truncation at `y` (before any `e`
    /// scaling). Enforces the validity threshold.
    pub fn eval_exact(&self, y: &ExactRational) -> Result<ExactRational, Error> {
        if y <= &self.validity_lower_y {
            return Err(Error::Domain(format!(
                "y = {} outside stated validity region y > {}",
                rational_to_string(y),
                rational_to_string(&self.validity_lower_y)
            )));
        }
        let base = y + &self.shift;
        if !base.is_positive() {
            return Err(Error::Domain("y + c must be positive".into()));
        }
        let inv = base.recip();
        let mut power = &inv * &inv;
        let mut acc = self.a0.clone();
        for b in &self.b {
            acc += b * &power;
            power *= &inv;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expansion serializes")
    }
}

impl Serialize for KellerExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KellerExpansion", 6)?;
        s.serialize_field("a0", &rational_to_string(&self.a0))?;
        s.serialize_field("shift", &rational_to_string(&self.shift))?;
        s.serialize_field("K", &self.k_max)?;
        let b: Vec<String> = self.b.iter().map(rational_to_string).collect();
        s.serialize_field("b", &b)?;
        s.serialize_field("scaled_by_e", &self.scaled_by_e)?;
        s.serialize_field(
            "validity_lower_y",
            &rational_to_string(&self.validity_lower_y),
        )?;
        s.end()
    }
}

/// `1 + max(1, 1/rho)` when the radius is known, else 2 (the `rho >= 1`
/// case).
fn validity_threshold(series: &ScaledSeries) -> ExactRational {
    let one = ExactRational::one();
    match series.poly().radius_hint() {
        Some(rho) => {
            let inv = rho.recip();
            &one + inv.max(one.clone())
        }
        None => &one + &one,
    }
}

fn expand_impl(
    series: &ScaledSeries,
    shift: &ExactRational,
    k_max: usize,
) -> Result<KellerExpansion, Error> {
    if k_max < 2 {
        return Err(Error::Domain("expansion order K must be at least 2".into()));
    }
    if series.poly().order() < k_max {
        return Err(Error::SeriesOrder(format!(
            "expansion to K = {k_max} needs series order >= {k_max}, got {}",
            series.poly().order()
        )));
    }
    let a = series.poly().coeffs();
    let mut b = Vec::with_capacity(k_max - 1);
    for k in 2..=k_max {
        // -( sum_{i=1..k-1} C(k, i-1) a_i + (C(k, k-1) - 1) a_k )
        let row = keller_row(k as u32).expect("k >= 2");
        let mut plain = ExactRational::zero();
        for (i, coeff) in row.iter().enumerate() {
            plain += ExactRational::from(coeff.clone()) * &a[i + 1];
        }
        let mut bk = -plain;
        if !shift.is_zero() {
            // + c * sum_{i=1..k-1} C(k-1, i-1) a_i
            let mut shifted = ExactRational::zero();
            for i in 1..k {
                let binom = binomial(k as u32 - 1, i as i64 - 1);
                shifted += ExactRational::from(binom) * &a[i];
            }
            bk += shift * shifted;
        }
        b.push(bk);
    }
    Ok(KellerExpansion {
        a0: a[0].clone(),
        b,
        shift: shift.clone(),
        k_max,
        scaled_by_e: series.scaled_by_e(),
        validity_lower_y: validity_threshold(series),
    })
}

/// Expansion of `(y+1)G(y) - yG(y-1)` truncated at `K`.
pub fn expand_plain(series: &ScaledSeries, k_max: usize) -> Result<KellerExpansion, Error> {
    expand_impl(series, &ExactRational::zero(), k_max)
}

/// Expansion of `(y+1)G(y+c) - yG(y+c-1)` truncated at `K`; at `c = 0` it
/// coincides with [`expand_plain`] coefficient by coefficient.
pub fn expand_shifted(
    series: &ScaledSeries,
    c: &ExactRational,
    k_max: usize,
) -> Result<KellerExpansion, Error> {
    expand_impl(series, c, k_max)
}

/// Directed-rounded value of the truncated expansion at `y`.
pub fn expansion_eval(
    expansion: &KellerExpansion,
    y: &ExactRational,
    precision_bits: u32,
) -> Result<FloatInterval, Error> {
    let exact = expansion.eval_exact(y)?;
    if expansion.scaled_by_e {
        let e = enclose_constant_e(precision_bits)?;
        Ok(e.scale(&exact))
    } else {
        Ok(FloatInterval::from_rational(&exact, precision_bits))
    }
}

/// The Keller-type limit of a series: `a_0`, independent of the shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitValue {
    Rational(ExactRational),
    /// The value is the stored rational times `e`.
    EMultiple(ExactRational),
}

impl std::fmt::Display for LimitValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitValue::Rational(q) => write!(f, "{}", rational_to_string(q)),
            LimitValue::EMultiple(q) if q.is_one() => write!(f, "e"),
            LimitValue::EMultiple(q) => write!(f, "({})*e", rational_to_string(q)),
        }
    }
}

/// Limit of `(y+1)G(y+c) - yG(y+c-1)` as `y -> infinity`: the constant
/// term `a_0`, for every `c`.
pub fn keller_limit(series: &ScaledSeries) -> LimitValue {
    let a0 = series.poly().coeff(0).clone();
    if series.scaled_by_e() {
        LimitValue::EMultiple(a0)
    } else {
        LimitValue::Rational(a0)
    }
}
