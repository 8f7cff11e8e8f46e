//! Arbitrary-precision directed-rounded interval arithmetic.
//!
//! Intervals carry dyadic endpoints (denominators are powers of two) and a
//! working precision in bits. Every operation rounds the lower endpoint
//! toward negative infinity and the upper endpoint toward positive
//! infinity, so the exact result is always contained in the output. The
//! module certifies enclosures of the constant `e`, of `(1+x)^(1/x)`, and
//! of the Keller-type difference `(y+1)(1+1/(y+c))^(y+c) -
//! y(1+1/(y+c-1))^(y+c-1)`.
//!
//! `exp` is computed by argument halving plus a Taylor sum with an explicit
//! tail bound; `log` by power-of-two reduction plus the `atanh` series. The
//! constant `e` is never read from a literal: it is always built from the
//! factorial series with its elementary tail bound.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactnum::{rational_to_string, to_decimal, ExactRational, RoundDir};

/// Extra bits kept on the storage grid beyond the requested precision.
const GRID_GUARD: u32 = 16;
/// Extra bits used for internal transcendental evaluations.
const WORK_GUARD: u32 = 48;

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Round a rational onto the dyadic grid `2^-bits` in the given direction.
fn round_dyadic(q: &ExactRational, bits: u32, dir: RoundDir) -> ExactRational {
    let scaled = q.numer().clone() << bits;
    let m = match dir {
        RoundDir::Down => scaled.div_floor(q.denom()),
        RoundDir::Up => scaled.div_ceil(q.denom()),
        RoundDir::Nearest => {
            let (quot, rem) = scaled.div_mod_floor(q.denom());
            if &rem * 2 >= *q.denom() {
                quot + 1
            } else {
                quot
            }
        }
    };
    ExactRational::new(m, pow2(bits))
}

fn round_pair(lo: &ExactRational, hi: &ExactRational, bits: u32) -> (ExactRational, ExactRational) {
    (
        round_dyadic(lo, bits, RoundDir::Down),
        round_dyadic(hi, bits, RoundDir::Up),
    )
}

/// A directed-rounded interval `[lo, hi]` with dyadic endpoints.
///
/// `precision_bits` is the precision the interval was requested at; the
/// endpoints live on a slightly finer grid so that a chain of operations
/// still meets the requested precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloatInterval {
    lo: ExactRational,
    hi: ExactRational,
    precision_bits: u32,
}

impl FloatInterval {
    fn from_dyadic_endpoints(lo: ExactRational, hi: ExactRational, precision_bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        FloatInterval {
            lo,
            hi,
            precision_bits,
        }
    }

    /// Tightest grid interval containing the exact rational `q`.
    pub fn from_rational(q: &ExactRational, precision_bits: u32) -> Self {
        let (lo, hi) = round_pair(q, q, precision_bits + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, precision_bits)
    }

    /// Outward-rounded interval from exact rational bounds.
    pub fn from_rational_bounds(
        lo: &ExactRational,
        hi: &ExactRational,
        precision_bits: u32,
    ) -> Self {
        assert!(lo <= hi);
        let (lo, hi) = round_pair(lo, hi, precision_bits + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, precision_bits)
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    /// Exact midpoint of the stored endpoints.
    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / ExactRational::from(BigInt::from(2))
    }

    pub fn contains(&self, q: &ExactRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &FloatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Entirely below `other` with no overlap.
    pub fn strictly_below(&self, other: &FloatInterval) -> bool {
        self.hi < other.lo
    }

    fn grid(&self, other: &FloatInterval) -> u32 {
        self.precision_bits.min(other.precision_bits)
    }

    pub fn add(&self, other: &FloatInterval) -> FloatInterval {
        let p = self.grid(other);
        let (lo, hi) = round_pair(&(&self.lo + &other.lo), &(&self.hi + &other.hi), p + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, p)
    }

    pub fn sub(&self, other: &FloatInterval) -> FloatInterval {
        let p = self.grid(other);
        let (lo, hi) = round_pair(&(&self.lo - &other.hi), &(&self.hi - &other.lo), p + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, p)
    }

    pub fn neg(&self) -> FloatInterval {
        FloatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &FloatInterval) -> FloatInterval {
        let p = self.grid(other);
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap();
        let hi = candidates.iter().max().unwrap();
        let (lo, hi) = round_pair(lo, hi, p + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, p)
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Result<FloatInterval, Error> {
        if self.lo.is_negative() != self.hi.is_negative() || self.lo.is_zero() || self.hi.is_zero()
        {
            return Err(Error::Domain("reciprocal of an interval containing zero".into()));
        }
        let p = self.precision_bits;
        let (lo, hi) = round_pair(&self.hi.recip(), &self.lo.recip(), p + GRID_GUARD);
        Ok(Self::from_dyadic_endpoints(lo, hi, p))
    }

    pub fn div(&self, other: &FloatInterval) -> Result<FloatInterval, Error> {
        Ok(self.mul(&other.recip()?))
    }

    /// Multiply by an exact rational scalar.
    pub fn scale(&self, q: &ExactRational) -> FloatInterval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        let (lo, hi) = if q.is_negative() { (b, a) } else { (a, b) };
        let (lo, hi) = round_pair(&lo, &hi, self.precision_bits + GRID_GUARD);
        Self::from_dyadic_endpoints(lo, hi, self.precision_bits)
    }

    /// Largest absolute value attained on the interval.
    pub fn abs_upper(&self) -> ExactRational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Decimal rendering that preserves the bound directions:
    /// the lower endpoint rounds down, the upper endpoint rounds up.
    pub fn to_decimal_pair(&self, sig_digits: u32) -> (String, String) {
        (
            to_decimal(&self.lo, sig_digits, RoundDir::Down),
            to_decimal(&self.hi, sig_digits, RoundDir::Up),
        )
    }
}

/// Certified enclosure of `e` from the factorial series, with the
/// elementary tail bound `2/(K+1)!` added to the upper endpoint.
///
/// The returned width is at most `2^(2 - precision_bits)`.
pub fn enclose_constant_e(precision_bits: u32) -> Result<FloatInterval, Error> {
    if precision_bits < 16 {
        return Err(Error::Domain("precision_bits must be at least 16".into()));
    }
    let w = precision_bits + WORK_GUARD;
    let threshold = ExactRational::new(BigInt::one(), pow2(w));
    let mut sum = ExactRational::zero();
    let mut term = ExactRational::one(); // 1/k! starting at k = 0
    let mut k: u64 = 0;
    loop {
        sum += &term;
        k += 1;
        term /= ExactRational::from(BigInt::from(k)); // now 1/k!
        let tail = &term * ExactRational::from(BigInt::from(2)); // 2/(K+1)! with K = k-1
        if tail < threshold {
            let hi = &sum + tail;
            return Ok(FloatInterval::from_rational_bounds(
                &sum,
                &hi,
                precision_bits,
            ));
        }
    }
}

/// Certified enclosure of `1/e`.
pub fn enclose_constant_e_inv(precision_bits: u32) -> Result<FloatInterval, Error> {
    enclose_constant_e(precision_bits)?.recip()
}

// ---------------------------------------------------------------------------
// Transcendental kernels on exact rationals.
// ---------------------------------------------------------------------------

/// `atanh(u)` for `|u| <= 1/3`, as a rational enclosure at `w` bits.
fn atanh_enclosure(u: &ExactRational, w: u32) -> (ExactRational, ExactRational) {
    let one = ExactRational::one();
    let u2 = u * u;
    assert!(u2 < ExactRational::new(BigInt::from(2), BigInt::from(9)), "atanh argument too large");
    let threshold = ExactRational::new(BigInt::one(), pow2(w + 2));
    // 1/(1 - u^2) <= 9/7 for |u| <= sqrt(2)/3; round the factor up to 2.
    let tail_factor = ExactRational::from(BigInt::from(2));
    let mut sum = ExactRational::zero();
    let mut power = u.clone(); // u^(2j+1)
    let mut j: u64 = 0;
    loop {
        sum += &power / ExactRational::from(BigInt::from(2 * j + 1));
        power *= &u2;
        j += 1;
        let tail = power.abs() / ExactRational::from(BigInt::from(2 * j + 1)) * &tail_factor;
        if tail < threshold {
            let lo = &sum - &tail;
            let hi = &sum + &tail;
            debug_assert!(&lo <= &hi && one.is_one());
            return (lo, hi);
        }
    }
}

fn ln2_enclosure(w: u32) -> (ExactRational, ExactRational) {
    static CACHE: RwLock<Option<HashMap<u32, (ExactRational, ExactRational)>>> = RwLock::new(None);
    if let Some(map) = CACHE.read().unwrap().as_ref() {
        if let Some(pair) = map.get(&w) {
            return pair.clone();
        }
    }
    // ln 2 = 2 atanh(1/3)
    let third = ExactRational::new(BigInt::one(), BigInt::from(3));
    let (lo, hi) = atanh_enclosure(&third, w + 2);
    let two = ExactRational::from(BigInt::from(2));
    let pair = round_pair(&(&two * lo), &(two * hi), w);
    let mut guard = CACHE.write().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(w, pair.clone());
    pair
}

/// Rational enclosure of `ln q` for `q > 0`, accurate to about `w` bits.
fn ln_enclosure(q: &ExactRational, w: u32) -> Result<(ExactRational, ExactRational), Error> {
    if !q.is_positive() {
        return Err(Error::Domain("logarithm of a nonpositive value".into()));
    }
    // Reduce q = m * 2^k with m in [2/3, 4/3].
    let mut k: i64 = q.numer().bits() as i64 - q.denom().bits() as i64;
    let lower = ExactRational::new(BigInt::from(2), BigInt::from(3));
    let upper = ExactRational::new(BigInt::from(4), BigInt::from(3));
    let scale_by_pow2 = |q: &ExactRational, k: i64| -> ExactRational {
        if k >= 0 {
            ExactRational::new(q.numer().clone(), q.denom().clone() << (k as u32))
        } else {
            ExactRational::new(q.numer().clone() << ((-k) as u32), q.denom().clone())
        }
    };
    let mut m = scale_by_pow2(q, k);
    while m > upper {
        k += 1;
        m = scale_by_pow2(q, k);
    }
    while m < lower {
        k -= 1;
        m = scale_by_pow2(q, k);
    }

    // u = (m-1)/(m+1) lies in [-1/5, 1/7]; ln m = 2 atanh(u).
    let one = ExactRational::one();
    let u = (&m - &one) / (&m + &one);
    let (alo, ahi) = atanh_enclosure(&u, w + 2);
    let two = ExactRational::from(BigInt::from(2));
    let mut lo = &two * alo;
    let mut hi = two * ahi;

    if k != 0 {
        let (l2lo, l2hi) = ln2_enclosure(w + 2);
        let kq = ExactRational::from(BigInt::from(k));
        if k > 0 {
            lo += &kq * l2lo;
            hi += kq * l2hi;
        } else {
            lo += &kq * l2hi;
            hi += kq * l2lo;
        }
    }
    Ok(round_pair(&lo, &hi, w))
}

/// Rational enclosure of `exp q`, accurate to about `w` bits.
fn exp_enclosure(q: &ExactRational, w: u32) -> (ExactRational, ExactRational) {
    // Halve the argument until |t| <= 1/2, then square the result back.
    let half = ExactRational::new(BigInt::one(), BigInt::from(2));
    let mut t = q.clone();
    let mut halvings: u32 = 0;
    while t.abs() > half {
        t /= ExactRational::from(BigInt::from(2));
        halvings += 1;
    }

    let threshold = ExactRational::new(BigInt::one(), pow2(w + 2 + halvings));
    let mut sum = ExactRational::one();
    let mut term = ExactRational::one();
    let mut j: u64 = 0;
    let tail = loop {
        j += 1;
        term *= &t / ExactRational::from(BigInt::from(j));
        sum += &term;
        // For |t| <= 1/2 the remainder after adding term_j is at most
        // 2|term_{j+1}| <= |term_j|.
        let bound = term.abs();
        if bound < threshold {
            break bound;
        }
    };
    let mut lo = &sum - &tail;
    let mut hi = sum + tail;
    debug_assert!(lo.is_positive());

    for _ in 0..halvings {
        let (a, b) = round_pair(&(&lo * &lo), &(&hi * &hi), w + 2);
        lo = a;
        hi = b;
    }
    round_pair(&lo, &hi, w)
}

/// Enclosure of `exp` over a rational interval (monotone in each endpoint).
fn exp_pair(lo: &ExactRational, hi: &ExactRational, w: u32) -> (ExactRational, ExactRational) {
    let (a, _) = exp_enclosure(lo, w);
    let (_, b) = exp_enclosure(hi, w);
    (a, b)
}

/// Outward-rounded enclosure of `(1+x)^(1/x)` for rational `x > -1`,
/// extended by continuity to `e` at `x = 0`.
pub fn eval_e_of_x(x: &ExactRational, precision_bits: u32) -> Result<FloatInterval, Error> {
    let minus_one = -ExactRational::one();
    if *x <= minus_one {
        return Err(Error::Domain(format!(
            "(1+x)^(1/x) requires x > -1, got {}",
            rational_to_string(x)
        )));
    }
    if x.is_zero() {
        return enclose_constant_e(precision_bits);
    }
    let w = precision_bits + WORK_GUARD;
    let one_plus_x = ExactRational::one() + x;
    let (llo, lhi) = ln_enclosure(&one_plus_x, w)?;
    // Divide by x with direction awareness.
    let (zlo, zhi) = if x.is_positive() {
        (&llo / x, &lhi / x)
    } else {
        (&lhi / x, &llo / x)
    };
    let (zlo, zhi) = round_pair(&zlo, &zhi, w);
    let (rlo, rhi) = exp_pair(&zlo, &zhi, w);
    Ok(FloatInterval::from_rational_bounds(
        &rlo,
        &rhi,
        precision_bits,
    ))
}

/// Enclosure of `(1 + 1/z)^z = exp(z ln((z+1)/z))` for rational `z > 0`.
fn pow_one_plus_recip(z: &ExactRational, w: u32) -> Result<(ExactRational, ExactRational), Error> {
    debug_assert!(z.is_positive());
    let base = (z + ExactRational::one()) / z.clone();
    let (llo, lhi) = ln_enclosure(&base, w)?;
    // z > 0, ln(base) > 0: multiplication keeps orientation.
    let (zlo, zhi) = round_pair(&(z * &llo), &(z * &lhi), w);
    Ok(exp_pair(&zlo, &zhi, w))
}

/// Outward-rounded enclosure of the Keller-type difference
/// `(y+1)(1 + 1/(y+c))^(y+c) - y(1 + 1/(y+c-1))^(y+c-1)`.
///
/// Requires `y + c > 1` so both power bases are positive.
pub fn eval_keller_difference(
    y: &ExactRational,
    c: &ExactRational,
    precision_bits: u32,
) -> Result<FloatInterval, Error> {
    let z = y + c;
    if z <= ExactRational::one() {
        return Err(Error::Domain(
            "keller difference requires y + c > 1".into(),
        ));
    }
    // The two products are each of magnitude ~ e*y and cancel down to ~ e,
    // so widen the working precision by the magnitude of y.
    let y_bits = y.abs().ceil().to_integer().bits() as u32;
    let w = precision_bits + WORK_GUARD + 16 + y_bits;

    let (p1lo, p1hi) = pow_one_plus_recip(&z, w)?;
    let zm1 = &z - ExactRational::one();
    let (p2lo, p2hi) = pow_one_plus_recip(&zm1, w)?;

    let scale = |lo: &ExactRational, hi: &ExactRational, s: &ExactRational| {
        if s.is_negative() {
            (hi * s, lo * s)
        } else {
            (lo * s, hi * s)
        }
    };
    let y1 = y + ExactRational::one();
    let (t1lo, t1hi) = scale(&p1lo, &p1hi, &y1);
    let (t2lo, t2hi) = scale(&p2lo, &p2hi, y);
    let lo = t1lo - t2hi;
    let hi = t1hi - t2lo;
    Ok(FloatInterval::from_rational_bounds(
        &lo,
        &hi,
        precision_bits,
    ))
}

/// One row of a convergence probe: the distance from the Keller difference
/// at `y` to the certified enclosure of `e`, plus the local log-log slope
/// against the previous row.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub y: ExactRational,
    pub abs_error: ExactRational,
    pub slope: Option<f64>,
}

/// Tabulate `|difference - e|` over increasing `y` values and the fitted
/// local decay exponent (which approaches -2).
pub fn convergence_probe(
    c: &ExactRational,
    y_values: &[ExactRational],
    precision_bits: u32,
) -> Result<Vec<ProbeRow>, Error> {
    if y_values.is_empty() {
        return Err(Error::Domain("probe needs at least one y value".into()));
    }
    for pair in y_values.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::Domain("probe y values must be increasing".into()));
        }
    }
    let e = enclose_constant_e(precision_bits)?;
    let e_mid = e.midpoint();
    let mut rows: Vec<ProbeRow> = Vec::with_capacity(y_values.len());
    for y in y_values {
        let diff = eval_keller_difference(y, c, precision_bits)?;
        let abs_error = (diff.midpoint() - &e_mid).abs();
        let slope = rows.last().map(|prev: &ProbeRow| {
            let ratio = rational_to_f64(&abs_error) / rational_to_f64(&prev.abs_error);
            let step = rational_to_f64(y) / rational_to_f64(&prev.y);
            ratio.ln() / step.ln()
        });
        rows.push(ProbeRow {
            y: y.clone(),
            abs_error,
            slope,
        });
    }
    Ok(rows)
}

/// CSV rendering of a probe table: header `y,abs_error,slope`, decimal
/// strings with 20 significant digits; the first row has no slope.
pub fn probe_to_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::from("y,abs_error,slope\n");
    for row in rows {
        out.push_str(&to_decimal(&row.y, 20, RoundDir::Nearest));
        out.push(',');
        out.push_str(&to_decimal(&row.abs_error, 20, RoundDir::Nearest));
        out.push(',');
        if let Some(s) = row.slope {
            let q = ExactRational::from_float(s).expect("finite slope");
            out.push_str(&to_decimal(&q, 20, RoundDir::Nearest));
        }
        out.push('\n');
    }
    out
}

/// Convert via a 17-significant-digit decimal detour, which stays finite
/// for the huge-numerator rationals produced by interval midpoints.
pub fn rational_to_f64(q: &ExactRational) -> f64 {
    to_decimal(q, 17, RoundDir::Nearest)
        .parse()
        .expect("decimal string parses as f64")
}
