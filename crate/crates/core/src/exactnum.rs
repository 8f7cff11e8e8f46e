//! Exact integer and rational arithmetic: the rational text format, decimal
//! rendering with directed rounding, factorials, binomials, and the signed
//! Stirling-number-of-the-first-kind triangle.

use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision signed rational, always in lowest terms with a
/// positive denominator. `num_rational` restores both invariants after
/// every operation, which is exactly the contract the rest of the crate
/// relies on.
pub type ExactRational = num_rational::BigRational;

/// Rounding direction for conversions that cannot be exact.
///
/// `Down` rounds toward negative infinity and `Up` toward positive
/// infinity, so a `Down`-rounded lower bound stays a lower bound and an
/// `Up`-rounded upper bound stays an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Nearest,
    Up,
}

/// Parse the rational text format: an optional leading minus, a decimal
/// integer, and optionally `/` followed by a positive decimal integer.
///
/// `"1"`, `"-7/16"` and `"238043/580608"` are all valid. Anything else
/// (floats, exponents, signs on the denominator, zero denominators) is
/// rejected so that a malformed argument can never silently change the
/// mathematical claim being made.
pub fn parse_rational(input: &str) -> Result<ExactRational, Error> {
    let trimmed = input.trim();
    // Tolerate U+2212 on input; canonical output always uses ASCII '-'.
    let normalized = trimmed.replace('\u{2212}', "-");
    let (num_str, den_str) = match normalized.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (normalized.as_str(), None),
    };

    let digits = num_str.strip_prefix('-').unwrap_or(num_str);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid rational {input:?}")));
    }
    let numer = BigInt::from_str(num_str).expect("validated integer");

    let denom = match den_str {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!(
                    "denominator must be a positive integer in {input:?}"
                )));
            }
            let d = BigInt::from_str(d).expect("validated integer");
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {input:?}")));
            }
            d
        }
    };

    Ok(ExactRational::new(numer, denom))
}

/// Canonical text form: `numerator` or `numerator/denominator`, ASCII minus.
/// Round-trips exactly through [`parse_rational`].
pub fn rational_to_string(q: &ExactRational) -> String {
    q.to_string()
}

/// Render `q` as a positional decimal string with `sig_digits` significant
/// digits, rounded in the requested direction.
pub fn to_decimal(q: &ExactRational, sig_digits: u32, dir: RoundDir) -> String {
    assert!(sig_digits >= 1);
    if q.is_zero() {
        return "0".to_string();
    }
    let ten = BigInt::from(10u32);
    let abs = q.abs();

    // Decimal exponent e with 10^e <= |q| < 10^(e+1).
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    while pow10_cmp_le(&ten, e + 1, &abs) {
        e += 1;
    }
    while !pow10_cmp_le(&ten, e, &abs) {
        e -= 1;
    }

    // Scale so that the significand is an integer with sig_digits digits,
    // then round the signed value in the requested direction.
    let shift = sig_digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        ExactRational::new(q.numer() * ten.pow(shift as u32), q.denom().clone())
    } else {
        ExactRational::new(q.numer().clone(), q.denom() * ten.pow((-shift) as u32))
    };
    let mut mantissa = round_to_integer(&scaled, dir);
    let mut exp10 = e;
    // Rounding may carry into one extra digit (e.g. 999... -> 1000...).
    if mantissa.abs().to_string().len() as u32 > sig_digits {
        debug_assert!(mantissa.clone().abs() == ten.pow(sig_digits));
        mantissa = &mantissa / &ten;
        exp10 += 1;
    }

    let neg = mantissa.is_negative();
    let digits = mantissa.abs().to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let point = exp10 + 1; // digits before the decimal point
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

// 10^e <= value, with e possibly negative.
fn pow10_cmp_le(ten: &BigInt, e: i64, value: &ExactRational) -> bool {
    if e >= 0 {
        ten.pow(e as u32) * value.denom() <= value.numer().clone()
    } else {
        value.denom().clone() <= value.numer() * ten.pow((-e) as u32)
    }
}

/// Round a rational to an integer in the given direction; `Nearest` breaks
/// ties away from zero.
pub fn round_to_integer(q: &ExactRational, dir: RoundDir) -> BigInt {
    match dir {
        RoundDir::Down => q.floor().to_integer(),
        RoundDir::Up => q.ceil().to_integer(),
        RoundDir::Nearest => {
            let two = BigInt::from(2u32);
            if q.is_negative() {
                -round_to_integer(&(-q), RoundDir::Nearest)
            } else {
                // floor((2n + d) / 2d)
                (q.numer() * &two + q.denom()).div_floor(&(q.denom() * &two))
            }
        }
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=u64::from(n)).map(BigInt::from).product()
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k > i64::from(n) {
        return BigInt::zero();
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc = BigInt::one();
    for i in 0..k {
        // Each partial product is the integer C(n, i+1), so the division
        // is exact at every step.
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Memoized triangular table of signed Stirling numbers of the first kind,
/// built from the recurrence `S1(p+1, q) = -p*S1(p, q) + S1(p, q-1)` with
/// `S1(p, p) = 1`, `S1(p, q) = 0` for `q > p` or `q < 1`, and `S1(0, 0) = 1`.
///
/// Rows grow on demand. Readers share the table through an internal
/// `RwLock`, so concurrent queries are safe; growth takes the write lock.
pub struct StirlingTable {
    // rows[p - 1] holds S1(p, q) for q = 1..=p
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl StirlingTable {
    pub fn new() -> Self {
        StirlingTable {
            rows: RwLock::new(vec![vec![BigInt::one()]]),
        }
    }

    /// Signed `S1(p, q)`. Out-of-range indices return zero; `S1(0, 0) = 1`.
    pub fn stirling1(&self, p: u32, q: i64) -> BigInt {
        if p == 0 {
            return if q == 0 { BigInt::one() } else { BigInt::zero() };
        }
        if q < 1 || q > i64::from(p) {
            return BigInt::zero();
        }
        self.ensure_rows(p as usize);
        self.rows.read().unwrap()[p as usize - 1][q as usize - 1].clone()
    }

    /// Number of rows currently materialized.
    pub fn rows_built(&self) -> usize {
        self.rows.read().unwrap().len()
    }

    fn ensure_rows(&self, p: usize) {
        if self.rows.read().unwrap().len() >= p {
            return;
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() < p {
            let prev_p = rows.len();
            let next = {
                let prev = rows.last().unwrap();
                let factor = BigInt::from(prev_p as u64);
                (1..=prev_p + 1)
                    .map(|q| {
                        let mut v = BigInt::zero();
                        if q <= prev_p {
                            v -= &factor * &prev[q - 1];
                        }
                        if q >= 2 {
                            v += &prev[q - 2];
                        }
                        v
                    })
                    .collect()
            };
            rows.push(next);
        }
    }
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Process-wide shared table used by the coefficient routines.
pub fn shared_stirling() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(StirlingTable::new)
}

/// Signed Stirling number of the first kind from the shared table.
pub fn stirling1(p: u32, q: i64) -> BigInt {
    shared_stirling().stirling1(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: the recurrence applied top-down with no table.
    fn stirling1_recursive(p: u32, q: i64) -> BigInt {
        if p == 0 {
            return if q == 0 { BigInt::one() } else { BigInt::zero() };
        }
        if q < 1 || q > i64::from(p) {
            return BigInt::zero();
        }
        if q == i64::from(p) {
            return BigInt::one();
        }
        -BigInt::from(p - 1) * stirling1_recursive(p - 1, q) + stirling1_recursive(p - 1, q - 1)
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling1(1, 1), BigInt::one());
        assert_eq!(stirling1(2, 1), BigInt::from(-1));
        // Derived by the independent recursive oracle.
        assert_eq!(stirling1(4, 2), stirling1_recursive(4, 2));
        assert_eq!(stirling1(4, 2), BigInt::from(11));
        assert_eq!(stirling1(3, 5), BigInt::zero());
        assert_eq!(stirling1(5, 0), BigInt::zero());
        assert_eq!(stirling1(0, 0), BigInt::one());
    }

    #[test]
    fn stirling_matches_recursive_oracle() {
        for p in 1..=10u32 {
            for q in 0..=i64::from(p) + 1 {
                assert_eq!(stirling1(p, q), stirling1_recursive(p, q), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn stirling_row_sum_and_column_laws() {
        for p in 1..=12u32 {
            let row_sum: BigInt = (1..=i64::from(p)).map(|q| stirling1(p, q).abs()).sum();
            assert_eq!(row_sum, factorial(p), "row-sum law at p={p}");
            assert_eq!(stirling1(p, 1).abs(), factorial(p - 1), "column law at p={p}");
        }
    }

    #[test]
    fn stirling_sign_law() {
        for p in 1..=12u32 {
            for q in 1..=i64::from(p) {
                let s = stirling1(p, q);
                let expected_positive = (i64::from(p) - q) % 2 == 0;
                assert_eq!(s.is_positive(), expected_positive, "sign law at p={p} q={q}");
                assert!(!s.is_zero());
            }
        }
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        // Iterated-product oracle.
        let mut acc = BigInt::one();
        for i in 1..=20u64 {
            acc *= BigInt::from(i);
        }
        assert_eq!(factorial(20), acc);
        assert_eq!(factorial(20), BigInt::from(2432902008176640000u64));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(6, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn parse_and_print_round_trip() {
        for text in ["1", "-7/16", "238043/580608", "0", "-3"] {
            let q = parse_rational(text).unwrap();
            assert_eq!(rational_to_string(&q), *text);
        }
        // Unicode minus tolerated on input, normalized on output.
        let q = parse_rational("\u{2212}7/16").unwrap();
        assert_eq!(rational_to_string(&q), "-7/16");
        // Non-canonical input parses, prints reduced.
        let q = parse_rational("4/8").unwrap();
        assert_eq!(rational_to_string(&q), "1/2");
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for text in ["", "1.5", "1/0", "1/-2", "--3", "a/b", "1e3", "+2", "3/"] {
            assert!(parse_rational(text).is_err(), "should reject {text:?}");
        }
    }

    #[test]
    fn decimal_rendering() {
        let half = parse_rational("1/2").unwrap();
        assert_eq!(to_decimal(&half, 15, RoundDir::Nearest), "0.500000000000000");
        let f2 = parse_rational("11/24").unwrap();
        assert_eq!(
            to_decimal(&f2, 15, RoundDir::Nearest),
            "0.458333333333333"
        );
        let third = parse_rational("-1/3").unwrap();
        assert_eq!(to_decimal(&third, 4, RoundDir::Down), "-0.3334");
        assert_eq!(to_decimal(&third, 4, RoundDir::Up), "-0.3333");
        let big = parse_rational("123456").unwrap();
        assert_eq!(to_decimal(&big, 3, RoundDir::Nearest), "123000");
        assert_eq!(to_decimal(&big, 3, RoundDir::Up), "124000");
        let two_thirds = parse_rational("2/3").unwrap();
        assert_eq!(to_decimal(&two_thirds, 3, RoundDir::Nearest), "0.667");
        let carry = parse_rational("999/1000").unwrap();
        assert_eq!(to_decimal(&carry, 2, RoundDir::Up), "1.0");
        assert_eq!(to_decimal(&ExactRational::zero(), 5, RoundDir::Down), "0");
    }

    fn small_rational() -> impl Strategy<Value = ExactRational> {
        (-200i64..200, 1i64..200)
            .prop_map(|(n, d)| ExactRational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn rational_invariants_after_arithmetic(a in small_rational(), b in small_rational()) {
            let sum = &a + &b;
            prop_assert!(sum.denom() > &BigInt::zero());
            prop_assert_eq!(sum.numer().gcd(sum.denom()), BigInt::one());
        }

        #[test]
        fn parse_print_round_trip_random(a in small_rational()) {
            let text = rational_to_string(&a);
            prop_assert_eq!(parse_rational(&text).unwrap(), a);
        }

        #[test]
        fn decimal_directed_rounding_brackets_value(a in small_rational(), sig in 1u32..20) {
            prop_assume!(!a.is_zero());
            let lo = parse_decimal(&to_decimal(&a, sig, RoundDir::Down));
            let hi = parse_decimal(&to_decimal(&a, sig, RoundDir::Up));
            prop_assert!(lo <= a && a <= hi, "lo={lo} a={a} hi={hi}");
        }
    }

    // Test-only inverse of to_decimal for the bracketing property.
    fn parse_decimal(s: &str) -> ExactRational {
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1i32, r),
            None => (1, s),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        let digits: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        ExactRational::new(BigInt::from(sign) * digits, denom)
    }
}
