//! Exact Maclaurin coefficients of `(1+x)^(1/x) / e`.
//!
//! `e_n` is computed by the closed-form double sum over Stirling numbers of
//! the first kind; `f_n = (-1)^n e_n` is the positive, strictly decreasing
//! companion sequence. The module also evaluates the infinite-series
//! representation `e_n = e^-1 * sum_k S1(n+k, k)/(n+k)!` numerically as a
//! non-certified cross-check, tabulates `f_n` for limit inspection, and
//! exports the coefficient numerators/denominators in OEIS b-file form
//! (sequences A055505 and A055535).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactnum::{
    factorial, shared_stirling, to_decimal, ExactRational, RoundDir,
};
use crate::highprec::{enclose_constant_e_inv, FloatInterval};

/// Hard cap on adaptive series summation.
const TERM_CAP: u32 = 10_000;

/// A coefficient pair at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRecord {
    pub n: u32,
    pub e: ExactRational,
    pub f: ExactRational,
}

/// Both coefficients at index `n`; `f = (-1)^n e` by construction.
pub fn coeff_record(n: u32) -> CoeffRecord {
    let e = e_closed_form(n);
    let f = if n % 2 == 1 { -&e } else { e.clone() };
    CoeffRecord { n, e, f }
}

/// The exact coefficient `e_n` by the finite closed-form double sum
/// `e_n = (-1)^n sum_{k=0..n} [(-1)^(n+k) S1(n+k, k)/(n+k)!]
///               * sum_{m=0..n} (-1)^m/(m-k)!`,
/// with the convention `1/(m-k)! = 0` for `m < k`.
pub fn e_closed_form(n: u32) -> ExactRational {
    if n == 0 {
        return ExactRational::one();
    }
    let table = shared_stirling();
    let mut total = ExactRational::zero();
    for k in 0..=n {
        let s1 = table.stirling1(n + k, i64::from(k));
        if s1.is_zero() {
            continue;
        }
        let outer_sign = if (n + k) % 2 == 0 { 1 } else { -1 };
        let outer = ExactRational::new(BigInt::from(outer_sign) * s1, factorial(n + k));
        let mut inner = ExactRational::zero();
        for m in k..=n {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            inner += ExactRational::new(BigInt::from(sign), factorial(m - k));
        }
        total += outer * inner;
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// `f_n = (-1)^n e_n`; strictly positive for `n >= 1`, `f_0 = 1`.
pub fn f_coeff(n: u32) -> ExactRational {
    coeff_record(n).f
}

/// Internal precision used for the numeric series cross-checks.
fn series_precision(digits: u32) -> u32 {
    (digits * 4 + 64).max(256)
}

/// Numeric evaluation of the infinite-series representation
/// `e_n = e^-1 * sum_{k>=1} S1(n+k, k)/(n+k)!`.
///
/// The series is truncated adaptively: for fixed `n` every term has sign
/// `(-1)^n`, so partial sums are monotone, and summation stops once the
/// latest term is below `10^-(digits+10)` relative to the running sum.
/// The returned interval encloses the computed truncation times a
/// certified enclosure of `e^-1`; it is NOT certified to contain the true
/// `e_n` (no tail bound is available) — the certified value is always
/// [`e_closed_form`].
pub fn e_series_numeric(n: u32, digits: u32) -> Result<FloatInterval, Error> {
    if n < 1 || digits < 1 {
        return Err(Error::Domain(
            "e_series_numeric requires n >= 1 and digits >= 1".into(),
        ));
    }
    let table = shared_stirling();
    let rel = ExactRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 10));
    let mut acc = ExactRational::zero();
    let mut k: u32 = 1;
    loop {
        let term = ExactRational::new(table.stirling1(n + k, i64::from(k)), factorial(n + k));
        acc += &term;
        if term.abs() < &rel * acc.abs() {
            break;
        }
        k += 1;
        if k > TERM_CAP {
            return Err(Error::TruncationCap);
        }
    }
    let precision = series_precision(digits);
    let e_inv = enclose_constant_e_inv(precision)?;
    Ok(e_inv.scale(&acc))
}

/// Numeric value of the truncated monotonicity-gap series
/// `f_n - f_{n+1} = (-1)^n e^-1 * sum_{i=1..terms}
///      [S1(n+i, i) + S1(n+i, i-1)] / (n+i+1)!`.
///
/// The exact difference `f_coeff(n) - f_coeff(n+1)` is checked to be
/// strictly positive as part of the computation.
pub fn f_monotonicity_gap(n: u32, terms: u32) -> FloatInterval {
    assert!(n >= 1 && terms >= 1);
    let table = shared_stirling();
    let mut acc = ExactRational::zero();
    for i in 1..=terms {
        let numer = table.stirling1(n + i, i64::from(i))
            + table.stirling1(n + i, i64::from(i) - 1);
        acc += ExactRational::new(numer, factorial(n + i + 1));
    }
    if n % 2 == 1 {
        acc = -acc;
    }
    let exact_gap = f_coeff(n) - f_coeff(n + 1);
    debug_assert!(exact_gap.is_positive(), "Lemma-1 gap must be positive");
    let e_inv = enclose_constant_e_inv(256).expect("fixed precision is valid");
    e_inv.scale(&acc)
}

/// Tabulate `f_1..f_N` to 15 significant digits for empirical inspection
/// of the limit; asserts strict decrease along the whole table.
pub fn f_limit_probe(n_max: u32) -> Vec<(u32, String)> {
    assert!(n_max >= 1);
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut prev: Option<ExactRational> = None;
    for n in 1..=n_max {
        let f = f_coeff(n);
        if let Some(p) = &prev {
            assert!(p > &f, "f_n must decrease strictly at n = {n}");
        }
        rows.push((n, to_decimal(&f, 15, RoundDir::Nearest)));
        prev = Some(f);
    }
    rows
}

/// Which component of `e_n` a b-file export carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfileKind {
    /// `|numerator(e_n)|` — OEIS A055505.
    Numerators,
    /// `denominator(e_n)` — OEIS A055535.
    Denominators,
}

/// OEIS b-file text for `n = 0..=n_max`: one `index value` pair per line,
/// each line newline-terminated.
pub fn export_bfile(n_max: u32, which: BfileKind) -> String {
    let mut out = String::new();
    for n in 0..=n_max {
        let e = e_closed_form(n);
        let value = match which {
            BfileKind::Numerators => e.numer().abs(),
            BfileKind::Denominators => e.denom().clone(),
        };
        out.push_str(&format!("{n} {value}\n"));
    }
    out
}

/// Parse b-file text back into `(index, value)` pairs.
pub fn parse_bfile(text: &str) -> Result<Vec<(u32, BigInt)>, Error> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let idx = parts
            .next()
            .and_then(|t| t.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad b-file line {line:?}")))?;
        let value = parts
            .next()
            .and_then(|t| t.parse::<BigInt>().ok())
            .ok_or_else(|| Error::Parse(format!("bad b-file line {line:?}")))?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in {line:?}")));
        }
        rows.push((idx, value));
    }
    Ok(rows)
}
