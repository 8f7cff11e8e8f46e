//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`) before asserting.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use expx::coeffs::{self, BfileKind};
use expx::enclosure;
use expx::exactnum::{parse_rational, ExactRational};
use expx::highprec::{self, rational_to_f64};
use expx::keller::{self, ScaledSeries};
use expx::powerseries::{oracle_e_coeffs, SeriesPoly};

fn q(s: &str) -> ExactRational {
    parse_rational(s).unwrap()
}

fn report(criterion: u32, result: Result<String, String>) {
    match &result {
        Ok(detail) => println!("criterion {criterion}: PASS {detail}"),
        Err(detail) => println!("criterion {criterion}: FAIL {detail}"),
    }
    if let Err(detail) = result {
        panic!("criterion {criterion} failed: {detail}");
    }
}

#[test]
fn acceptance_01_coefficient_table() {
    let start = std::time::Instant::now();
    let expected = [
        "1",
        "-1/2",
        "11/24",
        "-7/16",
        "2447/5760",
        "-959/2304",
        "238043/580608",
    ];
    let mut result = Ok(String::new());
    for (n, text) in expected.iter().enumerate() {
        let got = coeffs::e_closed_form(n as u32);
        if got != q(text) {
            result = Err(format!("e_{n} = {got}, expected {text}"));
            break;
        }
    }
    let elapsed = start.elapsed();
    if result.is_ok() && elapsed.as_secs_f64() >= 1.0 {
        result = Err(format!("took {elapsed:?}, budget 1 s"));
    }
    report(
        1,
        result.map(|_| format!("(e_0..e_6 exact, {elapsed:?})")),
    );
}

#[test]
fn acceptance_02_oracle_equivalence() {
    let start = std::time::Instant::now();
    let oracle = oracle_e_coeffs(30);
    let mut result = Ok(String::new());
    for n in 0..=30u32 {
        if &coeffs::e_closed_form(n) != oracle.coeff(n as usize) {
            result = Err(format!("mismatch at n = {n}"));
            break;
        }
    }
    let elapsed = start.elapsed();
    if result.is_ok() && elapsed.as_secs_f64() >= 30.0 {
        result = Err(format!("took {elapsed:?}, budget 30 s"));
    }
    report(
        2,
        result.map(|_| format!("(closed form = series oracle for n <= 30, {elapsed:?})")),
    );
}

#[test]
fn acceptance_03_lemma1_monotonicity() {
    let mut result = Ok(String::new());
    for n in 1..=30u32 {
        let f_n = coeffs::f_coeff(n);
        let f_next = coeffs::f_coeff(n + 1);
        if !(f_n > f_next && f_next.is_positive()) {
            result = Err(format!("f_{n} > f_{} > 0 violated", n + 1));
            break;
        }
    }
    report(
        3,
        result.map(|_| "(f_n strictly decreasing and positive, n <= 30, exact)".into()),
    );
}

#[test]
fn acceptance_04_series_representation() {
    let tol = ExactRational::new(BigInt::one(), BigInt::from(10u32).pow(25));
    let mut result = Ok(String::new());
    for n in 1..=10u32 {
        let interval = coeffs::e_series_numeric(n, 30).expect("series converges");
        let err = (interval.midpoint() - coeffs::e_closed_form(n)).abs();
        if err >= tol {
            result = Err(format!("n = {n}: |midpoint - exact| = {err} >= 1e-25"));
            break;
        }
    }
    report(
        4,
        result.map(|_| "(series representation within 1e-25 for n <= 10 at 256 bits)".into()),
    );
}

#[test]
fn acceptance_05_theorem1_sandwich() {
    let mut result: Result<String, String> = Ok(String::new());

    'outer: for x_text in ["1/10", "1/4", "1/2", "9/10"] {
        let x = q(x_text);
        let m: Vec<ExactRational> = (0..=12u32)
            .map(|j| enclosure::partial_sum_multiplier(&x, j).unwrap())
            .collect();
        // Exact interlacing: odd orders increase, even orders decrease,
        // every odd multiplier sits below every even one.
        for j in (1..=9usize).step_by(2) {
            if m[j] >= m[j + 2] {
                result = Err(format!("odd chain broken at x = {x_text}, order {j}"));
                break 'outer;
            }
        }
        for j in (0..=10usize).step_by(2) {
            if m[j + 2] >= m[j] {
                result = Err(format!("even chain broken at x = {x_text}, order {j}"));
                break 'outer;
            }
        }
        if m[11] >= m[12] {
            result = Err(format!("odd/even cross link broken at x = {x_text}"));
            break 'outer;
        }

        let eval = highprec::eval_e_of_x(&x, 200).unwrap();
        for n in 1..=12u32 {
            let rep = enclosure::enclose(&x, n, 200).unwrap();
            let hi = rep.numeric_hi.clone().expect("two-sided on (0,1)");
            if !(rep.numeric_lo < *eval.lo() && *eval.hi() < hi) {
                result = Err(format!(
                    "200-bit evaluation escapes numeric sandwich at x = {x_text}, n = {n}"
                ));
                break 'outer;
            }
        }
    }

    if result.is_ok() {
        'outer2: for x_text in ["-1/10", "-1/2", "-9/10"] {
            let x = q(x_text);
            let mut prev = enclosure::partial_sum_multiplier(&x, 0).unwrap();
            for n in 1..=12u32 {
                let next = enclosure::partial_sum_multiplier(&x, n).unwrap();
                if prev >= next {
                    result = Err(format!("increasing chain broken at x = {x_text}, n = {n}"));
                    break 'outer2;
                }
                prev = next;
            }
            let eval = highprec::eval_e_of_x(&x, 200).unwrap();
            for n in 1..=12u32 {
                let rep = enclosure::enclose(&x, n, 200).unwrap();
                if rep.numeric_lo >= *eval.lo() {
                    result = Err(format!(
                        "lower bound not strictly below evaluation at x = {x_text}, n = {n}"
                    ));
                    break 'outer2;
                }
            }
        }
    }

    report(
        5,
        result.map(|_| {
            "(interlacing + containment on (0,1); increasing chain + lower bounds on (-1,0); orders <= 12)"
                .into()
        }),
    );
}

#[test]
fn acceptance_06_keller_rows() {
    let expected: [&[i64]; 5] = [
        &[1, 1],
        &[1, 3, 2],
        &[1, 4, 6, 3],
        &[1, 5, 10, 10, 4],
        &[1, 6, 15, 20, 15, 5],
    ];
    let mut result = Ok(String::new());
    for (i, row) in expected.iter().enumerate() {
        let k = i as u32 + 2;
        let got = keller::keller_row(k).unwrap();
        let want: Vec<BigInt> = row.iter().map(|v| BigInt::from(*v)).collect();
        if got != want {
            result = Err(format!("row k = {k}: got {got:?}"));
            break;
        }
    }
    report(6, result.map(|_| "(rows k = 2..6 match)".into()));
}

// --- criterion 7 machinery -------------------------------------------------

/// `G(z) = sum a_k / z^k` for a truncated series, exactly.
fn eval_g(coeffs: &[ExactRational], z: &ExactRational) -> ExactRational {
    let inv = z.recip();
    let mut power = ExactRational::one();
    let mut acc = ExactRational::zero();
    for a in coeffs {
        acc += a * &power;
        power *= &inv;
    }
    acc
}

/// `(y+1)G(y+c) - yG(y+c-1)` by direct summation of the truncated series.
fn direct_difference(
    coeffs: &[ExactRational],
    y: &ExactRational,
    c: &ExactRational,
) -> ExactRational {
    let z = y + c;
    let zm1 = &z - ExactRational::one();
    (y + ExactRational::one()) * eval_g(coeffs, &z) - y * eval_g(coeffs, &zm1)
}

/// Zero-pad a coefficient list to the given order.
fn padded_series(coeffs: &[ExactRational], order: usize) -> ScaledSeries {
    let mut v = coeffs.to_vec();
    v.resize(order + 1, ExactRational::zero());
    ScaledSeries::rational(SeriesPoly::new(v))
}

/// Exact check that `2^13 <= (a/b)^2 <= 2^15`, i.e. the per-doubling decay
/// ratio a/b lies in `[2^6.5, 2^7.5]`.
fn ratio_in_window(a: &ExactRational, b: &ExactRational) -> bool {
    let a2 = a * a;
    let b2 = b * b;
    let lo = &b2 * ExactRational::from(BigInt::one() << 13);
    let hi = b2 * ExactRational::from(BigInt::one() << 15);
    lo <= a2 && a2 <= hi
}

/// Nondegeneracy guard for randomized series: at `y = 2^10` the `1/y^7`
/// term of the omitted tail must dominate the rest by a 0.15 margin, for
/// every shift under test. This is a precondition of the stated decay
/// window, checked before any ratio is measured.
fn tail_dominated(coeffs: &[ExactRational], shifts: &[ExactRational]) -> bool {
    let padded = padded_series(coeffs, 40);
    let y0 = ExactRational::from(BigInt::from(1u64 << 10));
    for c in shifts {
        let exp = keller::expand_shifted(&padded, c, 40).unwrap();
        let b7 = exp.b_coeff(7).abs();
        if b7.is_zero() {
            return false;
        }
        let mut tail = ExactRational::zero();
        let mut scale = y0.recip();
        for j in 8..=40usize {
            tail += exp.b_coeff(j).abs() * &scale;
            scale /= &y0;
        }
        if tail > b7 * q("3/20") {
            return false;
        }
    }
    true
}

fn random_series(rng: &mut ChaCha8Rng, shifts: &[ExactRational]) -> Vec<ExactRational> {
    loop {
        let coeffs: Vec<ExactRational> = (0..=8)
            .map(|_| {
                let mut v: i64 = rng.gen_range(-9..=9);
                if v == 0 {
                    v = 1;
                }
                ExactRational::from(BigInt::from(v))
            })
            .collect();
        if tail_dominated(&coeffs, shifts) {
            return coeffs;
        }
    }
}

#[test]
fn acceptance_07_expansion_soundness() {
    let start = std::time::Instant::now();
    let shifts = [q("0"), q("1/2"), q("-2")];
    let k_max = 6usize;

    // The flagship series (coefficient part of (1+x)^(1/x)/e) plus five
    // seeded random integer series passing the nondegeneracy guard.
    let mut inputs: Vec<(String, Vec<ExactRational>)> = vec![(
        "e-series".to_string(),
        (0..=8u32).map(coeffs::e_closed_form).collect(),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(0xE55EED);
    for i in 0..5 {
        inputs.push((format!("random-{i}"), random_series(&mut rng, &shifts)));
    }

    let mut failures: Vec<String> = Vec::new();
    for (name, coeffs) in &inputs {
        let series = ScaledSeries::rational(SeriesPoly::new(coeffs.clone()));
        for c in &shifts {
            let expansion = keller::expand_shifted(&series, c, k_max).unwrap();
            let disc: Vec<ExactRational> = (10..=20u32)
                .map(|e| {
                    let y = ExactRational::from(BigInt::one() << e);
                    (direct_difference(coeffs, &y, c) - expansion.eval_exact(&y).unwrap()).abs()
                })
                .collect();
            for step in 0..disc.len() - 1 {
                if !ratio_in_window(&disc[step], &disc[step + 1]) {
                    let measured = (rational_to_f64(&disc[step])
                        / rational_to_f64(&disc[step + 1]))
                    .log2();
                    failures.push(format!(
                        "{name}, c = {c}, y = 2^{}: log2 ratio {measured:.3} outside [6.5, 7.5]",
                        10 + step
                    ));
                }
            }
        }
    }

    let elapsed = start.elapsed();
    let result = if failures.is_empty() {
        if elapsed.as_secs_f64() < 60.0 {
            Ok(format!(
                "(decay window holds for e-series and 5 random series, c in {{0, 1/2, -2}}, {elapsed:?})"
            ))
        } else {
            Err(format!("took {elapsed:?}, budget 60 s"))
        }
    } else {
        Err(format!(
            "{} of {} doubling ratios outside window: {}",
            failures.len(),
            inputs.len() * shifts.len() * 10,
            failures.join("; ")
        ))
    };
    report(7, result);
}

#[test]
fn acceptance_08_keller_limit() {
    let e = highprec::enclose_constant_e(256).unwrap();
    let y20 = ExactRational::from(BigInt::one() << 20);
    let mut result: Result<String, String> = Ok(String::new());

    for c_text in ["-5", "0", "1/2", "5"] {
        let c = q(c_text);
        let diff = highprec::eval_keller_difference(&y20, &c, 256).unwrap();
        let b2 = keller::expand_shifted(&keller::e_series(4), &c, 2)
            .unwrap()
            .b_coeff(2)
            .clone();
        // |b_2(c)| is an e-multiple; bound with the lower endpoint of e.
        let bound =
            b2.abs() * e.lo() * ExactRational::from(BigInt::from(10)) / (&y20 * &y20);
        let dist = (diff.lo() - e.hi()).abs().max((diff.hi() - e.lo()).abs());
        if dist > bound {
            result = Err(format!(
                "c = {c_text}: distance {} exceeds 10|b_2|/y^2 = {}",
                rational_to_f64(&dist),
                rational_to_f64(&bound)
            ));
            break;
        }

        // Fitted log-log slope over y = 2^10..2^16.
        let points: Vec<(f64, f64)> = (10..=16u32)
            .map(|exp| {
                let y = ExactRational::from(BigInt::one() << exp);
                let d = highprec::eval_keller_difference(&y, &c, 256).unwrap();
                let err = (d.midpoint() - e.midpoint()).abs();
                (rational_to_f64(&y).ln(), rational_to_f64(&err).ln())
            })
            .collect();
        let n = points.len() as f64;
        let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
        let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
        let slope = points
            .iter()
            .map(|(x, y)| (x - mean_x) * (y - mean_y))
            .sum::<f64>()
            / points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum::<f64>();
        if !(-2.2..=-1.8).contains(&slope) {
            result = Err(format!("c = {c_text}: fitted slope {slope:.4} outside [-2.2, -1.8]"));
            break;
        }
    }

    report(
        8,
        result.map(|_| {
            "(difference within 10|b_2(c)|/y^2 of e at y = 2^20; slopes in [-2.2, -1.8])".into()
        }),
    );
}

#[test]
fn acceptance_09_shift_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED5);
    let mut result = Ok(String::new());
    'outer: for case in 0..20 {
        let order = rng.gen_range(8..=10usize);
        let coeffs: Vec<ExactRational> = (0..=order)
            .map(|_| {
                ExactRational::new(
                    BigInt::from(rng.gen_range(-50i64..=50)),
                    BigInt::from(rng.gen_range(1i64..=20)),
                )
            })
            .collect();
        let series = ScaledSeries::rational(SeriesPoly::new(coeffs));
        for k in 2..=8usize {
            let plain = keller::expand_plain(&series, k).unwrap();
            let shifted = keller::expand_shifted(&series, &ExactRational::zero(), k).unwrap();
            if plain != shifted {
                result = Err(format!("case {case}, K = {k}: shifted(0) != plain"));
                break 'outer;
            }
        }
    }
    report(
        9,
        result.map(|_| "(expand_shifted(a, 0, K) = expand_plain(a, K) for 20 series, K <= 8)".into()),
    );
}

#[test]
fn acceptance_10_cli_determinism_roundtrip() {
    use std::process::Command;

    let bin = env!("CARGO_BIN_EXE_expx");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().expect("CLI runs");
        assert!(out.status.success(), "CLI failed: {args:?}");
        out.stdout
    };

    let mut result: Result<String, String> = Ok(String::new());

    // Determinism: identical argv twice, byte-identical output.
    for args in [
        vec!["coeffs", "--n", "6", "--format", "json"],
        vec!["coeffs", "--n", "6", "--format", "bfile", "--which", "numerators"],
        vec!["enclose", "--x", "1/2", "--order", "2"],
        vec!["limit", "--c", "0", "--y", "4096", "--precision", "128"],
    ] {
        let first = run(&args);
        let second = run(&args);
        if first != second {
            result = Err(format!("non-deterministic output for {args:?}"));
            break;
        }
    }

    if result.is_ok() {
        // `coeffs --format bfile` must agree byte-for-byte with export.
        let via_coeffs = run(&["coeffs", "--n", "6", "--format", "bfile", "--which", "numerators"]);
        let via_export = run(&["export", "--n", "6", "--which", "numerators"]);
        if via_coeffs != via_export {
            result = Err("coeffs --format bfile differs from export".into());
        } else if String::from_utf8_lossy(&via_coeffs)
            != coeffs::export_bfile(6, BfileKind::Numerators)
        {
            result = Err("CLI b-file differs from library export".into());
        }
    }

    if result.is_ok() {
        // Round-trip: parse both b-files back and reassemble the exact
        // coefficients, signs restored from the alternating sign law.
        let nums = coeffs::parse_bfile(&String::from_utf8_lossy(&run(&[
            "export", "--n", "6", "--which", "numerators",
        ])))
        .unwrap();
        let dens = coeffs::parse_bfile(&String::from_utf8_lossy(&run(&[
            "export", "--n", "6", "--which", "denominators",
        ])))
        .unwrap();
        for ((n, num), (_, den)) in nums.iter().zip(dens.iter()) {
            let sign = if n % 2 == 1 { -1 } else { 1 };
            let rebuilt = ExactRational::new(BigInt::from(sign) * num, den.clone());
            if rebuilt != coeffs::e_closed_form(*n) {
                result = Err(format!("b-file round trip mismatch at n = {n}"));
                break;
            }
        }
    }

    report(
        10,
        result.map(|_| "(byte-identical reruns; b-file round trip reproduces e_0..e_6)".into()),
    );
}
