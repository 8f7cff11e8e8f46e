//! Command-line front end: exact coefficients, enclosures, Keller
//! expansions and limits, plus a built-in verification battery.
//!
//! Output is machine-first: JSON by default, OEIS b-file text and CSV where
//! those formats apply. Exit codes: 0 success, 1 domain/computation error,
//! 2 usage error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::Serialize;

use expx::coeffs::{self, BfileKind};
use expx::enclosure;
use expx::error::Error;
use expx::exactnum::{parse_rational, rational_to_string, to_decimal, ExactRational, RoundDir};
use expx::highprec;
use expx::keller::{self, ScaledSeries};
use expx::powerseries::SeriesPoly;

/// Caps on request sizes; beyond these the invocation is a usage error.
const N_CAP: u32 = 512;
const ORDER_CAP: u32 = 128;
const K_CAP: usize = 64;
const PRECISION_MIN: u32 = 16;
const PRECISION_CAP: u32 = 16_384;

#[derive(Parser)]
#[command(name = "expx", version, about = "Exact coefficients, enclosures and Keller limits of (1+x)^(1/x)")]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffFormat {
    Json,
    Bfile,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Numerators,
    Denominators,
}

impl From<Which> for BfileKind {
    fn from(w: Which) -> Self {
        match w {
            Which::Numerators => BfileKind::Numerators,
            Which::Denominators => BfileKind::Denominators,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact coefficients e_0..e_n as rational strings or b-file text.
    Coeffs {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: CoeffFormat,
        /// Which b-file to emit (bfile format only).
        #[arg(long, value_enum, default_value = "numerators")]
        which: Which,
    },
    /// Certified partial-sum bounds on (1+x)^(1/x) at a rational x.
    Enclose {
        #[arg(long)]
        x: String,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// Keller-type expansion coefficients, rows, and truncation values.
    Keller {
        /// Print the integer coefficient row for one k and exit.
        #[arg(long, conflicts_with_all = ["series", "k", "c", "order", "radius", "eval_y"])]
        row: Option<u32>,
        /// Input series: "e" for the (1+x)^(1/x) series, or a JSON array
        /// of rational strings (lowest order first).
        #[arg(long)]
        series: Option<String>,
        /// Truncation order K of the expansion (K >= 2).
        #[arg(long)]
        k: Option<usize>,
        /// Shift c of the expansion.
        #[arg(long, default_value = "0")]
        c: String,
        /// Number of series coefficients to generate for --series e.
        #[arg(long)]
        order: Option<usize>,
        /// Convergence-radius hint for an inline series.
        #[arg(long)]
        radius: Option<String>,
        /// Also evaluate the truncated expansion at this y.
        #[arg(long)]
        eval_y: Option<String>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
    },
    /// High-precision Keller difference at one y, or a convergence probe.
    Limit {
        #[arg(long, default_value = "0")]
        c: String,
        #[arg(long, required_unless_present = "probe_start")]
        y: Option<String>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
        /// Emit a CSV convergence probe starting at this y...
        #[arg(long)]
        probe_start: Option<String>,
        /// ...doubling this many times.
        #[arg(long, default_value_t = 6)]
        probe_steps: u32,
    },
    /// Run the built-in verification battery; exits nonzero on failure.
    Verify {
        /// Run the full battery at acceptance scale (slower).
        #[arg(long)]
        full: bool,
    },
    /// OEIS b-file export of the coefficient numerators or denominators.
    Export {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        which: Which,
    },
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => CliError::Usage(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}

fn check_cap(value: u64, cap: u64, what: &str) -> Result<(), CliError> {
    if value > cap {
        return Err(CliError::Usage(format!(
            "{what} is capped at {cap}, got {value}"
        )));
    }
    Ok(())
}

fn check_precision(bits: u32) -> Result<(), CliError> {
    if !(PRECISION_MIN..=PRECISION_CAP).contains(&bits) {
        return Err(CliError::Usage(format!(
            "precision must lie in [{PRECISION_MIN}, {PRECISION_CAP}], got {bits}"
        )));
    }
    Ok(())
}

fn parse_arg(text: &str, what: &str) -> Result<ExactRational, CliError> {
    parse_rational(text)
        .map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn print_json<T: Serialize>(value: &T, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        serde_json::to_string(value).expect("serializable")
    };
    println!("{text}");
}

#[derive(Serialize)]
struct LimitOutput {
    y: String,
    c: String,
    precision_bits: u32,
    difference_lo: String,
    difference_hi: String,
    e_lo: String,
    e_hi: String,
    abs_error_max: String,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Coeffs { n, format, which } => {
            check_cap(u64::from(n), u64::from(N_CAP), "coefficient index n")?;
            match format {
                CoeffFormat::Json => {
                    let values: Vec<String> = (0..=n)
                        .map(|k| rational_to_string(&coeffs::e_closed_form(k)))
                        .collect();
                    print_json(&values, cli.pretty);
                }
                CoeffFormat::Bfile => {
                    print!("{}", coeffs::export_bfile(n, which.into()));
                }
            }
            Ok(())
        }
        Cmd::Enclose { x, order, precision } => {
            check_cap(u64::from(order), u64::from(ORDER_CAP), "enclosure order")?;
            check_precision(precision)?;
            let x = parse_arg(&x, "--x")?;
            let report = enclosure::enclose(&x, order, precision)?;
            let value: serde_json::Value =
                serde_json::from_str(&report.to_json()).expect("round-trip");
            print_json(&value, cli.pretty);
            Ok(())
        }
        Cmd::Keller {
            row,
            series,
            k,
            c,
            order,
            radius,
            eval_y,
            precision,
        } => {
            if let Some(k) = row {
                check_cap(u64::from(k), K_CAP as u64, "row index k")?;
                let row = keller::keller_row(k)?;
                let values: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                print_json(&values, cli.pretty);
                return Ok(());
            }
            let series_text = series.ok_or_else(|| {
                CliError::Usage("either --row or --series is required".into())
            })?;
            let k = k.ok_or_else(|| CliError::Usage("--k is required with --series".into()))?;
            check_cap(k as u64, K_CAP as u64, "expansion order K")?;
            check_precision(precision)?;
            let c = parse_arg(&c, "--c")?;

            let scaled = if series_text == "e" {
                let ord = order.unwrap_or((k + 2).max(8));
                check_cap(ord as u64, u64::from(N_CAP), "series order")?;
                keller::e_series(ord)
            } else {
                let parts: Vec<String> = serde_json::from_str(&series_text).map_err(|_| {
                    CliError::Usage(
                        "--series must be \"e\" or a JSON array of rational strings".into(),
                    )
                })?;
                if parts.is_empty() {
                    return Err(CliError::Usage("series needs at least one coefficient".into()));
                }
                check_cap(parts.len() as u64 - 1, u64::from(N_CAP), "series order")?;
                let coeffs: Result<Vec<ExactRational>, CliError> = parts
                    .iter()
                    .map(|p| parse_arg(p, "series coefficient"))
                    .collect();
                let mut poly = SeriesPoly::new(coeffs?);
                if let Some(r) = radius {
                    let rho = parse_arg(&r, "--radius")?;
                    if !rho.is_positive() {
                        return Err(CliError::Usage("--radius must be positive".into()));
                    }
                    poly = poly.with_radius_hint(rho);
                }
                ScaledSeries::rational(poly)
            };

            let expansion = keller::expand_shifted(&scaled, &c, k).map_err(|e| match e {
                Error::SeriesOrder(m) => CliError::Usage(m),
                other => CliError::from(other),
            })?;
            let mut value: serde_json::Value =
                serde_json::from_str(&expansion.to_json()).expect("round-trip");
            if let Some(y_text) = eval_y {
                let y = parse_arg(&y_text, "--eval-y")?;
                let interval = keller::expansion_eval(&expansion, &y, precision)?;
                let digits = decimal_digits(precision);
                let (lo, hi) = interval.to_decimal_pair(digits);
                value["eval"] = serde_json::json!({
                    "y": rational_to_string(&y),
                    "lo": lo,
                    "hi": hi,
                    "precision_bits": precision,
                });
            }
            print_json(&value, cli.pretty);
            Ok(())
        }
        Cmd::Limit {
            c,
            y,
            precision,
            probe_start,
            probe_steps,
        } => {
            check_precision(precision)?;
            let c = parse_arg(&c, "--c")?;
            if let Some(start_text) = probe_start {
                check_cap(u64::from(probe_steps), 24, "probe steps")?;
                let start = parse_arg(&start_text, "--probe-start")?;
                let two = ExactRational::from(num_bigint::BigInt::from(2));
                let mut ys = Vec::with_capacity(probe_steps as usize + 1);
                let mut y = start;
                for _ in 0..=probe_steps {
                    ys.push(y.clone());
                    y *= &two;
                }
                let rows = highprec::convergence_probe(&c, &ys, precision)?;
                print!("{}", highprec::probe_to_csv(&rows));
                return Ok(());
            }
            let y = parse_arg(&y.expect("required by clap"), "--y")?;
            let diff = highprec::eval_keller_difference(&y, &c, precision)?;
            let e = highprec::enclose_constant_e(precision)?;
            let digits = decimal_digits(precision);
            let err_max = (diff.lo() - e.hi())
                .abs()
                .max((diff.hi() - e.lo()).abs());
            let (difference_lo, difference_hi) = diff.to_decimal_pair(digits);
            let (e_lo, e_hi) = e.to_decimal_pair(digits);
            print_json(
                &LimitOutput {
                    y: rational_to_string(&y),
                    c: rational_to_string(&c),
                    precision_bits: precision,
                    difference_lo,
                    difference_hi,
                    e_lo,
                    e_hi,
                    abs_error_max: to_decimal(&err_max, 20, RoundDir::Up),
                },
                cli.pretty,
            );
            Ok(())
        }
        Cmd::Verify { full } => verify(full),
        Cmd::Export { n, which } => {
            check_cap(u64::from(n), u64::from(N_CAP), "coefficient index n")?;
            print!("{}", coeffs::export_bfile(n, which.into()));
            Ok(())
        }
    }
}

fn decimal_digits(precision_bits: u32) -> u32 {
    ((precision_bits * 3) / 10).clamp(20, 60)
}

fn verify(full: bool) -> Result<(), CliError> {
    let mut checks: Vec<bool> = Vec::new();
    let mut record = |name: &'static str, passed: bool, detail: String| {
        println!(
            "{} - {name}{}",
            if passed { "ok  " } else { "FAIL" },
            if detail.is_empty() { String::new() } else { format!(" ({detail})") }
        );
        checks.push(passed);
    };

    // Coefficient table.
    let table = ["1", "-1/2", "11/24", "-7/16", "2447/5760", "-959/2304", "238043/580608"];
    let ok = table.iter().enumerate().all(|(n, text)| {
        coeffs::e_closed_form(n as u32) == parse_rational(text).unwrap()
    });
    record("coefficient table e_0..e_6", ok, String::new());

    // Oracle equivalence.
    let n_max = if full { 30 } else { 15 };
    let oracle = expx::powerseries::oracle_e_coeffs(n_max);
    let ok = (0..=n_max as u32).all(|n| &coeffs::e_closed_form(n) == oracle.coeff(n as usize));
    record("closed form matches series oracle", ok, format!("n <= {n_max}"));

    // Strict decrease of f.
    let ok = (1..=n_max as u32).all(|n| {
        let f = coeffs::f_coeff(n);
        f.is_positive() && f > coeffs::f_coeff(n + 1)
    });
    record("f sequence positive and strictly decreasing", ok, format!("n <= {n_max}"));

    // Numeric series representation.
    let digits = 30;
    let tol = ExactRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(25));
    let top = if full { 10 } else { 5 };
    let ok = (1..=top).all(|n| {
        let i = coeffs::e_series_numeric(n, digits).unwrap();
        (i.midpoint() - coeffs::e_closed_form(n)).abs() < tol
    });
    record("series representation agrees numerically", ok, format!("n <= {top}"));

    // Sandwich containment.
    let orders = if full { 12 } else { 8 };
    let mut ok = true;
    for x_text in ["1/10", "1/4", "1/2", "9/10"] {
        let x = parse_rational(x_text).unwrap();
        let eval = highprec::eval_e_of_x(&x, 200).unwrap();
        for n in 1..=orders {
            let rep = enclosure::enclose(&x, n, 200).unwrap();
            let hi = rep.numeric_hi.clone().unwrap();
            if !(rep.numeric_lo < *eval.lo() && *eval.hi() < hi) {
                ok = false;
            }
        }
    }
    for x_text in ["-1/10", "-1/2", "-9/10"] {
        let x = parse_rational(x_text).unwrap();
        let eval = highprec::eval_e_of_x(&x, 200).unwrap();
        for n in 1..=orders {
            let rep = enclosure::enclose(&x, n, 200).unwrap();
            if rep.numeric_lo >= *eval.lo() {
                ok = false;
            }
        }
    }
    record("partial-sum bounds contain the 200-bit evaluation", ok, format!("orders <= {orders}"));

    // Keller rows.
    let expected: [&[i64]; 5] = [
        &[1, 1],
        &[1, 3, 2],
        &[1, 4, 6, 3],
        &[1, 5, 10, 10, 4],
        &[1, 6, 15, 20, 15, 5],
    ];
    let ok = expected.iter().enumerate().all(|(i, row)| {
        keller::keller_row(i as u32 + 2).unwrap()
            == row.iter().map(|v| num_bigint::BigInt::from(*v)).collect::<Vec<_>>()
    });
    record("keller coefficient rows k = 2..6", ok, String::new());

    // Shift reduction at c = 0.
    let sample = keller::e_series(10);
    let ok = (2..=8).all(|k| {
        keller::expand_plain(&sample, k).unwrap()
            == keller::expand_shifted(&sample, &ExactRational::from(num_bigint::BigInt::from(0)), k).unwrap()
    });
    record("shifted expansion reduces to plain at c = 0", ok, String::new());

    // Keller limit numeric check.
    let y = ExactRational::from(num_bigint::BigInt::from(if full { 1u64 << 20 } else { 1u64 << 12 }));
    let e = highprec::enclose_constant_e(256).unwrap();
    let mut ok = true;
    for c_text in ["0", "1/2"] {
        let c = parse_rational(c_text).unwrap();
        let d = highprec::eval_keller_difference(&y, &c, 256).unwrap();
        let b2 = keller::expand_shifted(&keller::e_series(4), &c, 2)
            .unwrap()
            .b_coeff(2)
            .clone();
        let bound = b2.abs() * e.hi() * ExactRational::from(num_bigint::BigInt::from(10))
            / (&y * &y);
        if (d.midpoint() - e.midpoint()).abs() >= bound {
            ok = false;
        }
    }
    record("keller difference approaches e at the predicted rate", ok, String::new());

    let failed = checks.iter().filter(|passed| !**passed).count();
    println!(
        "{} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    );
    if failed > 0 {
        return Err(CliError::Compute(format!("{failed} verification checks failed")));
    }
    Ok(())
}
