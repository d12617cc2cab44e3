//! Command-line front end for the qualitative Nyquist analyzer.
//!
//! Subcommands:
//!
//! * `analyze` — full analysis as a JSON report on standard output.
//! * `sketch`  — SVG drawing of the qualitative plot, optional CSV sample
//!   table.
//! * `verify`  — self-check suite over a given function or a random
//!   corpus; nonzero exit on any failure.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 degenerate-input notice under `--strict`, 4 unwritable output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nyqual_core::features::natural_frequency_scale;
use nyqual_core::report::{analyze, AnalyzeOptions};
use nyqual_core::sketch::{build_sketch, render_svg, samples_csv, SketchOptions};
use nyqual_core::verify::{corrupted_table_demo, verify_random, verify_tf, CheckOutcome};
use nyqual_core::xfer::{TransferFunction, TransferFunctionDoc};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_UNWRITABLE: u8 = 4;

#[derive(Parser)]
#[command(name = "nyqual", version, about = "Qualitative Nyquist plot analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Transfer-function expression, e.g. "(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)".
    #[arg(long, value_name = "EXPR", conflicts_with = "input")]
    tf: Option<String>,
    /// JSON document with gain, origin_poles, num, den (ascending powers,
    /// rationals as strings).
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Truncation order for the reported parameter tables.
    #[arg(long, value_name = "N")]
    order: Option<usize>,
    /// Coefficient engine: full-recursion (default) or series-division.
    #[arg(long, value_name = "NAME", default_value = "full-recursion")]
    method: String,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a transfer function and print the JSON report.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        table: TableArgs,
        /// Exit with status 3 when the input is structurally degenerate
        /// (real response, constant modulus, or constant function).
        #[arg(long)]
        strict: bool,
    },
    /// Render the qualitative plot as SVG (plus an optional CSV table).
    Sketch {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        table: TableArgs,
        /// Output SVG path.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Optional CSV sample table path.
        #[arg(long, value_name = "FILE")]
        samples: Option<PathBuf>,
        /// Sweep range as "lo:hi" in rad/s; default is scale-aware.
        #[arg(long, value_name = "LO:HI")]
        omega_range: Option<String>,
        #[arg(long, value_name = "N", default_value_t = 64)]
        samples_per_decade: u32,
    },
    /// Run the self-check suite; nonzero exit if any check fails.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Number of random trials when no input is given.
        #[arg(long, value_name = "N", default_value_t = 200)]
        trials: usize,
        /// Seed for the random corpus.
        #[arg(long, value_name = "SEED", default_value_t = 42)]
        seed: u64,
        /// Testing hook: inject a corrupted coefficient table so the
        /// failure path is exercised end to end.
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze {
            input,
            table,
            strict,
        } => cmd_analyze(&input, &table, strict),
        Command::Sketch {
            input,
            table,
            out,
            samples,
            omega_range,
            samples_per_decade,
        } => cmd_sketch(
            &input,
            &table,
            &out,
            samples.as_deref(),
            omega_range.as_deref(),
            samples_per_decade,
        ),
        Command::Verify {
            input,
            trials,
            seed,
            corrupt_table,
        } => cmd_verify(&input, trials, seed, corrupt_table),
    }
}

fn bad_input(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_BAD_INPUT)
}

fn load_tf(input: &InputArgs) -> Result<TransferFunction, ExitCode> {
    match (&input.tf, &input.input) {
        (Some(expr), None) => TransferFunction::parse(expr).map_err(bad_input),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| bad_input(format_args!("cannot read {}: {e}", path.display())))?;
            let doc: TransferFunctionDoc = serde_json::from_str(&text)
                .map_err(|e| bad_input(format_args!("invalid input document: {e}")))?;
            TransferFunction::try_from(&doc).map_err(bad_input)
        }
        _ => Err(bad_input("provide exactly one of --tf or --input")),
    }
}

fn analysis_options(table: &TableArgs) -> AnalyzeOptions {
    AnalyzeOptions {
        order: table.order,
        method: table.method.clone(),
    }
}

fn cmd_analyze(input: &InputArgs, table: &TableArgs, strict: bool) -> ExitCode {
    let tf = match load_tf(input) {
        Ok(tf) => tf,
        Err(code) => return code,
    };
    let report = match analyze(&tf, &analysis_options(table)) {
        Ok(r) => r,
        Err(e) => return bad_input(e),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if strict && report.is_degenerate() {
        eprintln!("notice: structurally degenerate input (see report flags)");
        return ExitCode::from(EXIT_DEGENERATE);
    }
    ExitCode::SUCCESS
}

fn parse_omega_range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got `{text}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(format!("need 0 < LO < HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_UNWRITABLE)
    })
}

fn cmd_sketch(
    input: &InputArgs,
    table: &TableArgs,
    out: &Path,
    samples: Option<&Path>,
    omega_range: Option<&str>,
    samples_per_decade: u32,
) -> ExitCode {
    let tf = match load_tf(input) {
        Ok(tf) => tf,
        Err(code) => return code,
    };
    let report = match analyze(&tf, &analysis_options(table)) {
        Ok(r) => r,
        Err(e) => return bad_input(e),
    };
    let (omega_min, omega_max) = match omega_range {
        Some(text) => match parse_omega_range(text) {
            Ok(range) => range,
            Err(e) => return bad_input(e),
        },
        None => {
            let scale = natural_frequency_scale(&tf);
            (1e-3 * scale, 1e3 * scale)
        }
    };
    let options = SketchOptions {
        omega_min,
        omega_max,
        samples_per_decade,
        ..SketchOptions::default()
    };
    let doc = match build_sketch(&tf, &report, options) {
        Ok(doc) => doc,
        Err(e) => return bad_input(e),
    };
    if let Err(code) = write_file(out, &render_svg(&doc)) {
        return code;
    }
    if let Some(path) = samples {
        if let Err(code) = write_file(path, &samples_csv(&doc.curve)) {
            return code;
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(input: &InputArgs, trials: usize, seed: u64, corrupt_table: bool) -> ExitCode {
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    match (&input.tf, &input.input) {
        (None, None) => outcomes.extend(verify_random(trials, seed)),
        _ => {
            let tf = match load_tf(input) {
                Ok(tf) => tf,
                Err(code) => return code,
            };
            outcomes.extend(verify_tf(&tf));
        }
    }
    if corrupt_table {
        outcomes.push(corrupted_table_demo());
    }
    let mut all_passed = true;
    for outcome in &outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", outcome.name, outcome.detail);
        all_passed &= outcome.passed;
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}
