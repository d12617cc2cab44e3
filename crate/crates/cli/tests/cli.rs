//! End-to-end tests of the `nyqual` binary: subcommands, exit codes, and
//! output formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CASE_1: &str = "(2s^3+6s^2+2s+1)/(4s^3+5s^2+2s+1)";
const CASE_2: &str = "(s^2+12s+35)/(s*(s^4+12s^3+30s^2+28s+9))";

fn nyqual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nyqual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_first_case_study() {
    let out = nyqual(&["analyze", "--tf", CASE_1]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let low = &report["deviation"]["low"]["values"];
    assert_eq!(low[0], "0");
    assert_eq!(low[1], "-1");
    assert_eq!(low[2], "4");
    let high = &report["deviation"]["high"]["values"];
    assert_eq!(high[0], "7/4");
    assert_eq!(high[1], "27/16");
    assert_eq!(report["behavior"]["exit"]["archetype"], "Curve1");
    assert_eq!(report["behavior"]["entry"]["archetype"], "Curve4");
    assert_eq!(report["start"]["modulus"], "1");
    assert_eq!(report["end"]["modulus"], "1/2");
    assert_eq!(report["behavior"]["exit_winding"], "CounterClockwise");
}

#[test]
fn analyze_second_case_study_from_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plant.json");
    fs::write(
        &path,
        r#"{"gain":"1","origin_poles":1,"num":["35","12","1"],"den":["9","28","30","12","1"]}"#,
    )
    .unwrap();
    let out = nyqual(&["analyze", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["deviation"]["low"]["values"][0], "-872/315");
    assert_eq!(report["deviation"]["high"]["values"][0], "0");
    assert_eq!(report["deviation"]["high"]["values"][2], "88");
    assert_eq!(report["behavior"]["exit"]["phase_sense"], "Lag");
    assert_eq!(report["behavior"]["entry"]["phase_sense"], "Lag");
    assert_eq!(report["asymptote"]["abscissa"], "-872/81");
    assert_eq!(report["behavior"]["exit_lifted"]["phase_over_pi"], "-1/2");
    assert_eq!(
        report["behavior"]["exit_lifted"]["dominated_by_origin_poles"],
        true
    );
}

#[test]
fn analyze_rejects_bad_expressions_with_exit_2() {
    let out = nyqual(&["analyze", "--tf", "(1+s"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = nyqual(&["analyze", "--tf", "1/(s-s)"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("zero"), "stderr was: {msg}");
}

#[test]
fn analyze_requires_exactly_one_input() {
    let out = nyqual(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nyqual(&["analyze", "--tf", "1/1", "--input", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_strict_flags_degenerate_inputs_with_exit_3() {
    let out = nyqual(&["analyze", "--tf", "(1+s^2)/(2+s^2)", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    // The report is still printed before the notice.
    let report = stdout_json(&out);
    assert_eq!(report["deviation"]["low"]["degenerate_imag"], true);
    assert_eq!(report["crossings"]["degenerate_on_axis"], true);
    // Without --strict the same input succeeds.
    let out = nyqual(&["analyze", "--tf", "(1+s^2)/(2+s^2)"]);
    assert!(out.status.success());
}

#[test]
fn analyze_constant_function_is_degenerate_but_reportable() {
    let out = nyqual(&["analyze", "--tf", "1/1"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["start"]["modulus"], "1");
    assert_eq!(report["end"]["modulus"], "1");
    assert_eq!(report["deviation"]["low"]["degenerate_imag"], true);
    assert_eq!(report["deviation"]["low"]["degenerate_modulus"], true);
}

#[test]
fn analyze_output_is_deterministic() {
    let a = nyqual(&["analyze", "--tf", CASE_1]);
    let b = nyqual(&["analyze", "--tf", CASE_1]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_method_selection() {
    let out = nyqual(&["analyze", "--tf", CASE_1, "--method", "series-division"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["deviation"]["method"], "series-division");
    assert_eq!(report["deviation"]["low"]["values"][2], "4");

    let out = nyqual(&["analyze", "--tf", CASE_1, "--method", "odd-recursion"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nyqual(&["analyze", "--tf", CASE_1, "--method", "unknown"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_order_override_truncates_tables() {
    let out = nyqual(&["analyze", "--tf", CASE_1, "--order", "3"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["deviation"]["order"], 3);
    assert_eq!(report["deviation"]["low"]["values"].as_array().unwrap().len(), 3);
    // The first-nonzero bookkeeping stays intact regardless of truncation.
    assert_eq!(report["deviation"]["low"]["first_nonzero_odd"], 3);
    assert_eq!(report["deviation"]["low"]["first_nonzero_even"], 2);
}

#[test]
fn sketch_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("plot.svg");
    let csv_path = dir.path().join("samples.csv");
    let out = nyqual(&[
        "sketch",
        "--tf",
        CASE_2,
        "--out",
        svg_path.to_str().unwrap(),
        "--samples",
        csv_path.to_str().unwrap(),
        "--omega-range",
        "1e-3:1e3",
        "--samples-per-decade",
        "40",
    ]);
    assert!(out.status.success());
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("id=\"asymptote\""));
    assert!(svg.contains("id=\"crossing-0\""));
    assert!(svg.contains("id=\"tangent-start\""));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("omega,re,im,modulus,phase_unwrapped"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("1.0"), "first sample row: {first}");
}

#[test]
fn sketch_unwritable_output_exits_4() {
    let out = nyqual(&[
        "sketch",
        "--tf",
        CASE_1,
        "--out",
        "/nonexistent-dir/plot.svg",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sketch_rejects_bad_range() {
    let out = nyqual(&[
        "sketch",
        "--tf",
        CASE_1,
        "--out",
        "/tmp/unused.svg",
        "--omega-range",
        "5:1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_case_study_passes() {
    let out = nyqual(&["verify", "--tf", CASE_1]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("method-agreement"));
    assert!(text.contains("crossing-completeness"));
}

#[test]
fn verify_random_corpus_passes() {
    let out = nyqual(&["verify", "--trials", "10", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_corrupted_table_fails_with_exit_1() {
    let out = nyqual(&["verify", "--tf", CASE_1, "--corrupt-table"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL method-agreement(corrupted-table)"));
}

#[test]
fn input_document_round_trips_through_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = nyqual(&["analyze", "--tf", CASE_2]);
    let report = stdout_json(&out);
    let echoed = &report["input"];
    let path: &Path = &dir.path().join("echo.json");
    fs::write(path, serde_json::to_string(echoed).unwrap()).unwrap();
    let again = nyqual(&["analyze", "--input", path.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(stdout_json(&again)["input"], *echoed);
}
