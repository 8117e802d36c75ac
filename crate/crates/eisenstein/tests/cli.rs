//! End-to-end tests of the `eisenstein` binary: output shapes, exit codes,
//! environment overrides, and determinism of the primary stream.

use std::process::{Command, Output};

use eisenstein::sim::parse_table_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eisenstein"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_the_worked_quadratic() {
    let out = run(&["classify", "--coeffs", "-16,8,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["discriminant"], "128");
    assert_eq!(v["eisenstein_primes"].as_array().unwrap().len(), 0);
    assert_eq!(v["shifted_witnesses"].as_object().unwrap().len(), 0);
    assert_eq!(v["affine_witnesses"].as_object().unwrap().len(), 0);
    assert_eq!(v["complete"], true);
}

#[test]
fn classify_reports_witnesses_with_bigints_as_strings() {
    let out = run(&["classify", "--coeffs", "2,0,0,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["eisenstein_primes"], serde_json::json!(["2"]));
    assert_eq!(v["shifted_witnesses"]["2"], "0");
    assert_eq!(v["shifted_witnesses"]["3"], "1");
    assert_eq!(v["affine_witnesses"]["2"], "shift 0");

    let out = run(&["classify", "--coeffs", "1,0,0,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["affine_witnesses"]["2"], "reciprocal");
}

#[test]
fn classify_text_format_is_human_readable() {
    let out = run(&["classify", "--coeffs", "2,0,0,1", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f = x^3 + 2"));
    assert!(text.contains("eisenstein    2"));
    assert!(text.contains("complete      true"));
}

#[test]
fn classify_usage_errors_exit_2() {
    // malformed integer
    let out = run(&["classify", "--coeffs", "1,2,bad"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an integer"));
    // zero polynomial
    let out = run(&["classify", "--coeffs", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    // degree too small for classification
    let out = run(&["classify", "--coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    // trailing zeros canonicalize away: "1,2,0" is degree 1, also an error
    let out = run(&["classify", "--coeffs", "1,2,0"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown subcommand flag
    let out = run(&["classify", "--coeffs", "1,1,1", "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_mode_exits_1_on_budget_limited_classification() {
    // x^3 + 5x + 35: the witness at 5 hides in the defect content 135, which
    // a trial bound of 2 with rho disabled cannot factor
    let starved = |strict: bool| {
        let mut cmd = bin();
        cmd.args(["classify", "--coeffs", "35,5,0,1"]);
        if strict {
            cmd.arg("--strict");
        }
        cmd.env("EISENSTEIN_TRIAL_BOUND", "2")
            .env("EISENSTEIN_RHO_ITERATION_CAP", "0")
            .output()
            .expect("binary runs")
    };
    let lax = starved(false);
    assert_eq!(lax.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&lax.stdout).unwrap();
    assert_eq!(v["complete"], false);

    let strict = starved(true);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("incomplete"));

    // the same polynomial at the default budget is complete: Eisenstein at 5
    let out = run(&["classify", "--coeffs", "35,5,0,1", "--strict"]);
    let v = stdout_json(&out);
    assert_eq!(v["complete"], true);
    assert_eq!(v["eisenstein_primes"], serde_json::json!(["5"]));
}

#[test]
fn density_emits_the_expected_enclosure() {
    let out = run(&["density", "--kind", "shifted", "--n", "3", "--tol", "1e-6"]);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "shifted");
    assert_eq!(v["n"], 3);
    assert_eq!(v["expected_count_20000"], 3353);
    let lo = v["lo"].as_f64().unwrap();
    let hi = v["hi"].as_f64().unwrap();
    assert!(lo <= hi && hi - lo <= 1e-6 * 1.01);
    assert!(lo > 0.1676 && hi < 0.1677);
}

#[test]
fn density_flag_validation_exits_2() {
    let out = run(&["density", "--kind", "sideways", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["density", "--kind", "plain", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["density", "--kind", "plain", "--n", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_refuses_unachievable_tolerance_with_exit_1() {
    let out = run(&["density", "--kind", "plain", "--n", "2", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_csv_round_trips_and_text_mirrors_the_table_layout() {
    let args = [
        "simulate", "--n", "3", "--height", "1000", "--trials", "100", "--seed", "7",
    ];
    let csv_out = run(&[&args[..], &["--format", "csv"]].concat());
    assert!(csv_out.status.success());
    let csv = String::from_utf8(csv_out.stdout).unwrap();
    let parsed = parse_table_csv(&csv).unwrap();
    assert_eq!(parsed.trials, 100);
    assert_eq!(parsed.unknowns, 0);

    let text_out = run(&[&args[..], &["--format", "text"]].concat());
    let text = String::from_utf8(text_out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("kind"));
    assert!(lines[1].starts_with("trials"));
    assert!(lines[2].starts_with("plain"));
    assert!(lines[3].starts_with("shifted"));
    assert!(lines[4].starts_with("affine"));

    let json_out = run(&args);
    let v = stdout_json(&json_out);
    assert_eq!(v["trials"], 100);
    assert_eq!(
        v["counts"]["affine"],
        serde_json::json!(parsed.counts[&eisenstein::Kind::Affine])
    );

    let bad = run(&[&args[..], &["--format", "yaml"]].concat());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_local_suite_passes_and_reports_checks() {
    let out = run(&["verify", "--suite", "local", "--pmax", "3", "--nmax", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "local");
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4); // p in {2,3} x n in {2,3}
    assert!(checks.iter().all(|c| c["passed"] == true));

    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
