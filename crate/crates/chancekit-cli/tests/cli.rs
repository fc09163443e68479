use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chancekit"))
        .args(args)
        .output()
        .expect("spawn chancekit")
}

/// Run a command expected to succeed and return the parsed result after
/// checking the envelope: schema tag, kind, and a well-formed input hash.
fn run_ok(args: &[&str], kind: &str) -> Value {
    let out = run(args);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "command {args:?} failed\nstdout: {stdout}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(v["schema"], "chancekit-output/1");
    assert_eq!(v["kind"], kind);
    // commands with no input file report a null hash
    if let Some(hash) = v["provenance"]["input_sha256"].as_str() {
        assert_eq!(hash.len(), 64);
        assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    }
    v["payload"].clone()
}

fn run_err(args: &[&str], code: i32) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "command {args:?}: wrong exit code, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty(), "error path must not print a result");
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");
    stderr
}

#[test]
fn board_winprob_toy() {
    let p = run_ok(
        &["board", "winprob", "--board", &fixture("toy.json"), "--exact"],
        "board.winprob",
    );
    assert_eq!(p["win_prob"], "11/20");
    assert_eq!(p["decimal"], "0.55");
}

#[test]
fn board_winprob_interval() {
    use chancekit::Rational;
    let p = run_ok(
        &["board", "winprob", "--board", &fixture("toy.json"), "--eps", "1/1000"],
        "board.winprob",
    );
    let lo: Rational = p["lower"].as_str().unwrap().parse().unwrap();
    let hi: Rational = p["upper"].as_str().unwrap().parse().unwrap();
    let exact: Rational = "11/20".parse().unwrap();
    let eps: Rational = "1/1000".parse().unwrap();
    assert!(lo <= exact && exact <= hi);
    assert!(&hi - &lo <= eps);
}

#[test]
fn board_pgf_toy() {
    let p = run_ok(
        &["board", "pgf", "--board", &fixture("toy.json")],
        "board.pgf",
    );
    // t^3 (1 + t) / (2 (4 - 2t - t^2)) in the canonical normalization:
    // integer primitive denominator with positive leading coefficient.
    assert_eq!(p["num"], serde_json::json!(["0", "0", "0", "-1/2", "-1/2"]));
    assert_eq!(p["den"], serde_json::json!(["-4", "2", "1"]));
}

#[test]
fn board_moments_toy() {
    let p = run_ok(
        &["board", "moments", "--board", &fixture("toy.json"), "--moment-order", "3"],
        "board.moments",
    );
    assert_eq!(p["expectation"]["exact"], "15/2");
    assert_eq!(p["variance"]["exact"], "89/4");
    assert!(p["standard_deviation"]
        .as_str()
        .unwrap()
        .starts_with("4.716990566"));
    assert!(p["skewness"].as_str().unwrap().starts_with("2.000894"));
    assert_eq!(p["kurtosis"], Value::Null);
}

#[test]
fn pile_moments_linear_growth() {
    let p = run_ok(
        &["pile", "moments", "--die", &fixture("fair12.json"), "--order", "1"],
        "pile.moments",
    );
    assert_eq!(p["poly"], serde_json::json!(["2/9", "2/3"]));
    assert_eq!(p["rendered"], "2/3 n + 2/9");
}

#[test]
fn pile_winprob_small_goal() {
    let p = run_ok(
        &["pile", "winprob", "--die", &fixture("fair12.json"), "--goal", "4"],
        "pile.winprob",
    );
    assert_eq!(p["win_prob"], "47/64");
    assert_eq!(p["f"], "15/32");
}

#[test]
fn guess_cfinite_fibonacci() {
    let p = run_ok(
        &["guess", "cfinite", "--data", &fixture("fib.json")],
        "guess.cfinite",
    );
    assert_eq!(p["order"], 2);
    assert_eq!(p["coeffs"], serde_json::json!(["1", "1"]));
    assert_eq!(p["rendered"], "a(n) = a(n-1) + a(n-2)");
}

#[test]
fn guess_precursive_catalan() {
    let p = run_ok(
        &["guess", "precursive", "--data", &fixture("catalan.json")],
        "guess.precursive",
    );
    assert_eq!(p["order"], 1);
    assert_eq!(p["rendered"], "(n + 1) a(n) - (4 n - 2) a(n-1) = 0");
}

#[test]
fn guess_algebraic_catalan() {
    let p = run_ok(
        &["guess", "algebraic", "--data", &fixture("catalan.json")],
        "guess.algebraic",
    );
    assert_eq!(p["rendered"], "t*f^2 - f + 1");
    assert_eq!(
        p["triples"],
        serde_json::json!([[0, 0, "1"], [1, 0, "-1"], [2, 1, "1"]])
    );
}

#[test]
fn ruin_moment_poly_golden_ratio_mean() {
    let p = run_ok(
        &["ruin", "moment-poly", "--die", &fixture("minus1plus2_fair.json"), "--order", "1"],
        "ruin.moment_poly",
    );
    assert_eq!(p["annihilating_poly"], serde_json::json!(["-4", "-2", "1"]));
    assert_eq!(p["rendered"], "x^2 - 2 x - 4");
    let root: f64 = p["root_decimal"].as_str().unwrap().parse().unwrap();
    assert!((root - (1.0 + 5.0_f64.sqrt())).abs() < 1e-9);
}

#[test]
fn ruin_equation_has_exact_series_prefix() {
    let p = run_ok(
        &["ruin", "equation", "--die", &fixture("prop16.json")],
        "ruin.equation",
    );
    assert_eq!(p["drift"], "positive");
    // one step up with probability 1/4 + 3/8
    assert_eq!(p["series_prefix"][1], "5/8");
    let triples = p["triples"].as_array().unwrap();
    assert!(triples.contains(&serde_json::json!([6, 3, "1"])));
}

#[test]
fn ruin_truncate_conserves_mass() {
    let p = run_ok(
        &["ruin", "truncate", "--die", &fixture("fair_pm1.json"), "--goal", "2", "--terms", "6"],
        "ruin.truncate",
    );
    assert_eq!(p["captured_mass"]["exact"], "29/64");
    assert_eq!(p["residual_mass"]["exact"], "35/64");
    assert_eq!(p["conditional_mean"]["exact"], "94/29");
    assert_eq!(p["coeffs"][2], "1/4");
    assert_eq!(p["coeffs"][4], "1/8");
    assert_eq!(p["coeffs"][6], "5/64");
}

#[test]
fn ruin_reach_matches_moment_poly_root() {
    let p = run_ok(
        &["ruin", "reach", "--die", &fixture("minus1plus2_fair.json"), "--goal", "1"],
        "ruin.reach",
    );
    assert_eq!(p["kind"], "numeric");
    let value = p["expectation"].as_f64().unwrap();
    let bound = p["error_bound"].as_f64().unwrap();
    assert!((value - (1.0 + 5.0_f64.sqrt())).abs() <= bound + 1e-12);
}

#[test]
fn ruin_verify_fixtures_single() {
    let p = run_ok(
        &["ruin", "verify-fixtures", "--fixture", "prop7"],
        "ruin.verify_fixtures",
    );
    assert_eq!(p["all_ok"], true);
    let report = &p["reports"][0];
    assert_eq!(report["fixture"], "prop7");
    assert!(report["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn simulate_board_is_deterministic() {
    let args = [
        "simulate", "board", "--board", &fixture("toy.json"),
        "--trials", "5000", "--seed", "11", "--two-player",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rate = v["payload"]["win_rate"].as_f64().unwrap();
    // exact value 11/20; 4 standard errors at 5000 trials is about 0.028
    assert!((rate - 0.55).abs() < 0.03);
}

#[test]
fn simulate_walk_tracks_exact_mean() {
    let p = run_ok(
        &[
            "simulate", "walk", "--die", &fixture("minus1plus2_fair.json"),
            "--goal", "1", "--trials", "20000", "--seed", "3", "--cap", "5000",
        ],
        "simulate.walk",
    );
    let mean = p["mean"].as_f64().unwrap();
    let se = p["std_error"].as_f64().unwrap();
    assert!((mean - (1.0 + 5.0_f64.sqrt())).abs() < 4.0 * se);
    assert_eq!(p["censored"], 0);
}

#[test]
fn missing_file_is_a_validation_error() {
    let msg = run_err(&["board", "pgf", "--board", "/nonexistent/board.json"], 2);
    assert!(msg.contains("board.json"));
}

#[test]
fn zero_denominator_is_a_validation_error() {
    let dir = std::env::temp_dir().join("chancekit-cli-test-zero-den");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("die.json");
    std::fs::write(&path, r#"{"faces":[{"step":1,"prob":"1/0"}]}"#).unwrap();
    let msg = run_err(&["pile", "moments", "--die", path.to_str().unwrap()], 2);
    assert!(msg.contains("zero denominator"));
}

#[test]
fn bad_probability_sum_is_a_validation_error() {
    let dir = std::env::temp_dir().join("chancekit-cli-test-bad-sum");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("die.json");
    std::fs::write(
        &path,
        r#"{"faces":[{"step":1,"prob":"1/3"},{"step":2,"prob":"1/3"}]}"#,
    )
    .unwrap();
    let msg = run_err(&["pile", "moments", "--die", path.to_str().unwrap()], 2);
    assert!(msg.contains("sum to 2/3"));
}

#[test]
fn state_out_of_range_is_a_validation_error() {
    let msg = run_err(
        &["board", "pgf", "--board", &fixture("toy.json"), "--state", "99"],
        2,
    );
    assert!(msg.contains("out of range"));
}

#[test]
fn zero_drift_reach_is_a_computation_error() {
    let msg = run_err(
        &["ruin", "reach", "--die", &fixture("fair_pm1.json"), "--goal", "3"],
        3,
    );
    assert!(msg.contains("zero drift"));
}

#[test]
fn unknown_fixture_name_is_a_validation_error() {
    let msg = run_err(&["ruin", "verify-fixtures", "--fixture", "prop9"], 2);
    assert!(msg.contains("prop9"));
}
