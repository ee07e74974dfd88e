//! End-to-end tests of the `hamosc` binary: command output, file emission,
//! exit codes, and output determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Fresh scratch file path under the system temp directory.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hamosc-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

#[test]
fn check_rotation_matches_expected_verdicts() {
    let out = run(&["check", "rotation"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("problem: rotation (n = 2, t0 = 0)"));
    assert!(text.contains("T1.1   Inconclusive"));
    assert!(text.contains("T3.4   OscillatoryTrendCertified"));
    assert!(text.contains("oscillation observed: yes"));
    assert!(!text.contains("review:"));
}

#[test]
fn check_writes_verdict_json_with_documented_shape() {
    let path = scratch("rotation-verdicts.json");
    let out = run(&["check", "rotation", "--json", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["problem"], "rotation");
    let criteria = doc["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    for c in criteria {
        assert!(c["id"].is_string());
        assert!(c["status"].is_string());
        assert!(c["hypotheses"].is_array());
        assert!(c["traces"].is_array());
    }
    assert_eq!(criteria[0]["id"], "T1.1");
    assert_eq!(criteria[0]["status"], "Inconclusive");
    let sim = &doc["simulation"];
    assert_eq!(sim["horizon"], 200.0);
    assert!(sim["zeros"].as_array().unwrap().len() >= 2);
}

#[test]
fn unknown_problem_reference_exits_two() {
    let out = run(&["check", "no-such-problem"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("catalog list"));
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["check", "rotation", "--bogus"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn malformed_problem_file_exits_two() {
    let path = scratch("broken.json");
    fs::write(&path, "{\"n\": 1").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn catalog_list_covers_the_demo_set() {
    let out = run(&["catalog", "list"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().count() >= 8);
    for id in ["rotation", "degenerate-drift", "hyperbolic-control", "zero-column-sums"] {
        assert!(text.contains(id), "catalog list is missing {id}");
    }
}

#[test]
fn catalog_show_unknown_exits_two() {
    let out = run(&["catalog", "show", "nope"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn catalog_show_round_trips_into_check() {
    let out = run(&["catalog", "show", "harmonic"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let json_start = text.find('{').expect("show prints the problem document");
    let path = scratch("harmonic-roundtrip.json");
    fs::write(&path, &text[json_start..]).unwrap();

    let check = run(&["check", path.to_str().unwrap()]);
    assert_eq!(exit_code(&check), 0, "stderr: {}", stderr(&check));
    assert!(stdout(&check).contains("T1.1   OscillatoryTrendCertified"));
}

#[test]
fn simulate_prints_zero_brackets() {
    let out = run(&["simulate", "harmonic", "--horizon", "10"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("determinant zeros (3):"));
    assert!(text.contains("t = 1.570796"));
    assert!(text.contains("bracket width"));
}

#[test]
fn simulate_writes_csv_trajectory() {
    let path = scratch("harmonic.csv");
    let out = run(&[
        "simulate",
        "harmonic",
        "--horizon",
        "10",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,re_phi_00,im_phi_00,re_det,im_det");
    assert!(lines.count() > 10);
}

#[test]
fn simulate_rejects_non_hermitian_y0() {
    let path = scratch("bad-y0.json");
    fs::write(
        &path,
        r#"{"entries": [[{"re": "0"}, {"re": "1"}], [{"re": "0"}, {"re": "0"}]]}"#,
    )
    .unwrap();
    let out = run(&["simulate", "rotation", "--y0-file", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("Hermitian"));
}

#[test]
fn simulate_accepts_hermitian_y0() {
    let path = scratch("good-y0.json");
    fs::write(
        &path,
        r#"{"entries": [[{"re": "2"}, {"re": "1"}], [{"re": "1"}, {"re": "3"}]], "flags": ["hermitian", "real"]}"#,
    )
    .unwrap();
    let out = run(&[
        "simulate",
        "rotation",
        "--horizon",
        "10",
        "--y0-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("determinant zeros"));
}

#[test]
fn blowing_up_coefficient_exits_three() {
    let path = scratch("singular-coefficient.json");
    fs::write(
        &path,
        r#"{
  "n": 1, "t0": 0.0, "label": "finite-time-singularity",
  "A": {"entries": [[{"re": "0"}]], "flags": ["hermitian", "real"]},
  "B": {"entries": [[{"re": "1"}]], "flags": ["hermitian", "real"]},
  "C": {"entries": [[{"re": "-1/((1.9-t)^2)"}]], "flags": ["hermitian", "real"]}
}"#,
    )
    .unwrap();
    let out = run(&["simulate", path.to_str().unwrap(), "--horizon", "10"]);
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn verify_lemmas_passes_and_is_deterministic() {
    let first = run(&["verify-lemmas", "--seed", "7", "--cases", "40"]);
    let second = run(&["verify-lemmas", "--seed", "7", "--cases", "40"]);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("all 8 suites passed"));
}

#[test]
fn verify_lemmas_writes_json_reports() {
    let path = scratch("suite-reports.json");
    let out = run(&[
        "verify-lemmas",
        "--seed",
        "11",
        "--cases",
        "25",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let reports = doc.as_array().unwrap();
    assert_eq!(reports.len(), 8);
    for r in reports {
        assert_eq!(r["passed"], serde_json::json!(true));
        assert_eq!(r["cases"], 25);
        assert!(r["worst_margin"].is_number());
    }
}
