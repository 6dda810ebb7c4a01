//! End-to-end checks of the `ordcut` binary: output schemas, exit-code
//! contract, and pipeline composition.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn ordcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordcut"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn step_csv(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("step.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,y").unwrap();
    for i in 1..=6 {
        writeln!(f, "{i},{}", if i <= 3 { 0.0 } else { 10.0 }).unwrap();
    }
    path
}

#[test]
fn discretize_emits_result_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = step_csv(dir.path());
    let out = ordcut(&[
        "discretize",
        "--input",
        input.to_str().unwrap(),
        "--x-col",
        "x",
        "--y-col",
        "y",
        "--k",
        "2",
        "--objective",
        "lsqm",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["objective"], "lsqm");
    assert_eq!(doc["solver"], "dp");
    assert_eq!(doc["cut_indices"][0], 3);
    assert_eq!(doc["cut_points"][0], 3.0);
    assert_eq!(doc["total_cost"], 0.0);
}

#[test]
fn discretize_brute_matches_dp_and_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = step_csv(dir.path());
    let output = dir.path().join("result.csv");
    let out = ordcut(&[
        "discretize",
        "--input",
        input.to_str().unwrap(),
        "--x-col",
        "0",
        "--y-col",
        "1",
        "--k",
        "2",
        "--objective",
        "ladm",
        "--method",
        "brute",
        "--format",
        "csv",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&output).unwrap();
    let summary = text.lines().last().unwrap();
    assert!(summary.starts_with("summary"));
    assert!(summary.ends_with(",ladm,2,brute"));
}

#[test]
fn exit_codes_follow_the_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let input = step_csv(dir.path());
    let input = input.to_str().unwrap();

    // usage: clap rejects an unknown objective
    let out = ordcut(&[
        "discretize", "--input", input, "--x-col", "x", "--y-col", "y", "--k", "2",
        "--objective", "banana",
    ]);
    assert_eq!(exit_code(&out), 2);

    // usage: k = 0
    let out = ordcut(&[
        "discretize", "--input", input, "--x-col", "x", "--y-col", "y", "--k", "0",
        "--objective", "lsqm",
    ]);
    assert_eq!(exit_code(&out), 2);

    // data: missing file
    let out = ordcut(&[
        "discretize", "--input", "/no/such/file.csv", "--x-col", "x", "--y-col", "y",
        "--k", "2", "--objective", "lsqm",
    ]);
    assert_eq!(exit_code(&out), 3);

    // data: missing column
    let out = ordcut(&[
        "discretize", "--input", input, "--x-col", "nope", "--y-col", "y", "--k", "2",
        "--objective", "lsqm",
    ]);
    assert_eq!(exit_code(&out), 3);

    // capacity: k larger than n
    let out = ordcut(&[
        "discretize", "--input", input, "--x-col", "x", "--y-col", "y", "--k", "100",
        "--objective", "lsqm",
    ]);
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn brute_force_cap_is_a_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,y").unwrap();
    for i in 1..=200 {
        writeln!(f, "{i},{}", (i * 7) % 23).unwrap();
    }
    drop(f);
    let out = ordcut(&[
        "discretize",
        "--input",
        path.to_str().unwrap(),
        "--x-col",
        "x",
        "--y-col",
        "y",
        "--k",
        "5",
        "--objective",
        "lsqm",
        "--method",
        "brute",
    ]);
    assert_eq!(exit_code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration cap"));
}

#[test]
fn curve_reports_non_increasing_costs() {
    let dir = tempfile::tempdir().unwrap();
    let input = step_csv(dir.path());
    let out = ordcut(&[
        "curve",
        "--input",
        input.to_str().unwrap(),
        "--x-col",
        "x",
        "--y-col",
        "y",
        "--k-max",
        "4",
        "--objective",
        "lsqm",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["k_max"], 4);
    let curve = doc["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 4);
    let costs: Vec<f64> = curve.iter().map(|p| p["cost"].as_f64().unwrap()).collect();
    assert!(costs.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(curve[1]["cost"], 0.0); // the step splits perfectly at k=2
}

#[test]
fn baseline_equal_frequency_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = step_csv(dir.path());
    let out = ordcut(&[
        "baseline",
        "--input",
        input.to_str().unwrap(),
        "--x-col",
        "x",
        "--y-col",
        "y",
        "--k",
        "3",
        "--method",
        "equal-frequency",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["method"], "equal_frequency");
    assert_eq!(doc["edges"][0], 2.0);
    assert_eq!(doc["edges"][1], 4.0);
}

#[test]
fn compare_scores_and_labels() {
    let out = ordcut(&["compare", "--cuts-a", "20,50", "--cuts-b", "48,60"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["score"], 0.5);
    assert_eq!(doc["band"], "Medium");
    assert_eq!(doc["tolerance"], 2.0);

    let out = ordcut(&["compare", "--cuts-a", "", "--cuts-b", ""]);
    let doc = stdout_json(&out);
    assert_eq!(doc["score"], 1.0);
    assert_eq!(doc["band"], "Very High");

    let out = ordcut(&["compare", "--cuts-a", "50", "--cuts-b", "50", "--tolerance", "-1"]);
    assert_eq!(exit_code(&out), 2);

    let out = ordcut(&["compare", "--cuts-a", "fifty", "--cuts-b", "50"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn synth_is_deterministic_and_feeds_discretize() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = ordcut(&[
            "synth",
            "--family",
            "step",
            "--n",
            "40",
            "--levels",
            "0,10",
            "--noise-sd",
            "0.5",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed, same bytes"
    );

    let out = ordcut(&[
        "discretize",
        "--input",
        a.to_str().unwrap(),
        "--x-col",
        "x",
        "--y-col",
        "y",
        "--k",
        "2",
        "--objective",
        "lsqm",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["cut_indices"][0], 20);
}

#[test]
fn synth_rejects_bad_specs_as_usage_errors() {
    let out = ordcut(&[
        "synth", "--family", "step", "--n", "10", "--levels", "5",
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = ordcut(&["synth", "--family", "linear"]);
    assert_eq!(exit_code(&out), 2);

    let out = ordcut(&[
        "synth", "--family", "mixed", "--segments", "const:1:5,ramp:1:0:5", "--n", "11",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn mixed_synth_derives_n_from_segments() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.csv");
    let out = ordcut(&[
        "synth",
        "--family",
        "mixed",
        "--segments",
        "const:0:10,ramp:1:-5:10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 21); // header + 20 points
}

#[test]
fn oracle_check_passes_on_random_series() {
    let out = ordcut(&[
        "oracle-check", "--n", "9", "--k", "3", "--trials", "25", "--seed", "5",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["trials"], 25);
    assert_eq!(doc["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn oracle_check_capacity_error_for_huge_enumerations() {
    let out = ordcut(&[
        "oracle-check", "--n", "200", "--k", "8", "--trials", "1",
    ]);
    assert_eq!(exit_code(&out), 4);
}
