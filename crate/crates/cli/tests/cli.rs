//! Behavior tests for the command-line interface: exit codes, output
//! shapes, determinism, and the documented worked examples.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deborder"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// The instance computing x1 + x2 through factors with no entrywise limit.
const GOLDEN: &str = r#"{
  "schema_version": "1",
  "kind": "rank_one_det",
  "payload": {
    "n": 2, "r": 1, "a0": null,
    "u": {"rows": 1, "cols": 2, "entries": [["1", {"num": [[0, "1"]], "den": [[1, "1"]]}]]},
    "v": {"rows": 1, "cols": 2, "entries": [["1", {"num": [[1, "1"]], "den": [[0, "1"]]}]]}
  }
}"#;

#[test]
fn val_reports_valuation_and_limit() {
    let v = stdout_json(&run(&["val", "(eps^2-1)/eps"]));
    assert_eq!(v["val"], -1);
    assert_eq!(v["limit"], Value::Null);

    // same point written as in the projective-variety vignette
    let v = stdout_json(&run(&["val", "eps - 1/eps"]));
    assert_eq!(v["val"], -1);

    let v = stdout_json(&run(&["val", "2*eps^3"]));
    assert_eq!(v["val"], 3);
    assert_eq!(v["limit"], "0");

    let v = stdout_json(&run(&["val", "0"]));
    assert_eq!(v["val"], "+inf");
    assert_eq!(v["limit"], "0");
}

#[test]
fn val_rejects_garbage_with_exit_one() {
    let out = run(&["val", "eps +"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn deborder_golden_instance_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "golden.json", GOLDEN);
    let output = dir.path().join("out.json").to_str().unwrap().to_string();

    let out = run(&["deborder", "--input", &input, "--output", &output]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let report: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(report["dimension"], 1);
    assert_eq!(
        report["limit_poly"],
        serde_json::json!([
            {"subset": [1], "coeff": "1"},
            {"subset": [2], "coeff": "1"}
        ])
    );
    assert!(report["certificate"]["z"].is_array());

    let out = run(&["verify", &input, &output]);
    assert_eq!(out.status.code(), Some(0));

    // an exact instance verifies against itself
    let out = run(&["verify", &output, &output]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deborder_reports_missing_limit_with_exit_two() {
    // the only coefficient is det = eps * 1/eps^2 with valuation -1
    let text = r#"{
      "schema_version": "1",
      "kind": "rank_one_det",
      "payload": {
        "n": 1, "r": 1, "a0": null,
        "u": {"rows": 1, "cols": 1, "entries": [[{"num": [[1, "1"]], "den": [[0, "1"]]}]]},
        "v": {"rows": 1, "cols": 1, "entries": [[{"num": [[0, "1"]], "den": [[2, "1"]]}]]}
      }
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", text);
    let out = run(&["deborder", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("{1}"), "stderr names the subset: {stderr}");
}

#[test]
fn malformed_json_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "broken.json", "{ not json");
    let out = run(&["deborder", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "deborder",
        "--input",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_flags_corruption_with_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    let original = write(dir.path(), "orig.json", GOLDEN);
    // exact instance computing x1 + 2 x2 instead
    let corrupted = write(
        dir.path(),
        "corrupt.json",
        r#"{
          "schema_version": "1",
          "kind": "rank_one_det",
          "payload": {
            "n": 2, "r": 1, "a0": null,
            "u": {"rows": 1, "cols": 2, "entries": [["1", "1"]]},
            "v": {"rows": 1, "cols": 2, "entries": [["1", "2"]]}
          }
        }"#,
    );
    let out = run(&["verify", &original, &corrupted]);
    assert_eq!(out.status.code(), Some(5));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("{2}"), "stderr names the subset: {stderr}");
}

#[test]
fn generate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "generate",
        "--n",
        "4",
        "--r",
        "2",
        "--seed",
        "9",
        "--z-range",
        "2",
        "--mixing-steps",
        "3",
        "--with-a0",
    ];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let file: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(file["kind"], "rank_one_det");
    assert!(file["ground_truth"].is_array());
}

#[test]
fn generated_instances_deborder_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("gen.json").to_str().unwrap().to_string();
    let output = dir.path().join("deb.json").to_str().unwrap().to_string();
    let out = run(&[
        "generate", "--n", "5", "--r", "2", "--seed", "31", "--output", &input,
    ]);
    assert!(out.status.success());
    let out = run(&["deborder", "--input", &input, "--output", &output]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", &input, &output]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn minors_on_the_documented_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "m.json",
        r#"{"rows": 2, "cols": 3, "entries": [["1", "0", {"num": [[1, "1"]], "den": [[0, "1"]]}], ["0", "1", "1"]]}"#,
    );
    let out = run(&["minors", "--input", &input]);
    let table = stdout_json(&out);
    assert_eq!(table["n"], 3);
    assert_eq!(table["r"], 2);
    let values = table["values"].as_array().unwrap();
    assert_eq!(values.len(), 3);
    assert_eq!(values[0]["subset"], serde_json::json!([1, 2]));
    assert_eq!(values[0]["value"], "1");
    assert_eq!(values[1]["subset"], serde_json::json!([1, 3]));
    assert_eq!(values[1]["value"], "1");
    assert_eq!(values[2]["subset"], serde_json::json!([2, 3]));
    // -eps
    assert_eq!(values[2]["value"]["num"], serde_json::json!([[1, "-1"]]));
}

#[test]
fn minors_vignette_coordinatewise_products() {
    // the two points whose coordinatewise product approaches (0, 1, 0):
    // maximal minors of a 1x3 matrix are just its entries
    let dir = tempfile::tempdir().unwrap();
    let p1 = write(
        dir.path(),
        "p1.json",
        r#"{"rows": 1, "cols": 3, "entries": [[{"num": [[1, "1"]], "den": [[0, "1"]]}, "1", {"num": [[0, "-1"], [2, "1"]], "den": [[1, "1"]]}]]}"#,
    );
    let out = run(&["minors", "--input", &p1]);
    let table = stdout_json(&out);
    // third coordinate eps - 1/eps has no limit on its own
    assert_eq!(
        table["values"][2]["value"]["den"],
        serde_json::json!([[1, "1"]])
    );
}

#[test]
fn weight_split_toy_pair_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "pair.json",
        r#"{
          "u": {"rows": 1, "cols": 2, "entries": [["1", {"num": [[1, "1"]], "den": [[0, "1"]]}]]},
          "v": {"rows": 1, "cols": 2, "entries": [[{"num": [[0, "1"]], "den": [[1, "1"]]}, "1"]]}
        }"#,
    );
    let out = run(&["weight-split", "--input", &input]);
    let cert = stdout_json(&out);
    assert_eq!(cert["m_star"], -1);
    assert_eq!(cert["witness"], serde_json::json!([1]));
    assert_eq!(cert["z"].as_array().unwrap().len(), 2);
}

#[test]
fn pm_closure_bare_input() {
    let dir = tempfile::tempdir().unwrap();
    // the rank-one outer product of (eps, 1) and (1/eps, 1): its diagonal
    // entries both have limit 1 even though off-diagonal entries diverge
    let input = write(
        dir.path(),
        "pm.json",
        r#"{
          "A": {"rows": 2, "cols": 2, "entries": [
            ["1", {"num": [[1, "1"]], "den": [[0, "1"]]}],
            [{"num": [[0, "1"]], "den": [[1, "1"]]}, "1"]
          ]},
          "k": 1
        }"#,
    );
    let out = run(&["pm-closure", "--input", &input]);
    let report = stdout_json(&out);
    let values = report["minors"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0]["value"], "1");
    assert_eq!(values[1]["value"], "1");
    assert_eq!(report["B"]["rows"], 2);
}

#[test]
fn pm_closure_divergent_minor_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // rank one, but the second diagonal entry is 1/eps
    let input = write(
        dir.path(),
        "pm.json",
        r#"{
          "A": {"rows": 2, "cols": 2, "entries": [
            [{"num": [[1, "1"]], "den": [[0, "1"]]}, "1"],
            ["1", {"num": [[0, "1"]], "den": [[1, "1"]]}]
          ]},
          "k": 1
        }"#,
    );
    let out = run(&["pm-closure", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pm_closure_rank_mismatch_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "pm.json",
        r#"{"A": {"rows": 2, "cols": 2, "entries": [["1", "0"], ["0", "1"]]}, "k": 1}"#,
    );
    let out = run(&["pm-closure", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn size_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "golden.json", GOLDEN);
    let out = bin()
        .args(["deborder", "--input", &input])
        .env("DEBORDER_MAX_N", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["deborder", "--input", &input])
        .env("DEBORDER_MAX_N", "junk")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero_and_usage_errors_exit_one() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["generate", "--n", "3"]); // missing --r
    assert_eq!(out.status.code(), Some(1));
}
