use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIGURE_EIGHT: &str = r#"{
  "generators": [
    {"name": "a", "grading": "0"},
    {"name": "c", "grading": "2"},
    {"name": "b", "grading": "-1"}
  ],
  "differential": {"b": [{"gen": "c", "upow": 2}]},
  "iota": {
    "a": [{"gen": "a", "upow": 0}, {"gen": "c", "upow": 1}],
    "b": [{"gen": "b", "upow": 0}],
    "c": [{"gen": "c", "upow": 0}]
  }
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cablecalc"))
        .args(args)
        .env("CABLECALC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    // errors are reported on stderr
    let stream = if out.status.success() {
        &out.stdout
    } else {
        &out.stderr
    };
    let value = serde_json::from_slice(stream)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(stream)));
    (out.status.code().unwrap(), value)
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn lens_d_single_label() {
    let out = run(&["lens", "d", "5", "2", "--spinc", "0"]);
    assert!(out.status.success());
    let (code, v) = json(&["lens", "d", "3", "1", "--spinc", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["version"], 1);
    assert!(v.to_string().contains("1/2"), "{v}");
}

#[test]
fn torus_vs_json() {
    let (code, v) = json(&["torus", "vs", "3", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["v_seq"], serde_json::json!([2, 1, 1, 1, 0]));
}

#[test]
fn complex_invariants_from_file() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "fig8.json", FIGURE_EIGHT);
    let (code, v) = json(&["complex", "invariants", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["d"], "0/1");
    assert_eq!(v["results"]["d_lower"], "-2/1");
    assert_eq!(v["results"]["d_upper"], "0/1");
    let (code, oracle) = json(&[
        "complex",
        "oracle",
        path.to_str().unwrap(),
        "--truncation",
        "8",
    ]);
    assert_eq!(code, 0);
    assert_eq!(oracle["results"], v["results"]);
}

#[test]
fn complex_shift_and_tensor() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "fig8.json", FIGURE_EIGHT);
    let p = path.to_str().unwrap();
    let (code, shifted) = json(&["complex", "shift", p, "2"]);
    assert_eq!(code, 0);
    let shifted_path = write(&dir, "shifted.json", &shifted["complex"].to_string());
    let (_, v) = json(&["complex", "invariants", shifted_path.to_str().unwrap()]);
    assert_eq!(v["results"]["d_lower"], "0/1");
    let (code, t) = json(&["complex", "tensor", p, p]);
    assert_eq!(code, 0, "{t}");
}

#[test]
fn omitted_iota_entries_are_zero() {
    let dir = TempDir::new().unwrap();
    let bare = r#"{"generators":[{"name":"a","grading":"0"}],"differential":{},"iota":{}}"#;
    let path = write(&dir, "bare.json", bare);
    assert_eq!(
        run(&["complex", "validate", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_complex_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = FIGURE_EIGHT.replace("\"upow\": 2", "\"upow\": 1");
    let path = write(&dir, "bad.json", &bad);
    let out = run(&["complex", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "broken.json", "{\"generators\": [");
    let (code, v) = json(&["complex", "invariants", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn bounds_for_example_companion() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "k.json",
        r#"{"base":{"type":"custom","v_lower":3,"v_upper":0,"v_seq":[0]}}"#,
    );
    let (code, v) = json(&[
        "bounds",
        "--spec",
        spec.to_str().unwrap(),
        "--stage",
        "3,2",
        "--v0",
        "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["maximum"], 6);
    let names: Vec<_> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].clone())
        .collect();
    assert!(names.contains(&Value::from("HLP")));
}

#[test]
fn cable_v0_and_insufficient_data() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "k.json",
        r#"{"base":{"type":"custom","v_lower":1,"v_upper":0},"stages":[[3,1],[5,1]]}"#,
    );
    let out = run(&["cable", "v0", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("obstructed"));

    let even = write(
        &dir,
        "even.json",
        r#"{"base":{"type":"custom","v_lower":1,"v_upper":0},"stages":[[2,1]]}"#,
    );
    let (code, v) = json(&["cable", "v0", "--spec", even.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("v_seq"), "{v}");
}

#[test]
fn non_coprime_exits_2() {
    assert_eq!(run(&["lens", "d", "4", "2"]).status.code(), Some(2));
    let (code, v) = json(&["torus", "vs", "6", "9"]);
    assert_eq!(code, 2);
    assert_eq!(v["version"], 1);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["lens", "d", "5"]).status.code(), Some(1));
    assert_eq!(
        run(&["complex", "invariants", "/nonexistent/file.json"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("vs.json");
    let out = run(&[
        "--json",
        "--out",
        target.to_str().unwrap(),
        "torus",
        "vs",
        "2",
        "3",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["v_seq"], serde_json::json!([1, 0]));
}

#[test]
fn verify_subcommands_pass() {
    assert!(run(&["verify", "identity13", "--max", "21"])
        .status
        .success());
    assert!(run(&["verify", "moser", "--max", "10"]).status.success());
    let (code, v) = json(&["verify", "engine", "--n", "40", "--seed", "3"]);
    assert_eq!(code, 0, "{v}");
}
