use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn tallone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tallone")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = tallone(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn version() {
    let out = tallone(&["--version"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "tallone 1");
}

#[test]
fn check_polytope() {
    let (code, v) = run(&["check-polytope", path(&data("6d.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["delzant"], true);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 16);

    let (code, v) = run(&["check-polytope", path(&data("8d.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["delzant"], false);
}

#[test]
fn analyze_model() {
    let (code, v) = run(&["analyze-model", path(&data("circle_model.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["tall"], true);
    assert_eq!(v["xi"], serde_json::json!([1, 1]));

    let (code, v) = run(&["analyze-model", path(&data("vertex_model.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["center_exceptional"], true);
}

#[test]
fn truncate_dh() {
    let (code, v) = run(&["truncate-dh", path(&data("circle_model.json")), "--j", "1,0", "--kappa", "2"]);
    assert_eq!(code, 0);
    assert!(!v["cells"].as_array().unwrap().is_empty());

    // j must pair to one with the defining monomial
    let out = tallone(&["truncate-dh", path(&data("circle_model.json")), "--j", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn project() {
    let (code, v) = run(&["project", path(&data("6d.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["tall"], true);
    assert_eq!(v["genus"], 0);
    assert_eq!(v["skeleton"]["cells"].as_array().unwrap().len(), 16);

    let (code, v) = run(&["project", path(&data("simplex.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["tall"], false);

    assert_eq!(run(&["project", path(&data("8d.json"))]).0, 1);
    assert_eq!(run(&["project", "--relaxed", path(&data("8d.json"))]).0, 0);

    let out = tallone(&["project", "--report", path(&data("6d.json"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("160/3"), "{text}");
}

#[test]
fn check_compat() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    assert_eq!(run(&["-o", path(&bundle), "project", path(&data("6d.json"))]).0, 0);
    let (code, v) = run(&["check-compat", path(&bundle)]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert!(v.get("checkpoints").is_none());

    let (code, v) = run(&["check-compat", "--checkpoints", path(&bundle)]);
    assert_eq!(code, 0);
    assert!(!v["checkpoints"].as_array().unwrap().is_empty());
}

#[test]
fn compare() {
    let (a, b) = (data("6d_record_a.json"), data("6d_record_b.json"));
    let (code, v) = run(&["compare", path(&a), path(&a)]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "IsomorphicData");
    let (code, v) = run(&["compare", path(&a), path(&b)]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "NotIsomorphic");
}

#[test]
fn output_is_byte_deterministic() {
    let input = data("6d.json");
    let args = ["project", path(&input)];
    let first = tallone(&args).stdout;
    let again = tallone(&args).stdout;
    assert_eq!(first, again);
    assert!(first.ends_with(b"\n"));

    let one = Command::new(env!("CARGO_BIN_EXE_tallone"))
        .args(args)
        .env("TALLONE_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_tallone"))
        .args(args)
        .env("TALLONE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, first);
    assert_eq!(four.stdout, first);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = tallone(&["check-polytope", path(&data("cube.json")), "--output", path(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), tallone(&["check-polytope", path(&data("cube.json"))]).stdout);
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let bad = dir.path().join("bad.json");
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&bad, "{\"dim\": 2, \"ineqs\": [").unwrap();
    std::fs::write(&unknown, "{\"dim\": 1, \"ineqs\": [], \"colour\": 3}").unwrap();
    let missing = dir.path().join("missing.json");
    for input in [&bad, &unknown, &missing] {
        let out = tallone(&["check-polytope", path(input), "-o", path(&target)]);
        assert_eq!(out.status.code(), Some(2), "{input:?}");
        assert!(!target.exists());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(tallone(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}
