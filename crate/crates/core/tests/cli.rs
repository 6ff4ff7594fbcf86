use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn compack(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compack")).arg("--out").arg(out).args(args).env_remove("COMPACK_DIGITS").env_remove("COMPACK_FORMAT").output().unwrap()
}

fn report(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn enumerate_s_writes_jsonl_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    report(&compack(dir.path(), &["enumerate-s"]));
    let text = std::fs::read_to_string(dir.path().join("s_tuples.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 55);
    report(&compack(dir.path(), &["--format", "csv", "enumerate-s"]));
    let csv = std::fs::read_to_string(dir.path().join("s_tuples.csv")).unwrap();
    assert_eq!(csv.lines().count(), 56);
}

#[test]
fn intercepts_of_examples() {
    let dir = tempfile::tempdir().unwrap();
    let v = report(&compack(dir.path(), &["--digits", "40", "intercepts", "--pairs", "examples"]));
    assert_eq!(v["summary"]["found_pairs"], 5);
    let cat = std::fs::read_to_string(dir.path().join("catalog.jsonl")).unwrap();
    assert_eq!(cat.lines().count(), 5);
    assert_eq!(std::fs::read_to_string(dir.path().join("points.jsonl")).unwrap().lines().count(), 5);
}

#[test]
fn grow_verify_render() {
    let dir = tempfile::tempdir().unwrap();
    report(&compack(dir.path(), &["--digits", "40", "grow", "--example", "example-1", "--half", "2.0"]));
    let packing = dir.path().join("packing.json");
    assert!(packing.exists());
    let p = packing.to_str().unwrap();
    let v = report(&compack(dir.path(), &["--digits", "40", "verify", "--packing", p]));
    assert!(dir.path().join("verification.json").exists());
    assert_eq!(v["violations"].as_array().map_or(0, |a| a.len()), 0);
    report(&compack(dir.path(), &["render", "--packing", p, "--tangency"]));
    let svg = std::fs::read_to_string(dir.path().join("packing.svg")).unwrap();
    assert!(svg.contains("<circle"));
}

#[test]
fn gamma_search_finds_known_tuple() {
    let dir = tempfile::tempdir().unwrap();
    report(&compack(dir.path(), &["gamma-search", "--example", "example-2"]));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("gamma.json")).unwrap()).unwrap();
    assert_eq!(g["result"]["outcome"], "found");
    let sols = g["result"]["solutions"].as_array().unwrap();
    assert!(sols.iter().any(|s| s["xi"] == serde_json::json!([0, 2, 2, 0, 0, 4])));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = compack(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "usage");

    let o = compack(dir.path(), &["--digits", "10", "enumerate-s"]);
    assert_eq!(o.status.code(), Some(2));

    let o = compack(dir.path(), &["--budget-nodes", "10", "gamma-search", "--example", "example-1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_kind(&o), "resource");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"radii":{"r":"0.5","s":"0.25"},"circles":[{"x":"0","y":"0","label":"large"},{"x":"1.5","y":"0","label":"large"}]}"#).unwrap();
    let o = verify_file(dir.path(), &bad);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_kind(&o), "verification");
}

fn verify_file(dir: &Path, packing: &Path) -> Output {
    compack(dir, &["verify", "--packing", packing.to_str().unwrap()])
}

#[test]
fn env_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_compack")).args(["enumerate-s"]).env("COMPACK_OUT", dir.path()).env("COMPACK_FORMAT", "csv").output().unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("s_tuples.csv").exists());
}
