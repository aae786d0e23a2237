use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_origami");

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(name: &str, instance: &Value) {
    let s = schema(name);
    if let Err(errors) = s.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} output violates schema: {msgs:?}");
    };
}

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(BIN).arg("--cache-dir").arg(cache).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_flagship() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["analyze", path(&fixture("flagship.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("analyze", &v);
    assert_eq!(v["stratum_name"], "H(2,2,2)");
    assert_eq!(v["genus"], 4);
    assert_eq!(v["veech_full"], true);
    assert_eq!(v["orbit_size"], 1);
}

#[test]
fn monodromy_flagship() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["monodromy", path(&fixture("flagship.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("monodromy", &v);
    assert_eq!(v["zero_holonomy_rank"], 6);
    assert_eq!(v["rank_t6_minus_identity"], 1);
}

#[test]
fn certify_flagship() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["certify", path(&fixture("flagship.json"))]);
    let v = json(&out);
    assert_valid("certify", &v);
    assert_eq!(v["density"]["verdict"], true);
    assert_eq!(v["arithmeticity"]["verdict"], true);
    assert_eq!(v["congruence_mod2"]["lagrange_identity"], true);
    assert_eq!(v["congruence_mod2"]["ambient_order"], 1_451_520);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn certify_undecided_word_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["certify", "--density", "--pinching-word", "Tt", path(&fixture("flagship.json"))],
    );
    assert_eq!(out.status.code(), Some(5));
    let v = json(&out);
    assert_valid("certify", &v);
    assert_eq!(v["density"]["verdict"], false);
}

#[test]
fn lyapunov_and_cache_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("flagship.json");
    let args = ["lyapunov", "--iters", "20000", "--trials", "4", path(&input)];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_valid("lyapunov", &json(&first));
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = run(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let fresh = Command::new(BIN).arg("--no-cache").args(args).output().unwrap();
    assert_eq!(first.stdout, fresh.stdout);

    let other_seed = run(dir.path(), &["lyapunov", "--iters", "20000", "--trials", "4", "--seed", "9", path(&input)]);
    assert_ne!(first.stdout, other_seed.stdout);
}

#[test]
fn cache_keyed_by_content_not_filename() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("renamed.json");
    std::fs::copy(fixture("flagship.json"), &copy).unwrap();
    let cache = dir.path().join("cache");
    let a = run(&cache, &["analyze", path(&fixture("flagship.json"))]);
    let b = run(&cache, &["analyze", path(&copy)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn census_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("census.json");
    let out = run(dir.path(), &["census", "--max-squares", "4", "--out", path(&out_file)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("census", &v);
    assert_eq!(v["count"], 1);
    assert_eq!(std::fs::read(&out_file).unwrap(), out.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let garbage = write("garbage.json", "{ not json");
    let cycles = write("cycles.json", r#"{"name":"x","h":"(1,2","v":"(1)"}"#);
    let split = write("split.json", r#"{"name":"x","h":"(1,2)","v":"(3,4)","n":4}"#);
    let cache = dir.path().join("cache");

    assert_eq!(run(&cache, &["analyze", path(&garbage)]).status.code(), Some(2));
    assert_eq!(run(&cache, &["analyze", path(&cycles)]).status.code(), Some(2));
    assert_eq!(run(&cache, &["analyze", path(&split)]).status.code(), Some(3));
    let l = fixture("l_shape.json");
    assert_eq!(run(&cache, &["analyze", path(&l)]).status.code(), Some(0));
    assert_eq!(run(&cache, &["monodromy", path(&l)]).status.code(), Some(4));
    assert_eq!(run(&cache, &["certify", path(&l)]).status.code(), Some(4));
    assert_eq!(run(&cache, &["lyapunov", path(&l)]).status.code(), Some(4));
    assert_eq!(run(&cache, &["census", "--max-squares", "10"]).status.code(), Some(6));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&cache, &["analyze", path(&missing)]).status.code(), Some(2));
}

#[test]
fn help_documents_exit_codes() {
    let out = Command::new(BIN).arg("--help").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for code in ["0 ", "2 ", "3 ", "4 ", "5 ", "6 "] {
        assert!(text.contains(&format!("  {code}")), "help lacks exit code {code}");
    }
}

#[test]
fn fixtures_match_input_schema() {
    for name in ["flagship.json", "torus.json", "l_shape.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        assert_valid("input", &v);
    }
}
