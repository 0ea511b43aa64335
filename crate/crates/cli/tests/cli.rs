use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn lencalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lencalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn put(&self, name: &str, v: &Value) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn put_raw(&self, name: &str, s: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, s).unwrap();
        p.to_string_lossy().into_owned()
    }
}

fn one_node(kind: &str) -> Value {
    json!({"nodes": [{"id": "M", "parent": null, "kind": kind}]})
}

fn chain() -> Value {
    json!({"nodes": [
        {"id": "P", "parent": null, "kind": "dense"},
        {"id": "M", "parent": "P", "kind": "discrete"},
        {"id": "N", "parent": null, "kind": "discrete"},
    ]})
}

#[test]
fn eval_torsion_on_unit_is_zero() {
    let f = Files::new();
    let s = f.put("s.json", &one_node("discrete"));
    let l = f.put("l.json", &json!({"sigma_t": ["M"]}));
    let i = f.put("i.json", &json!("unit"));
    let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0/1");
}

#[test]
fn eval_valuative_on_a_cube() {
    let f = Files::new();
    let s = f.put("s.json", &one_node("discrete"));
    let l = f.put("l.json", &json!({"sigma_t": ["(0)"], "sigma_v": [{"id": "M", "lambda": "1"}]}));
    let i = f.put("i.json", &json!({"components": [{"id": "M", "gamma": "3", "inclusive": true}]}));
    let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "3/1");
    let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i, "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, json!({"value": "3/1"}));
}

#[test]
fn eval_on_the_integers() {
    let f = Files::new();
    let l = f.put("l.json", &json!({"z_weights": [{"prime": 2, "value": "1/2"}], "default": "1"}));
    let i = f.put("i.json", &json!({"generator": 12}));
    let o = lencalc(&["eval", "--lengthfn", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2/1");
    let zero = f.put("z.json", &json!("zero"));
    assert_eq!(stdout(&lencalc(&["eval", "--lengthfn", &l, "--ideal", &zero])).trim(), "inf");
}

#[test]
fn malformed_ideal_exits_2() {
    let f = Files::new();
    let s = f.put("s.json", &one_node("discrete"));
    let l = f.put("l.json", &json!({"sigma_t": ["M"]}));
    for (k, bad) in ["{\"components\": [", "{\"components\": [{\"id\": \"M\"}]}", "\"half\""].iter().enumerate() {
        let i = f.put_raw(&format!("i{k}.json"), bad);
        let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn missing_flags_exit_2() {
    assert_eq!(lencalc(&["eval"]).status.code(), Some(2));
    assert_eq!(lencalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lencalc(&["--help"]).status.code(), Some(0));
}

#[test]
fn rank_at_a_non_idempotent_prime_exits_3() {
    let f = Files::new();
    let s = f.put("s.json", &one_node("discrete"));
    let l = f.put("l.json", &json!({"sigma_t": ["(0)"], "sigma_r": [{"id": "M", "alpha": "1"}]}));
    let o = lencalc(&["canonicalize", "--spectrum", &s, "--lengthfn", &l]);
    assert_eq!(o.status.code(), Some(3));
    let i = f.put("i.json", &json!("unit"));
    let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_prime_in_ideal_exits_3() {
    let f = Files::new();
    let s = f.put("s.json", &one_node("discrete"));
    let l = f.put("l.json", &json!({"sigma_t": ["M"]}));
    let i = f.put("i.json", &json!({"components": [{"id": "Q", "gamma": "1", "inclusive": true}]}));
    let o = lencalc(&["eval", "--spectrum", &s, "--lengthfn", &l, "--ideal", &i]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn canonical_input_is_reproduced() {
    let f = Files::new();
    let s = f.put("s.json", &chain());
    let input = json!({
        "sigma_t": ["(0)", "P"],
        "sigma_i": [],
        "sigma_r": [],
        "sigma_v": [{"id": "N", "lambda": "2/1"}, {"id": "M", "lambda": "3/2"}],
    });
    let l = f.put("l.json", &input);
    let o = lencalc(&["canonicalize", "--spectrum", &s, "--lengthfn", &l]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, input);
}

#[test]
fn missing_layers_are_filled_in() {
    let f = Files::new();
    let s = f.put("s.json", &chain());
    let l = f.put("l.json", &json!({"sigma_v": [{"id": "M", "lambda": "1/3"}]}));
    let o = lencalc(&["canonicalize", "--spectrum", &s, "--lengthfn", &l]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_t"], json!(["(0)", "P"]));
    assert_eq!(v["sigma_v"], json!([{"id": "M", "lambda": "1/3"}]));
}

#[test]
fn spectral_system_canonicalizes_to_torsion_on_delta() {
    let f = Files::new();
    let s = f.put("s.json", &chain());
    let sys = f.put("sys.json", &json!({"spectral": ["(0)", "P", "N"]}));
    let o = lencalc(&["canonicalize", "--spectrum", &s, "--lengthfn", &sys]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_t"], json!(["(0)", "P", "N"]));
    assert_eq!(v["sigma_r"], json!([]));
    assert_eq!(v["sigma_v"], json!([]));
}

#[test]
fn scenario_exit_codes() {
    let o = lencalc(&["scenario", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lencalc(&["scenario", "grassmann", "--seed", "1", "--cases", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], json!(100));
    assert_eq!(v["failures"], json!([]));
}

#[test]
fn scenario_reports_are_deterministic() {
    let run = || {
        let o = lencalc(&["scenario", "prufer-decomp", "--seed", "7", "--cases", "20"]);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    assert_eq!(run(), run());
}
