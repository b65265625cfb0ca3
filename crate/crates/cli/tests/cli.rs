use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn concc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concc")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("concc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timings);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn tower_file(name: &str) -> (PathBuf, Value) {
    let path = scratch(name);
    let out = concc(&[
        "tower", "build", "--classes", "3", "--stages", "50", "--enum", "shortlex", "--seedless", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read(&path);
    (path, v)
}

fn embedded_tower(run: &mut Value) -> &mut Value {
    let checks = run["checks"].as_array_mut().unwrap();
    let c = checks.iter_mut().find(|c| c["certificate"]["kind"] == "tower").unwrap();
    &mut c["certificate"]["report"]
}

fn verify(path: &Path) -> (Option<i32>, Value) {
    let out = concc(&["tower", "verify", path.to_str().unwrap()]);
    (out.status.code(), stdout_report(&out))
}

#[test]
fn klein_bottle_certificate() {
    let out = concc(&["check", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_report(&out);
    assert_eq!(r["status"], "pass");
    let cert = &r["checks"][0]["certificate"];
    assert_eq!(cert["kind"], "non-conjugacy");
    assert_eq!(cert["record"]["pair"], serde_json::json!(["t", "t^-1"]));
}

#[test]
fn bs12_checks_pass() {
    let out = concc(&["check", "bs12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_report(&out)["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn tower_round_trip() {
    let (path, run) = tower_file("fresh.json");
    assert_eq!(run["status"], "pass");
    assert_eq!(run["seed"], Value::Null);
    let (code, rep) = verify(&path);
    assert_eq!(code, Some(0), "{rep}");

    // the bare tower certificate verifies on its own
    let mut run = run;
    let bare = scratch("bare.json");
    std::fs::write(&bare, embedded_tower(&mut run).to_string()).unwrap();
    assert_eq!(verify(&bare).0, Some(0));
}

#[test]
fn tampered_conjugator_names_the_stage() {
    let (_, mut run) = tower_file("tamper-src.json");
    let tower = embedded_tower(&mut run);
    let stages = tower["stages"].as_array_mut().unwrap();
    let s = stages.iter_mut().find(|s| s["skipped"].is_object() && s["index"].as_u64() > Some(3)).unwrap();
    let index = s["index"].as_u64().unwrap();
    s["skipped"]["witness"] = Value::from("x1 x2");
    let path = scratch("tampered.json");
    std::fs::write(&path, run.to_string()).unwrap();
    let (code, rep) = verify(&path);
    assert_eq!(code, Some(2));
    let detail = rep["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains(&format!("stage {index}: conjugator does not verify")), "{detail}");
}

#[test]
fn truncated_derivation_is_reported() {
    let (_, mut run) = tower_file("trunc-src.json");
    let tower = embedded_tower(&mut run);
    let derivations = tower["independence"]["stages"].as_array_mut().unwrap();
    let last = derivations.pop().unwrap();
    let path = scratch("truncated.json");
    std::fs::write(&path, run.to_string()).unwrap();
    let (code, rep) = verify(&path);
    assert_eq!(code, Some(2));
    let detail = rep["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains(&format!("stage {}: independence: no derivation", last["stage"])), "{detail}");
}

#[test]
fn malformed_file_fails() {
    let path = scratch("garbage.json");
    std::fs::write(&path, "{\"checks\": 3").unwrap();
    assert_eq!(verify(&path).0, Some(2));
}

#[test]
fn coset_tower_keeps_t_and_inverse_apart() {
    let out = concc(&["tower", "build", "--mode", "coset", "--stages", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_report(&out);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"quotient check") && names.contains(&"t and t^-1 stay distinct"));
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let args = ["relpaths", "audit", "--seed", "11", "--instances", "300", "--regularity", "50"];
    let mut a = stdout_report(&concc(&args));
    let mut b = stdout_report(&concc(&args));
    assert_eq!(a["seed"], 11);
    strip_timings(&mut a);
    strip_timings(&mut b);
    assert_eq!(a, b);
}

#[test]
fn audit_report_replays() {
    let path = scratch("audit.json");
    let out = concc(&["relpaths", "audit", "--seed", "5", "--instances", "200", "--regularity", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(verify(&path).0, Some(0));
}

#[test]
fn unknown_when_nothing_to_replay() {
    let path = scratch("pieces.json");
    let out = concc(&["smallcanc", "pieces", "--scale", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verify(&path).0, Some(3));
}

#[test]
fn metric_failure_exits_two() {
    let out = concc(&["smallcanc", "pieces", "--relator", "a b a^-1 b^-1", "--lambda", "1/6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = concc(&["smallcanc", "pieces", "--scale", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_scale_family() {
    let out = concc(&["verify", "hyp-spec-gen", "--scale", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = concc(&["verify", "hyp-spec-gen", "--scale", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["tower", "build", "--bogus"][..],
        &["tower", "build", "--mode", "coset", "--classes", "3"],
        &["tower", "build", "--enum", "lex"],
        &["verify", "hyp-spec-gen", "--scale", "0"],
        &["smallcanc", "pieces", "--lambda", "3/2", "--scale", "2"],
        &["smallcanc", "pieces"],
        &["frobnicate"],
    ] {
        let out = concc(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(concc(&["--help"]).status.code(), Some(0));
}
