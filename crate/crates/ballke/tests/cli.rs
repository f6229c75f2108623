use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ballke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballke"))
        .args(args)
        .env_remove("BALLKE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ballke(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn verify_case_two_example() {
    let (code, v) = json(&["verify", "--m", "3", "--t", "1,1"]);
    assert_eq!(code, 0);
    let keys: std::collections::BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let expected = ["tool_version", "command", "inputs", "results", "overall_pass", "wall_time_ms"];
    assert_eq!(keys, expected.into_iter().collect());
    let r = &v["results"][0];
    assert_eq!(r["observed"]["degree"], 4);
    assert_eq!(r["observed"]["coeff"], "2916/1");
    assert_eq!(r["lemma"]["lhs"], "108/1");
    assert_eq!(r["lemma"]["rhs"], "60/1");
    assert_eq!(v["overall_pass"], true);
}

#[test]
fn verify_trivial_group_reports_zero() {
    let out = ballke(&["verify", "--m", "1", "--t", "0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("zero to D"));
}

#[test]
fn invalid_input_exits_with_two() {
    let out = ballke(&["verify", "--m", "4", "--t", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd(2,4)≠1: not fixed point free"));
    for args in [
        &["verify", "--m", "3"][..],
        &["verify", "--m", "3", "--t", "x,1"],
        &["verify", "--m", "3", "--t", "1"],
        &["verify", "--m", "0", "--t", "1,1"],
        &["verify", "--m", "3", "--t", "1,1", "--order", "-4"],
        &["scan", "--max-m", "3", "--max-n", "1"],
        &["lemmas", "--which", "nope"],
        &["numeric", "--m", "3", "--t", "1,1", "--radius", "1.5"],
        &["numeric", "--m", "3", "--t", "1,1", "--grid", "0"],
        &["frobnicate"],
    ] {
        let out = ballke(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn too_small_fixed_order_fails_with_one() {
    let (code, v) = json(&["verify", "--m", "7", "--t", "1,4", "--order", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["overall_pass"], false);
}

#[test]
fn scan_examples() {
    let (code, v) = json(&["scan", "--max-m", "2", "--max-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    let (code, v) = json(&["scan", "--max-m", "1", "--max-n", "3"]);
    assert_eq!(code, 0);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["case"] == "Trivial"));
}

#[test]
fn scan_output_is_independent_of_jobs() {
    let (c1, a) = json(&["scan", "--max-m", "6", "--max-n", "3", "--jobs", "1"]);
    let (c2, mut b) = json(&["scan", "--max-m", "6", "--max-n", "3", "--jobs", "5"]);
    assert_eq!((c1, c2), (0, 0));
    b["inputs"]["jobs"] = a["inputs"]["jobs"].clone();
    assert_eq!(without_time(a), without_time(b));
}

#[test]
fn full_desk_scan_passes() {
    let (code, v) = json(&["scan", "--max-m", "8", "--max-n", "4", "--jobs", "4"]);
    assert_eq!(code, 0);
    let cases: std::collections::BTreeSet<&str> =
        v["results"].as_array().unwrap().iter().map(|r| r["case"].as_str().unwrap()).collect();
    for c in ["I", "II", "IIIa", "IIIb"] {
        assert!(cases.contains(c));
    }
}

#[test]
fn lemma_examples() {
    let out = ballke(&["lemmas", "--which", "comb1", "--max", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.starts_with("lemma_id,params,lhs,rhs,holds"));
    assert!(body.contains("comb1,\"(3,2,2,1,1)\",108/1,60/1,true"));

    let (code, v) = json(&["lemmas", "--which", "lmono", "--max", "8"]);
    assert_eq!(code, 0);
    let checks = v["results"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["lemma_id"] == "l2closed" && c["lhs"] == "81/80"));

    let (code, v) = json(&["lemmas", "--which", "elementary", "--max", "20"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["note"].as_str().unwrap().contains("k <= 2"));
}

#[test]
fn all_lemma_suites_pass() {
    let out = ballke(&["lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches(" 0 counterexamples").count(), 7);
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn numeric_trivial_group() {
    let (code, v) = json(&["numeric", "--m", "1", "--t", "0,0", "--radius", "0.9", "--grid", "50"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["max_abs_rel_defect"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn numeric_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = ballke(&[
            "numeric", "--m", "3", "--t", "1,1", "--radius", "0.8", "--grid", "50", "--seed", "7", "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let rows = read_csv(&a);
    assert_eq!(rows.len(), 100);
    let max = rows.iter().map(|r| r[8].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(max > 1e-4);

    let args = ["numeric", "--m", "3", "--t", "1,1", "--radius", "0.8", "--grid", "10", "--seed", "7"];
    let (_, x) = json(&args);
    let (_, y) = json(&args);
    assert_eq!(without_time(x), without_time(y));
}

#[test]
fn numeric_slice_consistency_example() {
    let (code, v) = json(&["numeric", "--m", "5", "--t", "1,2", "--radius", "0.7", "--grid", "30"]);
    assert_eq!(code, 0);
    let slice = &v["results"][0]["checks"]["slice_consistency"];
    assert!(slice["max_rel_gap"].as_f64().unwrap() <= 1e-8);
    assert!(slice["points"].as_u64().unwrap() > 10);
}

#[test]
fn numeric_uses_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ballke"))
        .args(["numeric", "--m", "2", "--t", "1,1", "--grid", "4", "--out", "s.json"])
        .env("BALLKE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let samples: Value = serde_json::from_slice(&std::fs::read(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(samples.as_array().unwrap().len(), 8);
}
