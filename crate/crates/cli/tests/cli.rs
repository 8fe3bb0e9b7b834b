use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
}

fn k3bm(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_k3bm"))
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{:?}: invalid JSON ({}): {}", args, e, stdout));
    Run {
        code: out.status.code().unwrap(),
        json,
    }
}

fn values_at(cert: &Value, place: &str) -> Vec<String> {
    let rec = cert["places"].as_array().unwrap().iter().find(|r| r["v"] == place).unwrap();
    rec["values"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect()
}

#[test]
fn verify_quaternion() {
    let r = k3bm(&["verify", "--quat", "1", "1", "1"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["status"], "precondition_failed");
    assert!(r.json["certificate"].is_null());
    let failed: Vec<&str> = r.json["conditions"]["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["viii"]);

    let r = k3bm(&["verify", "--quat", "-1", "1", "7"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["status"], "obstruction");
    assert_eq!(values_at(&r.json["certificate"], "2"), ["1/2"]);
}

#[test]
fn verify_cubic() {
    let r = k3bm(&["verify", "--cubic", "97"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["status"], "obstruction");
    assert_eq!(values_at(&r.json["certificate"], "7"), ["1/3", "2/3"]);
    assert_eq!(r.json["certificate"]["sum_set"], serde_json::json!(["1/3", "2/3"]));
    assert_eq!(r.json["scans"]["p2"]["outcomes"], serde_json::json!([true]));

    // 91 = 7·13
    let r = k3bm(&["verify", "--cubic", "91"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["status"], "precondition_failed");
}

#[test]
fn gram_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let r = k3bm(&["--cache-dir", cache, "gram"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["report"]["det"], "-432");
    assert_eq!(r.json["report"]["primary_parts"], serde_json::json!([3, 4, 4, 9]));

    let export = dir.path().join("alt.json");
    let r = k3bm(&["--cache-dir", cache, "gram", "--alternate", "--export", export.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["report"]["det"], "-3888");
    assert_eq!(r.json["export_roundtrip"], true);
    let r = k3bm(&["gram", "--import", export.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["report"]["det"], "-3888");
}

fn output_of(args: &[&str], cache: Option<&Path>, out: &Path) -> Vec<u8> {
    let mut full: Vec<&str> = Vec::new();
    if let Some(c) = cache {
        full.extend(["--cache-dir", c.to_str().unwrap()]);
    }
    full.extend(["-o", out.to_str().unwrap()]);
    full.extend(args);
    assert_eq!(k3bm(&full).code, 0, "{:?}", args);
    fs::read(out).unwrap()
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("out.json");
    for args in [&["cohomology", "--subgroup", "k"][..], &["saturation"][..]] {
        let uncached = output_of(args, None, &out);
        let cold = output_of(args, Some(&cache), &out);
        let warm = output_of(args, Some(&cache), &out);
        assert_eq!(cold, uncached, "{:?}", args);
        assert_eq!(warm, uncached, "{:?}", args);
    }
    assert!(fs::read_dir(&cache).unwrap().count() == 1);
}

#[test]
fn cohomology_and_saturation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--subgroup", "generic"]);
    assert_eq!(r.json["result"]["description"], "0");
    assert_eq!(r.json["result"]["order"], 864);
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--subgroup", "-3a"]);
    assert_eq!(r.json["result"]["description"], "Z/3");
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--subgroup", "cube"]);
    assert_eq!(r.json["quaternion"]["class_nonzero_on_h1"], true);
    assert_eq!(r.json["quaternion"]["class_nonzero_on_h2"], false);
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--subgroup", "k"]);
    assert_eq!(r.json["norm"]["candidate_order"], 3);
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--surface", "1", "1", "1"]);
    assert_eq!(r.code, 0);
    let r = k3bm(&["--cache-dir", cache, "cohomology", "--subgroup", "nope"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["status"], "error");

    let r = k3bm(&["--cache-dir", cache, "saturation"]);
    assert_eq!(r.json["report"]["mod2_candidates"], serde_json::json!(["d6+d9+d14"]));
    assert_eq!(r.json["report"]["fiber_components"], serde_json::json!(["D1", "D3", "D5"]));
}

#[test]
fn searches() {
    let r = k3bm(&["search", "--cubic", "--count", "2"]);
    assert_eq!(r.code, 0);
    let ks: Vec<u64> = r.json["search"]["certified"].as_array().unwrap().iter().map(|c| c["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, [0, 7]);

    let r = k3bm(&["search", "--quat", "--bound", "7"]);
    assert_eq!(r.code, 0);
    let rows = r.json["results"].as_array().unwrap();
    assert!(rows.iter().any(|t| t["a"] == "-1" && t["b"] == "1" && t["c"] == "7" && t["status"] == "obstruction"));

    let r = k3bm(&["points", "--surface", "1", "1", "1", "--bound", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.json["search"]["points"].as_array().unwrap().contains(&serde_json::json!(["1", "0", "0", "1"])));
}

#[test]
fn selftest_is_seeded() {
    let a = k3bm(&["--seed", "5", "selftest", "--pairs", "200"]);
    let b = k3bm(&["--seed", "5", "selftest", "--pairs", "200"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.json, b.json);
    assert_eq!(a.json["bimultiplicativity"], 200);
    assert_eq!(a.json["product_formula"], 200);
}

#[test]
fn rejects_zero_precision_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_k3bm"))
        .args(["--precision-cap", "0", "verify", "--quat", "-1", "1", "7"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
