use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn orbcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbcalc")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = orbcalc(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn invariants_of_the_two_thick_fixture() {
    let f = fixture("superadd_t1_w2.json");
    let (code, v) = json(&["invariants", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["net_x"], "5");
    assert_eq!(v["net_iota"], -2);
    assert_eq!(v["identity"]["holds"], true);
    assert_eq!(v["pieces"].as_array().unwrap().len(), 4);
}

#[test]
fn amalgamation_script_reaches_six() {
    let (f, s) = (fixture("superadd_t1_w2.json"), fixture("amalg_script.json"));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("seq.json");
    let (code, v) = json(&["moves", f.to_str().unwrap(), s.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["final_thick_x"], "6");
    assert_eq!(v["total_delta_net_x"], "1");
    assert_eq!(v["replay_ok"], true);
    let seq: orbcalc::moves::ThinningSequence =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(orbcalc::moves::replay(&seq).is_ok());
}

#[test]
fn sixth_sharp_at_twelve() {
    let (code, v) = json(&["example", "sixth-sharp", "--a", "12"]);
    assert_eq!(code, 0);
    let q = v["quantities"].as_array().unwrap();
    assert_eq!(q[0]["name"], "netX(H)");
    assert_eq!(q[0]["value"], "1/4");
}

#[test]
fn every_example_passes_with_defaults() {
    for name in ["section3-additive", "section3-subadditive", "superadd", "sixth-sharp"] {
        let out = orbcalc(&["example", name]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn failing_hypothesis_is_reported() {
    // |q| = 3 is too small for the additive example.
    let out = orbcalc(&["example", "section3-additive", "--q", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn renamed_field_is_rejected() {
    let text = std::fs::read_to_string(fixture("superadd_t1_w2.json")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, text.replacen("\"toward\"", "\"towards\"", 1)).unwrap();
    let out = orbcalc(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn mismatched_boundary_fails_validation() {
    let text = std::fs::read_to_string(fixture("superadd_t1_w2.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let s = v["surfaces"].as_array_mut().unwrap().iter_mut().find(|s| s["id"] == "H1").unwrap();
    s["genus"] = 5.into();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = orbcalc(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("invalid"));
    let out = orbcalc(&["validate", fixture("superadd_t1_w2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(orbcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(orbcalc(&["example", "no-such-example"]).status.code(), Some(2));
    assert_eq!(orbcalc(&["enumerate", "--max-handles", "9"]).status.code(), Some(2));
    assert_eq!(orbcalc(&["bounds", "counting", "--n", "x"]).status.code(), Some(2));
}

#[test]
fn bounds_evaluate_exactly() {
    let out = orbcalc(&["bounds", "counting", "--n", "2", "--order", "12"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "counting_lower_bound = 3\n");
    let (_, v) = json(&["bounds", "upper-orb", "--x-factors", "4", "--x-s", "-1", "--n-s", "1", "--c", "1"]);
    assert_eq!(v["value"], "6");
    let (_, v) = json(&["bounds", "threshold", "--t1", "2", "--t2", "2", "--t", "3", "--b", "7"]);
    assert_eq!(v["k"], 8);
}

#[test]
fn fuzz_reports_are_reproducible() {
    let args = ["fuzz", "--seed", "9", "--count", "60", "--campaign", "moves", "--moves", "100"];
    let one = Command::new(env!("CARGO_BIN_EXE_orbcalc")).args(args).env("ORBCALC_WORKERS", "1").output().unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_orbcalc")).args(args).env("ORBCALC_WORKERS", "3").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn fuzz_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"seed": 4, "count": 50, "finite_only": true}"#).unwrap();
    let (code, v) = json(&["fuzz", "--config", path.to_str().unwrap(), "--campaign", "integrality"]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"], 50);
}

#[test]
fn enumeration_agrees() {
    let (code, v) = json(&["enumerate", "--max-handles", "3", "--weights", "2,3,5,inf"]);
    assert_eq!(code, 0);
    assert!(v["disagreements"].as_array().unwrap().is_empty());
}
