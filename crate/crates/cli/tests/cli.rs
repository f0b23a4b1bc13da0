use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trackwork"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn split_model_class_is_zero() {
    let o = run(&["extension", "class", &fixture("split_z2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"H3_class":"0"}"#);
}

#[test]
fn nontrivial_table_has_no_pseudosection() {
    let o = run(&["extension", "pseudosection", &fixture("crossed_sign.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["status"], "no_solution");
    let values = v["class_witness"]["cocycle"]["values"].as_object().unwrap();
    assert!(values.values().any(|x| x.as_array().unwrap().iter().any(|c| c != 0)));
}

#[test]
fn trivial_table_pseudosection_verifies() {
    let o = run(&["extension", "pseudosection", "--fixture", "crossed-module-trivial"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "solved");
    assert!(v["report"]["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn cyclic_group_cohomology() {
    let o = run(&["cohomology", "group", &fixture("z2.json"), "--degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["group"], "Z/2");
    let t = run(&["--text", "cohomology", "group", &fixture("z2.json"), "--degree", "3"]);
    assert_eq!(String::from_utf8_lossy(&t.stdout).trim(), "H^3 = Z/2");
}

#[test]
fn coboundary_of_a_cochain() {
    let o = run(&["cohomology", "coboundary", &fixture("z2.json"), "--cochain", &fixture("cochain2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["degree"], 3);
    assert!(v["values"].as_object().unwrap().is_empty());
}

#[test]
fn broken_composition_is_a_validation_failure() {
    let o = run(&["cohomology", "group", &fixture("broken_triple.json"), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("/compose/") && err.contains("[t, t, e]"), "{err}");
}

#[test]
fn malformed_json_and_unknown_verbs_are_parse_errors() {
    let o = run(&["cohomology", "group", &fixture("malformed.json"), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = run(&["nil2", "compose", "2:1:x1", "1:1:x1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["nil2", "normalize", "--rank", "2", "x1 ^^"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn nil2_arithmetic() {
    let o = run(&["nil2", "mul", "--rank", "2", "x2", "x1"]);
    assert_eq!(json(&o)["product"], "x1 x2 [x1,x2]^-1");
    let o = run(&["nil2", "normalize", "--rank", "2", "x2 x1 x2^-1 x1^-1"]);
    assert_eq!(json(&o)["normal_form"], "[x1,x2]^-1");
    let o = run(&["nil2", "compose", "1:2:x1 x2", "2:1:x1;x1^-1"]);
    assert_eq!(json(&o)["images"][0], "1");
}

#[test]
fn gamma_verify_passes_on_the_grid() {
    let o = run(&[
        "--seed", "9", "gamma", "verify", "--coefficients", "Z/4", "--map", "1:1:x1^3", "--twist-x", "1", "--twist-y", "2",
        "--samples", "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["grid"]["block_pairs"], 637228);
}

#[test]
fn gamma_build_naturality_and_equivalence() {
    let o = run(&["gamma", "build", "--coefficients", "Z/4", "--map", "1:1:x1^2", "--alpha", "1:2:x1 x2", "--twist-y", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["source"]["images"][0], "x1^2 x2^2");
    let o = run(&["gamma", "naturality", "--coefficients", "Z/2", "--f", "1:1:x1^2", "--g", "1:1:x1^-1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["gamma", "equivalence", "--coefficients", "Z/3", "--theory", "nil1", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["gamma", "equivalence", "--coefficients", "Z/2", "--theory", "nil1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    let args = ["--seed", "3", "extension", "verify", &fixture("split_z2.json"), "--samples", "10"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 3);
}

#[test]
fn dualizing_twice_preserves_the_class() {
    let o = run(&["extension", "dualize", &fixture("crossed_sign.json")]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("trackwork-dual-{}", std::process::id()));
    std::fs::write(&dir, &o.stdout).unwrap();
    let c = run(&["extension", "class", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(json(&c)["H3_class"], "[1]");
}
