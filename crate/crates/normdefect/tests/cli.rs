//! End-to-end checks of the `normdefect` binary: exit codes, JSON output,
//! and the environment tolerance override.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_normdefect"))
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn chain132(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("chain132.json");
    write(
        &p,
        r#"{"rows":4,"cols":4,"entries":[0,1,0,0, 0,0,3,0, 0,0,0,2, 0,0,0,0]}"#,
    );
    p
}

#[test]
fn analyze_reports_bounds_case_and_exact_defect() {
    let dir = tempfile::tempdir().unwrap();
    let path = chain132(dir.path());
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bounds"]["lower"], 2);
    assert_eq!(v["bounds"]["upper"], 3);
    assert_eq!(v["case"], "v");
    assert_eq!(v["defect"]["kind"], "exact");
    assert_eq!(v["defect"]["value"], 2);
    assert_eq!(v["inertia"]["n_plus"], 2);
    assert_eq!(v["inertia"]["n_minus"], 2);
}

#[test]
fn analyze_rejects_bad_inputs_with_stable_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, "{ not json");
    let out = bin().arg("analyze").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let rect = dir.path().join("rect.json");
    write(&rect, r#"{"rows":2,"cols":3,"entries":[1,2,3,4,5,6]}"#);
    let out = bin().arg("analyze").arg(&rect).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    let missing = dir.path().join("missing.json");
    let out = bin().arg("analyze").arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn complete_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = chain132(dir.path());
    let completed = dir.path().join("completed.json");
    let out = bin()
        .arg("complete")
        .arg(&path)
        .arg("--out")
        .arg(&completed)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["completion"]["defect"], 2);
    assert_eq!(v["completion"]["size"], 6);
    assert_eq!(v["defect"]["kind"], "exact");

    let out = bin()
        .arg("verify")
        .arg(&path)
        .arg(&completed)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verification"]["normal"], true);
    assert_eq!(v["verification"]["embeds"], true);
    assert_eq!(v["defect"]["value"], 2);
}

#[test]
fn inapplicable_methods_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let shift = dir.path().join("shift.json");
    write(
        &shift,
        r#"{"rows":4,"cols":4,"entries":[0,1,0,0, 0,0,1,0, 0,0,0,1, 1.4142135623730951,0,0,0]}"#,
    );
    // 4x4 but not superdiagonal
    let out = bin()
        .arg("complete")
        .arg(&shift)
        .arg("--method")
        .arg("superdiag4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // cyclic shift whose two-level criterion fails
    let out = bin()
        .arg("complete")
        .arg(&shift)
        .arg("--method")
        .arg("shift")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // trivial always applies
    let out = bin()
        .arg("complete")
        .arg(&shift)
        .arg("--method")
        .arg("trivial")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["completion"]["size"], 8);
}

#[test]
fn verify_rejects_perturbed_completions() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("fixtures")
        .arg("example1")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let a = dir.path().join("example1_a.json");
    let comp = dir.path().join("example1_a_completion.json");
    let out = bin().arg("verify").arg(&a).arg(&comp).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    // perturb one entry of the completion
    let text = std::fs::read_to_string(&comp).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["entries"][0][0] = Value::from(1e-3);
    let broken = dir.path().join("broken.json");
    write(&broken, &serde_json::to_string(&v).unwrap());
    let out = bin().arg("verify").arg(&a).arg(&broken).output().unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn search_exit_codes_distinguish_found_from_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = chain132(dir.path());
    let out = bin()
        .args(["search", path.to_str().unwrap(), "--k", "1"])
        .args(["--restarts", "6", "--max-iters", "80", "--seed", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["search"]["found"], false);

    let id = dir.path().join("identity.json");
    write(&id, r#"{"rows":2,"cols":2,"entries":[1,0,0,1]}"#);
    let out = bin()
        .args(["search", id.to_str().unwrap(), "--k", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["search"]["found"], true);
}

#[test]
fn blockdiag_composition_report() {
    let dir = tempfile::tempdir().unwrap();
    let b1 = dir.path().join("b1.json");
    write(&b1, r#"{"rows":2,"cols":2,"entries":[0,1,0,0]}"#);
    let b2 = dir.path().join("b2.json");
    write(&b2, r#"{"rows":2,"cols":2,"entries":[0,2,0,0]}"#);
    let out = bin()
        .arg("blockdiag")
        .arg(&b1)
        .arg(&b2)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["blocks"]["applies"], true);
    assert_eq!(v["blocks"]["combined_nd"], 2);
    assert_eq!(v["defect"]["kind"], "exact");
    assert_eq!(v["defect"]["value"], 2);
}

#[test]
fn fixtures_registry_and_unknown_names() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "example1",
        "example2",
        "example3",
        "example4",
        "sqrt2shift",
        "eq8-unknown",
        "blockdiag-candidate",
        "eps3-asc",
        "eps3-desc",
    ] {
        let out = bin()
            .arg("fixtures")
            .arg(name)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "fixture {name}");
        let v = json(&out);
        assert!(!v["files"].as_array().unwrap().is_empty());
    }
    let out = bin()
        .arg("fixtures")
        .arg("unknown-name")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn analyze_reports_shift_obstructions() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("fixtures")
        .arg("example2")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .arg("analyze")
        .arg(dir.path().join("example2_a.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bounds"]["lower"], 1, "epsilon is 1");
    assert_eq!(v["shift"]["holds"], false);
    assert_eq!(v["shift"]["reason"], "j-too-large");
    assert_eq!(v["defect"]["kind"], "interval");
    assert_eq!(v["defect"]["lower"], 2, "certificate lifts the lower bound");
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("nd >= 2")));
}

#[test]
fn env_var_overrides_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = chain132(dir.path());
    let out = bin()
        .arg("analyze")
        .arg(&path)
        .env("ND_DEFAULT_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tolerance"], 1e-6);
}
