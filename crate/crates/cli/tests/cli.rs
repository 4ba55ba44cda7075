use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;
use twform_core::obstruction::samples;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twform")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

#[test]
fn standardness_of_named_forms() {
    let out = run(&["standardness", "minus_E8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["standard"], false);
    assert_eq!(v["rank_d"], 0);

    let out = run(&["--text", "standardness", "minus_identity(3)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("standard"));
}

#[test]
fn minimal_k_of_e8() {
    let out = run(&["minimal-k", "minus_E8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["k"], 2);
}

#[test]
fn pc_count_reports_identity_and_parity() {
    let dir = TempDir::new().unwrap();
    let e8: Value = serde_json::to_value(twform_core::lattice::Lattice::minus_e8()).unwrap();
    let model = write(
        dir.path(),
        "model.json",
        &json!({
            "free_part": e8,
            "torsion": { "free_rank": 0, "invariant_factors": [4] },
        }),
    );
    let class = write(dir.path(), "class.json", &json!({ "free": [1, 0, 0, 0, 0, 0, 0, 0], "torsion": [1] }));
    let out = run(&["pc-count", model.to_str().unwrap(), class.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["cardinality"]["p_ell"], 2);
    assert_eq!(v["cardinality"]["p_c"], 1);
    assert_eq!(v["cardinality"]["holds"], true);
    assert_eq!(v["parity"]["parity"], 0);
    assert_eq!(v["parity"]["order_four_torsion"], true);
}

#[test]
fn homology_with_checks() {
    let out = run(&["homology", "surface(1,nontrivial)*sphere2", "--coeff", "sign", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["coefficients"], "sign");
    assert_eq!(v["double_cover_sequence"]["exact"], true);
    assert_eq!(v["bockstein_sequence"]["exact"], true);

    let out = run(&["--text", "homology", "circle_nontrivial", "--coeff", "sign"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("H_0(sign) = Z/2"));
}

#[test]
fn obstruct_gives_the_three_verdicts() {
    let dir = TempDir::new().unwrap();
    let w = samples::torus_times_sphere();
    let cases = [
        (samples::sum_with_twisted(&samples::definite("V", true, 4), &w), json!({ "kind": "NonSmoothable" })),
        (samples::sum_with_twisted(&samples::definite("V", false, 12), &w), json!({ "kind": "NoObstruction" })),
        (
            samples::sum_with_twisted(&samples::definite("V", true, 4), &samples::four_torus()),
            json!({ "kind": "HypothesisFailure", "failed": ["H1"] }),
        ),
    ];
    for (i, (record, expected)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("r{i}.json"), record);
        let out = run(&["obstruct", path.to_str().unwrap(), "--system", "l"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(&json_of(&out)["verdict"], expected);
    }
}

#[test]
fn obstruct_with_boundary_reports_the_map() {
    let dir = TempDir::new().unwrap();
    let mut r = samples::sum_with_twisted(&samples::definite("V", true, 1), &samples::torus_times_sphere());
    r.boundary = Some("Y".into());
    let path = write(dir.path(), "bounded.json", &r);
    let out = run(&["obstruct", path.to_str().unwrap(), "--system", "l"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["conclusion"].as_str().unwrap().contains("non-zero"));
}

#[test]
fn verify_suite_passes() {
    let out = run(&["verify", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn input_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["standardness", "no_such_lattice"]).status.code(), Some(1));
    let garbage = dir.path().join("bad.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(run(&["standardness", garbage.to_str().unwrap()]).status.code(), Some(1));
    let out = run(&["homology", "klein_bottle"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["exit_code"], 1);
}

#[test]
fn mathematical_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let hyperbolic = write(dir.path(), "h.json", &json!({ "rank": 2, "gram": [[0, 1], [1, 0]] }));
    let out = run(&["standardness", hyperbolic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json_of(&out)["error"].as_str().unwrap().contains("negative definite"));

    let record = write(dir.path(), "w.json", &samples::torus_times_sphere());
    let out = run(&["obstruct", record.to_str().unwrap(), "--system", "missing"]);
    assert_eq!(out.status.code(), Some(2));
}
