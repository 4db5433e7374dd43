//! End-to-end CLI checks: the exit-code contract, machine-readable
//! errors, artifact round-trips, and export shapes.

use std::path::Path;
use std::process::Output;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ripslab")
}

fn run(args: &[&str], out: &Path) -> Output {
    std::process::Command::new(bin())
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const DINF: &str = r#"{ "kind": "free_product_cyclic", "parameters": { "orders": [2, 2] } }"#;
const FREE2: &str = r#"{ "kind": "free", "parameters": { "rank": 2 } }"#;

#[test]
fn exit_zero_on_success() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(&["delta", "--group", &spec, "--radius", "4"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("delta.json")).unwrap()).unwrap();
    assert_eq!(report["delta_numerator"], 0);
    assert_eq!(report["denominator"], 2);
    assert!(report["exhaustive"].as_bool().unwrap());
    assert!(tmp.path().join("timing.json").exists());
}

#[test]
fn exit_one_on_validation_error_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_spec(
        tmp.path(),
        "bad.json",
        r#"{ "kind": "free", "parameters": { "rank": 2 },
             "generating_set": ["a", "b", "b^-1"] }"#,
    );
    let out = run(&["validate", "--group", &bad], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout["error"]["field"], "generating_set");
    assert!(stdout["error"]["reason"]
        .as_str()
        .unwrap()
        .contains("symmetric"));
}

#[test]
fn exit_one_on_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["delta", "--no-such-flag"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty(), "usage goes to the error stream");
}

#[test]
fn exit_one_when_d_below_threshold() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &["contract", "--group", &spec, "--d", "10", "--subgroup", "a"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("32"));
}

#[test]
fn exit_two_on_tampered_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "free2.json", FREE2);
    let out = run(
        &[
            "contract", "--group", &spec, "--d", "20", "--seed", "5",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let trace_path = tmp.path().join("trace.json");
    let mut trace: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&trace_path).unwrap()).unwrap();
    trace["terminal"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!("abababababab"));
    std::fs::write(&trace_path, serde_json::to_string_pretty(&trace).unwrap()).unwrap();

    let out = run(
        &["verify", "--trace", trace_path.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["failure"]["check"].is_string());
}

#[test]
fn exit_three_on_resource_guard() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "free2.json", FREE2);
    let out = run(
        &[
            "ball",
            "--group",
            &spec,
            "--radius",
            "6",
            "--guard-vertices",
            "10",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_round_trip_through_file() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "contract", "--group", &spec, "--d", "20", "--subgroup", "a", "--seed", "9",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = tmp.path().join("trace.json");
    let out = run(&["verify", "--trace", trace.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fixed_points_faces_feed_homology() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "fixed-points",
            "--group",
            &spec,
            "--subgroup",
            "a",
            "--d",
            "6",
            "--radius",
            "8",
            "--format",
            "faces",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let faces = tmp.path().join("fixedpoints.faces");
    let out = run(&["homology", "--faces", faces.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("homology.json")).unwrap())
            .unwrap();
    assert_eq!(report["homology"]["trivial"], true);
    assert_eq!(report["connected"], true);
}

#[test]
fn ball_dot_export_matches_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "export", "--group", &spec, "--what", "ball", "--format", "dot", "--radius", "3",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(tmp.path().join("ball.dot")).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 6, "line of 7 vertices has 6 edges");
    assert_eq!(dot.matches("label=").count(), 7 + 6);
}

#[test]
fn rips_faces_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "rips", "--group", &spec, "--radius", "4", "--d", "2", "--max-dim", "3",
            "--format", "faces",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let faces = tmp.path().join("rips.faces");
    let out = run(&["homology", "--faces", faces.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("homology.json")).unwrap())
            .unwrap();
    // An interval of the line at d = 2 is contractible.
    assert_eq!(report["homology"]["trivial"], true);
}

#[test]
fn check_rips_theorem_reports_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "check-rips-theorem",
            "--group",
            &spec,
            "--d",
            "2",
            "--radius",
            "4",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("ripscheck.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["star_disjointness"]["violations"], 0);
    assert_eq!(report["orbit_representatives"]["count"], 5);
}

#[test]
fn unsafe_d_waters_the_report_and_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(
        &[
            "contract", "--group", &spec, "--d", "12", "--subgroup", "a", "--unsafe-d",
        ],
        tmp.path(),
    );
    // The engine may cone successfully, but the strict verifier rejects
    // the out-of-contract configuration, so the command reports failure.
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("contract.json")).unwrap())
            .unwrap();
    assert_eq!(report["unsafe_d"], true);
    assert_eq!(report["verify"]["pass"], false);
}

#[test]
fn help_exits_zero() {
    let out = std::process::Command::new(bin()).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}

#[test]
fn env_var_sets_default_out_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out_dir = tmp.path().join("envout");
    let out = std::process::Command::new(bin())
        .args(["ball", "--group", &spec, "--radius", "2"])
        .env("RIPSLAB_OUT", &out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out_dir.join("ball.json").exists());
}

#[test]
fn subgroups_report_lists_the_window() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "dinf.json", DINF);
    let out = run(&["subgroups", "--group", &spec], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("subgroups.json")).unwrap())
            .unwrap();
    let subs = report["subgroups"].as_array().unwrap();
    assert_eq!(subs.len(), 5);
    assert_eq!(report["window_radius"], 4);
}
