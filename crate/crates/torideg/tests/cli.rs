//! End-to-end checks of the command-line surface: report shapes, exit codes
//! and byte-for-byte determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn torideg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torideg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn faces_report_of_unit_square() {
    let out = torideg(&["faces", "--polytope", &fixture("sq1.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["face_count"], 9);
    assert_eq!(v["maximal_chain_count"], 8);
    assert_eq!(v["faces"].as_array().unwrap().len(), 9);
}

#[test]
fn nu_command_matches_worked_example() {
    let out = torideg(&[
        "nu",
        "--polytope",
        &fixture("sq1.json"),
        "--marking",
        "barycentric",
        "--multipliers",
        "P=2",
        "--point",
        "3:(1,0)",
    ]);
    let v = stdout_json(&out);
    let first = &v.as_array().unwrap()[0];
    assert_eq!(first["oracle_agrees"], true);
    let nu = first["nu"].as_object().unwrap();
    assert_eq!(nu.len(), 2);
    assert!(nu.values().all(|x| x == "1"));
}

#[test]
fn nu_reads_stdin_terms() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_torideg"))
        .args([
            "nu",
            "--polytope",
            &fixture("sq1.json"),
            "--multipliers",
            "P=2",
            "--sum",
        ])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(br#"[{"m":1,"eta":[0,0]},{"m":1,"eta":[1,0]}]"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // the minimum of the two terms is the vertex unit vector
    assert_eq!(v["nu"].as_object().unwrap().len(), 1);
}

#[test]
fn normality_reports_witness() {
    let out = torideg(&["normality", "--polytope", &fixture("q-simplex.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["normal"], false);
    assert_eq!(v["witness"]["m"], 2);

    let out2 = torideg(&["normality", "--polytope", &fixture("simplex6.json")]);
    let v2 = stdout_json(&out2);
    assert_eq!(v2["normal"], true);
    assert_eq!(v2["witness"], serde_json::Value::Null);
}

#[test]
fn non_normal_polytope_is_rejected_by_pipelines() {
    let out = torideg(&["triangulate", "--polytope", &fixture("q-simplex.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("not normal"));
}

#[test]
fn usage_errors_exit_two() {
    let out = torideg(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "fan",
        "--polytope",
        &fixture("sq2.json"),
        "--marking",
        "integral",
        "--level-bound",
        "3",
    ];
    let a = torideg(&args);
    let b = torideg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn explicit_marking_file_drives_the_interior_marked_simplex() {
    let out = torideg(&[
        "triangulate",
        "--polytope",
        &fixture("simplex6.json"),
        "--marking",
        &fixture("simplex6-interior-marking.json"),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["simplex_count"], 24);
    assert_eq!(v["volume_total"], v["volume_polytope"]);

    let shadow = torideg(&[
        "shadow",
        "--polytope",
        &fixture("simplex6.json"),
        "--marking",
        &fixture("simplex6-interior-marking.json"),
        "--degree-bound",
        "2",
        "--level-bound",
        "3",
    ]);
    let sv = stdout_json(&shadow);
    // the interior-marked simplex yields a component that needs
    // higher-level generators
    let chains = sv["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 24);
    assert!(chains
        .iter()
        .any(|c| c["degree_one_equals_monoid"] == false));
    assert!(chains
        .iter()
        .any(|c| c["degree_one_equals_monoid"] == true));
}

#[test]
fn render_svg_shape() {
    let out = torideg(&[
        "render",
        "--polytope",
        &fixture("sq2.json"),
        "--marking",
        "integral",
    ]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 9);

    let bad = torideg(&[
        "render",
        "--polytope",
        &fixture("simplex6.json"),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn paper_examples_all_pass_and_list_works() {
    let list = torideg(&["paper-examples", "--list"]);
    assert!(list.status.success());
    let names = String::from_utf8(list.stdout).unwrap();
    assert!(names.lines().count() >= 18);

    let run = torideg(&["paper-examples"]);
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    for name in names.lines() {
        assert!(text.contains(name), "missing verdict for {name}");
    }
}

#[test]
fn algebra_report_shape() {
    let out = torideg(&[
        "algebra",
        "--polytope",
        &fixture("sq1.json"),
        "--multipliers",
        "P=2",
        "--degree-bound",
        "2",
        "--level-bound",
        "4",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["lambda_order_verified"], true);
    assert_eq!(v["initial_terms_agree"], true);
    assert_eq!(v["generators"].as_array().unwrap().len(), 9);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 9);
}

#[test]
fn level_bound_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_torideg"))
        .args(["fan", "--polytope", &fixture("sq1.json")])
        .env("TORIDEG_LEVEL_BOUND", "2")
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["level_bound"], 2);
    // an explicit flag wins over the environment
    let out2 = Command::new(env!("CARGO_BIN_EXE_torideg"))
        .args(["fan", "--polytope", &fixture("sq1.json"), "--level-bound", "3"])
        .env("TORIDEG_LEVEL_BOUND", "2")
        .output()
        .unwrap();
    let v2 = stdout_json(&out2);
    assert_eq!(v2["level_bound"], 3);
}

#[test]
fn out_directory_receives_reports() {
    let dir = std::env::temp_dir().join(format!("torideg-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let out = torideg(&[
        "faces",
        "--polytope",
        &fixture("sq1.json"),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("faces.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["face_count"], 9);
    std::fs::remove_dir_all(&dir).unwrap();
}
