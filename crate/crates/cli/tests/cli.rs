//! End-to-end checks of the command line: exit codes, report shape, file
//! output, and the markdown rendering.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gprojlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn analyze_selfinjective() {
    let out = run(&["analyze", fixture("s3.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["certificates"]["gorenstein"]["gd"], 0);
    assert_eq!(doc["certificates"]["gorenstein"]["gorenstein"], true);
}

#[test]
fn analyze_hereditary() {
    let out = run(&["analyze", fixture("hereditary_a2.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["certificates"]["gorenstein"]["gd"], 1);
}

#[test]
fn analyze_non_gorenstein() {
    let out = run(&["analyze", fixture("two_loops.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["certificates"]["gorenstein"]["gorenstein"], false);
}

#[test]
fn gproj_lists_three_simples() {
    let out = run(&["gproj", fixture("s3.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["count"], 3);
    assert_eq!(doc["verdicts"][0]["complete"], true);
    assert_eq!(doc["tables"]["omega_orbits"].as_array().unwrap().len(), 1);
}

#[test]
fn gproj_empty_over_hereditary() {
    let out = run(&["gproj", fixture("hereditary_a2.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["count"], 0);
}

#[test]
fn verify_decomposition_pass() {
    let out = run(&[
        "verify",
        fixture("two_cycles_vertex.quiv").to_str().unwrap(),
        "--check",
        "decomposition",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["pass"], true);
    assert_eq!(doc["verdicts"][0]["total_objects"], 6);
}

#[test]
fn verify_recollement_negative_control_exits_3() {
    let out = run(&[
        "verify",
        fixture("arrow_two_s3.quiv").to_str().unwrap(),
        "--check",
        "recollement",
        "--negative-control",
        "--sample",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["pass"], false);
    let detail = doc["verdicts"][0]["counterexample"].as_str().unwrap();
    assert!(detail.contains("sample"), "counterexample is localized: {detail}");
}

#[test]
fn verify_defect_hypothesis() {
    let out = run(&[
        "verify",
        fixture("arrow_two_s3.quiv").to_str().unwrap(),
        "--check",
        "defect-hypothesis",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["certificates"]["defect_hypothesis"]["kind"], "finite");
}

#[test]
fn verify_gd_bounds() {
    let out = run(&[
        "verify",
        fixture("glued_pair_bridge.quiv").to_str().unwrap(),
        "--check",
        "gd-bounds",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["pass"], true);
    assert_eq!(doc["verdicts"][0]["steps"], 3);
}

#[test]
fn input_errors_exit_1() {
    let out = run(&["analyze", "/nonexistent/path.quiv"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = std::env::temp_dir().join("gprojlab_bad_input");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("loop.quiv");
    std::fs::write(&bad, "algebra A; vertices: 1; arrows: x: 1 -> 1;").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("not admissible"), "stderr: {msg}");
}

#[test]
fn markdown_format_and_out_file() {
    let dir = std::env::temp_dir().join("gprojlab_md_out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.md");
    let out = run(&[
        "analyze",
        fixture("s3.quiv").to_str().unwrap(),
        "--format",
        "md",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# gprojlab report"));
    assert!(text.contains("gorenstein"));
}

#[test]
fn decomposition_markdown_contains_block_table() {
    let out = run(&[
        "verify",
        fixture("two_cycles_vertex.quiv").to_str().unwrap(),
        "--check",
        "decomposition",
        "--format",
        "md",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("union_stable_table"));
    assert!(text.contains("| --- |") || text.contains("dims"));
}

#[test]
fn gproj_on_gluing_matches_decomposition_count() {
    let out = run(&["gproj", fixture("two_cycles_vertex.quiv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdicts"][0]["count"], 6);
    let orbits = doc["tables"]["omega_orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 2);
    assert!(orbits.iter().all(|o| o.as_array().unwrap().len() == 3));
}

#[test]
fn ct_a_rejects_wrong_triangle_count() {
    let out = run(&[
        "ct-a",
        fixture("two_cycles_vertex.quiv").to_str().unwrap(),
        "--triangles",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bound_env_override_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_gprojlab"))
        .args(["analyze", fixture("s3.quiv").to_str().unwrap()])
        .env("GPROJLAB_BOUND", "9")
        .output()
        .unwrap();
    let doc = stdout_json(&out);
    assert_eq!(doc["config"]["bound"], 9);
}

#[test]
fn prime_field_mode_runs() {
    let out = run(&[
        "analyze",
        fixture("s3.quiv").to_str().unwrap(),
        "--field",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["config"]["field"], "F7");
    assert_eq!(doc["certificates"]["gorenstein"]["gd"], 0);
}
