//! End-to-end runs of the binary: output shapes, determinism, cache files
//! and exit codes.

use std::process::{Command, Output};

fn hbrauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbrauer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let last = text.lines().last().expect("some output");
    serde_json::from_str(last).expect("JSON output")
}

#[test]
fn enumerate_prints_the_census() {
    let out = hbrauer(&["enumerate", "--n", "3", "--m", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["total"], 15);
    assert_eq!(v["histogram"]["-1"], 5);
    assert_eq!(v["histogram"]["0"], 6);
    assert_eq!(v["histogram"]["1"], 4);

    let out = hbrauer(&["enumerate", "--n", "1", "--m", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["histogram"]["-1"], 1);

    // odd boundaries are empty, not an error
    let out = hbrauer(&["enumerate", "--n", "1", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["total"], 0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = hbrauer(&["enumerate", "--n", "2", "--m", "2"]);
    let b = hbrauer(&["enumerate", "--n", "2", "--m", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let a = hbrauer(&["gram", "--l", "1", "--n", "4", "--p", "2", "--lambda", "2", "--det"]);
    let b = hbrauer(&["gram", "--l", "1", "--n", "4", "--p", "2", "--lambda", "2", "--det"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumerate_writes_a_readable_table() {
    let path = std::env::temp_dir().join(format!("hbrauer-table-{}.jsonl", std::process::id()));
    let path_s = path.display().to_string();
    let out = hbrauer(&["enumerate", "--n", "2", "--m", "2", "--out", &path_s]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first["cert"].as_str().unwrap().starts_with("n=2:"));
    assert!(first["exact"].as_bool().unwrap());
    let _ = std::fs::remove_file(path);
}

#[test]
fn cache_directory_is_populated_and_reused() {
    let dir = std::env::temp_dir().join(format!("hbrauer-cli-cache-{}", std::process::id()));
    let dir_s = dir.display().to_string();
    let out = hbrauer(&["enumerate", "--n", "3", "--m", "3", "--cache-dir", &dir_s]);
    assert!(out.status.success());
    assert!(dir.join("heights-3x3.jsonl").exists());
    let again = hbrauer(&["enumerate", "--n", "3", "--m", "3", "--cache-dir", &dir_s]);
    assert_eq!(out.stdout, again.stdout);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn gram_of_the_single_loop_label() {
    let out = hbrauer(&["gram", "--l", "0", "--n", "2", "--p", "0", "--det"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("1*d\n"), "matrix is [d]: {text}");
    let v = stdout_json(&out);
    assert_eq!(v["det"], "1*d");
    assert_eq!(v["factorization"]["roots"][0]["value"], "0");
}

#[test]
fn height_and_compose_commands() {
    let out = hbrauer(&[
        "height",
        "--diagram",
        r#"{"n":2,"m":2,"blocks":[[1,-2],[2,-1]]}"#,
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["height"], 0);

    let out = hbrauer(&[
        "compose",
        "--top",
        r#"{"n":2,"m":2,"blocks":[[1,2],[-1,-2]]}"#,
        "--bottom",
        r#"{"n":2,"m":2,"blocks":[[1,2],[-1,-2]]}"#,
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["delta_exp"], 1);
}

#[test]
fn check_suites_and_exit_codes() {
    let out = hbrauer(&["check", "--suite", "closure", "--l", "1", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["pass"], true);

    let out = hbrauer(&["check", "--suite", "blob", "--n", "3"]);
    assert!(out.status.success());

    let out = hbrauer(&["check", "--suite", "nonsense", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = hbrauer(&["gram", "--l", "-1", "--n", "4", "--p", "2", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(2), "invalid label is a usage error");

    let out = hbrauer(&["compose", "--top", r#"{"n":2,"m":2,"blocks":[[1,2],[-1,-2]]}"#, "--bottom", r#"{"n":3,"m":3,"blocks":[[1,-1],[2,-2],[3,-3]]}"#]);
    assert_eq!(out.status.code(), Some(2), "arity mismatch is a usage error");
}

#[test]
fn rollet_export_formats() {
    let out = hbrauer(&["rollet", "--l", "0", "--radius", "3"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("graph rollet {"));
    assert!(text.contains("\"0:[]\" -- \"1:[1]\";"));

    let out = hbrauer(&["rollet", "--l", "0", "--radius", "3", "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["vertices"][0]["p"], 0);
    assert!(v["edges"].as_array().unwrap().len() >= 5);

    let out = hbrauer(&["rollet", "--l", "0", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}
