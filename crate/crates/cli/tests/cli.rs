use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmorse"))
        .args(args)
        .env_remove("MORSE_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn triangle_collapses() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "t.cplx", "a b c\n");
    let out = run(&["collapse", &k]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "collapse");
    assert_eq!(v["exact"], true);
    assert_eq!(v["certificate"]["steps"].as_array().unwrap().len(), 3);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn dunce_hat_does_not_collapse() {
    let out = run(&["collapse", "@dunce_hat"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["certificate"]["verdict"], "not_collapsible");
}

#[test]
fn small_budget_is_inexact() {
    let out = run(&["nk", "@dunce_hat", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["exact"], false);
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nmorse"))
        .args(["nk", "@rp2_6"])
        .env("MORSE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["nk", "@rp2_6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "bad.cplx", "a b\na a\n");
    let out = run(&["info", &k]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 3"), "{err}");
}

#[test]
fn unknown_subcommand_and_missing_file() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["info", "/nonexistent/x.cplx"]).status.code(), Some(2));
    assert_eq!(run(&["info", "@no_such_complex"]).status.code(), Some(2));
}

#[test]
fn nk_witness_reproduces_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["nk", "@rp2_6"]);
    let v = json(&out);
    let value = v["result"]["value"].as_u64().unwrap();
    let lines: Vec<&str> = v["certificate"]["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap())
        .collect();
    let field = write(dir.path(), "w.field", &(lines.join("\n") + "\n"));
    let out = run(&["nkf", "@rp2_6", &field]);
    assert_eq!(out.status.code(), Some(0));
    let signed = json(&out)["result"]["nkf"]["value"].as_i64().unwrap();
    assert_eq!(signed.unsigned_abs(), value);
}

#[test]
fn normalize_writes_a_parsable_function() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "t.cplx", "a b c\n");
    let field = write(dir.path(), "t.field", "a -> a b\nb c -> a b c\n");
    let mf = dir.path().join("t.mf");
    let out = run(&["normalize", &k, &field, "--out", mf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&mf).unwrap();
    let cplx = nmorse::io::parse_cplx("a b c\n").unwrap();
    let f = nmorse::io::parse_mf(&cplx, &text).unwrap();
    assert!(f.is_morse_function(&cplx).unwrap());

    let printed = run(&["normalize", &k, &field]);
    let stdout = String::from_utf8(printed.stdout).unwrap();
    assert!(stdout.starts_with(&text));
    let value = json(&run(&["nkf", &k, &field]))["result"]["nkf"]["value"]
        .as_i64()
        .unwrap();
    assert!(
        stdout.trim_end().ends_with(&format!("# nkf = {value}")),
        "{stdout}"
    );
}

#[test]
fn torus_dot_marks_critical_cells() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["nk", "@torus_7"]));
    let lines: Vec<&str> = v["certificate"]["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap())
        .collect();
    let field = write(dir.path(), "w.field", &(lines.join("\n") + "\n"));
    let out = run(&["export-dot", "@torus_7", &field]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph field {"));
    assert_eq!(dot.matches("[label=").count(), 42);
    assert_eq!(dot.matches("peripheries=2").count(), 4);
}

#[test]
fn homology_and_catalog_outputs() {
    let h: Value = json(&run(&["homology", "@rp2_6"]));
    assert_eq!(h["torsion"][1][0], 2);
    let names = json(&run(&["catalog"]));
    assert!(names.as_array().unwrap().iter().any(|n| n == "dunce_hat"));
    let text = String::from_utf8(run(&["catalog", "torus_7"]).stdout).unwrap();
    let k = nmorse::io::parse_cplx(&text).unwrap();
    assert_eq!(k.f_vector(), vec![7, 21, 14]);
}
