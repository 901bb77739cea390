use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn freemon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freemon"))
        .args(args)
        .env_remove("FREEMON_STAGES")
        .env_remove("FREEMON_BACKEND")
        .output()
        .unwrap()
}

fn compute(backend: &str, input: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["compute", "--backend", backend, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    freemon(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn one_letter_truncation() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.txt", "a\n");
    let out = compute("finset", &x, &["--stages", "4", "--emit", "json", "--checks", "laws"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["runs"][0]["sizes"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(r["runs"][0]["stabilized_at"], Value::Null);
    assert_eq!(r["runs"][0]["certified_truncation"], true);
    assert_eq!(r["checks"][0]["name"], "laws");
    assert_eq!(r["checks"][0]["passed"], true);
}

#[test]
fn chain_graph_dot() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "vertices a b c\nedge f a b\nedge g b c\n");
    let out = compute("span", &g, &["--emit", "json"]);
    let r = json(&out);
    assert_eq!(r["runs"][0]["stabilized_at"], 2);
    assert_eq!(r["runs"][0]["stages"][2]["size"], 6);
    let out = compute("span", &g, &["--emit", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"a\" -> \"c\" [label=\"f.g\"]"));
}

#[test]
fn s3_abelianizes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "s3.txt", "group S3\n");
    let out = compute("fingrp", &g, &["--emit", "json", "--checks", "laws,universal,alg-free"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let s = r["runs"][0]["stabilized_at"].as_u64().unwrap() as usize;
    assert_eq!(r["runs"][0]["sizes"][s], 2);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn both_modes_agree() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.txt", "a\nb\n");
    let out = compute("finset", &x, &["--stages", "3", "--mode", "both", "--emit", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["runs"].as_array().unwrap().len(), 2);
    assert_eq!(r["agreement"]["passed"], true);
    assert_eq!(r["runs"][0]["sizes"], r["runs"][1]["sizes"]);
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "vertices u v\nedge p u v\nedge l v v\n");
    let args = ["--stages", "3", "--emit", "json", "--seed", "17", "--checks", "universal,alg-free,laws"];
    let a = compute("span", &g, &args);
    let b = compute("span", &g, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let dup = write(&dir, "dup.txt", "a\nb\na\n");
    let out = compute("finset", &dup, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    let g = write(&dir, "g.txt", "vertices a b\nedge f a z\n");
    let out = compute("span", &g, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown vertex"));

    let x = write(&dir, "x.txt", "a\n");
    assert_eq!(compute("finset", &x, &["--stages", "0"]).status.code(), Some(2));
    assert_eq!(compute("finset", &x, &["--mode", "sideways"]).status.code(), Some(2));
}

#[test]
fn capability_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "z4.txt", "group Z4\n");
    assert_eq!(compute("fingrp", &g, &["--mode", "dubuc"]).status.code(), Some(3));
    assert_eq!(compute("fingrp", &g, &["--emit", "dot"]).status.code(), Some(3));
    assert_eq!(compute("fingrp", &g, &["--checks", "lemmas"]).status.code(), Some(3));
    let big = write(&dir, "s4.txt", "group S4\n");
    assert_eq!(compute("fingrp", &big, &[]).status.code(), Some(3));
    assert_eq!(compute("fingrp", &big, &["--max-order", "24", "--stages", "1"]).status.code(), Some(0));
    assert_eq!(freemon(&["check-lemmas", "--backend", "fingrp"]).status.code(), Some(3));
}

#[test]
fn table_input_for_groups() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "z3.txt", "# Z/3\nelements 0 1 2\n0 1 2\n1 2 0\n2 0 1\n");
    let out = compute("fingrp", &g, &["--emit", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["runs"][0]["stabilized_at"], 1);
    let bad = write(&dir, "bad.txt", "elements 0 1\n0 1\n1 1\n");
    assert_eq!(compute("fingrp", &bad, &[]).status.code(), Some(2));
}

#[test]
fn lemma_suites_pass() {
    let out = freemon(&["check-lemmas", "--backend", "finset", "--seed", "4", "--emit", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["checks"][0]["instances"], 600);
    assert_eq!(r["passed"], true);
    let out = freemon(&["check-lemmas", "--backend", "span", "--count", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("result: PASS"));
}

#[test]
fn environment_overrides_defaults() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.txt", "a\n");
    let out = Command::new(env!("CARGO_BIN_EXE_freemon"))
        .args(["compute", "--backend", "finset", "--input", x.to_str().unwrap(), "--emit", "json"])
        .env("FREEMON_STAGES", "2")
        .output()
        .unwrap();
    assert_eq!(json(&out)["runs"][0]["sizes"], serde_json::json!([1, 2, 3]));
}
