use std::path::PathBuf;
use std::process::{Command, Output};

use toricproj::io::parse_resolution;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricproj"))
        .args(args)
        .env_remove("TORICPROJ_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("toricproj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn mixed_volume_and_basis() {
    let out = run(&["mv", &path("worked.sys"), "--simplices", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6\n");

    let out = run(&["mv", &path("five_var.sys"), "--simplices", "3"]);
    assert_eq!(stdout(&out), "66\n");

    let out = run(&["mv", &path("zero_dim.sys")]);
    assert_eq!(stdout(&out), "2\n");

    let out = run(&["transbasis", &path("five_var.sys")]);
    assert_eq!(stdout(&out), "1 2 4\n");

    let out = run(&["gamma", &path("worked.sys")]);
    assert_eq!(stdout(&out), "zero - | equations f1 f2\n");
}

#[test]
fn golden_resolution_reproduces() {
    let out = run(&["project", &path("worked.sys"), "--lambda", "0,0,1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let golden = std::fs::read_to_string(data("worked.res")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn seeds_are_reproducible() {
    let a = run(&["project", &path("worked.sys"), "--seed", "11"]);
    let b = run(&["project", &path("worked.sys"), "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_toricproj"))
        .args(["project", &path("worked.sys")])
        .env("TORICPROJ_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn projection_output_verifies() {
    let out = run(&["project", &path("worked.sys"), "--seed", "4"]);
    let res = scratch("seed4.res", &stdout(&out));
    let check = run(&["verify", &path("worked.sys"), &res]);
    assert!(check.status.success(), "{}", stderr(&check));
    assert!(stdout(&check).contains("parametric f2: pass"));
}

#[test]
fn golden_files_verify() {
    for (sys, res) in [
        ("worked.sys", "worked.res"),
        ("five_var.sys", "five_var.res"),
    ] {
        let out = run(&["verify", &path(sys), &path(res)]);
        assert!(out.status.success(), "{res}: {}", stderr(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

#[test]
fn mutated_resolution_is_rejected() {
    let golden = std::fs::read_to_string(data("worked.res")).unwrap();
    let bad = golden.replacen("0 : -3/4*X1", "0 : -1/4*X1", 1);
    assert_ne!(bad, golden);
    let out = run(&["verify", &path("worked.sys"), &scratch("bad.res", &bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("parametric f1: FAIL"));
    assert!(stderr(&out).contains("verification failed"));
    assert!(stderr(&out).contains("parametric f1"));
}

#[test]
fn usage_errors_exit_two() {
    let bad = scratch(
        "neg.sys",
        "toricproj-system 1\nn 2\nequation\n  1 -1 : 3\nend\n",
    );
    let out = run(&["mv", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4, column 5"));

    let out = run(&["project", &path("worked.sys"), "--lambda", "1,2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", &path("five_var.sys"), &path("worked.res")]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["mv", &path("missing.sys")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_output() {
    let out = run(&[
        "project",
        &path("worked.sys"),
        "--lambda",
        "0,0,1",
        "--format",
        "structured",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("format=toricproj-structured 1\n"));
    assert!(text.contains("mv_bound=6\n"));
    assert!(text.contains("result.degree=2\n"));
    assert!(text.lines().all(|l| l.contains('=')));
}

#[test]
fn output_file_matches_stdout() {
    let target = scratch("written.res", "");
    let out = run(&[
        "project",
        &path("worked.sys"),
        "--lambda",
        "0,0,1",
        "-o",
        &target,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    let golden = std::fs::read_to_string(data("worked.res")).unwrap();
    assert_eq!(written, golden);
    assert!(parse_resolution(&written).is_ok());
}

#[test]
fn zero_dimensional_solve() {
    let out = run(&["solve0d", &path("zero_dim.sys"), "--seed", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("nvars 2\nfree\nresolution\n"));
    assert!(text.contains("    2 : 1\n"));

    let out = run(&["solve0d", &path("worked.sys")]);
    assert_eq!(out.status.code(), Some(2));
}
