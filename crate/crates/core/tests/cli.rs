use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanifold")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_slice(&run(&all).stdout).unwrap()
}

#[test]
fn passing_commands() {
    let p2 = corpus("p2.fan");
    for cmd in [
        vec!["fan", "check"],
        vec!["fan", "complete"],
        vec!["fltz", "strata"],
        vec!["fltz", "boundary"],
        vec!["fltz", "cover-check"],
        vec!["fanifold", "check"],
        vec!["fanifold", "sphere"],
        vec!["fanifold", "filtration"],
        vec!["cover", "nerve"],
        vec!["mirror", "boundary"],
        vec!["mirror", "verify"],
        vec!["emit", "dot"],
    ] {
        let mut args = cmd.clone();
        args.push(&p2);
        assert_eq!(code(&args), 0, "{cmd:?}");
    }
}

#[test]
fn failing_checks_exit_one() {
    assert_eq!(code(&["fan", "complete", &corpus("a2.fan")]), 1);
    assert_eq!(code(&["fanifold", "check", &corpus("a2.fan")]), 1);
    assert_eq!(code(&["mirror", "verify", &corpus("a3.fan")]), 1);
    assert_eq!(code(&["fan", "quotient", "--cone", "0,2", &corpus("p1xp1.fan")]), 1);
    assert_eq!(code(&["fan", "check", &corpus("broken/duplicate_ray.fan")]), 1);
    assert_eq!(code(&["fltz", "strata", &corpus("broken/duplicate_ray.fan")]), 1);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&["fan", "check"]), 2);
    assert_eq!(code(&["fan", "check", "/nonexistent/file.fan"]), 2);
    assert_eq!(code(&["fan", "quotient", "--cone", "x", &corpus("p2.fan")]), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fan");
    std::fs::write(&bad, "rank: 2\nray 0: 1 zero\n").unwrap();
    let out = run(&["fan", "check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn quotient_emits_document() {
    let out = run(&["fan", "quotient", "--cone", "0", &corpus("p2.fan")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "rank: 1\nray 0: 1\nray 1: -1\ncone: 0\ncone: 1\n");
}

#[test]
fn json_reports() {
    let v = json(&["mirror", "verify", &corpus("p2.fan")]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "mirror verify");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["body"]["nerve_counts_by_dim"], serde_json::json!([3, 3]));
    assert_eq!(v["body"]["diagram_objects"], 6);

    let v = json(&["fan", "check", &corpus("broken/intersection_violation.fan")]);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["body"]["violations"][0]["kind"], "intersection");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["mirror", "verify", "--format", "json"],
        vec!["fltz", "cover-check", "--format", "json"],
        vec!["emit", "dot", "--of", "nerve"],
    ] {
        let mut a = args.clone();
        let p = corpus("p1xp1.fan");
        a.push(&p);
        assert_eq!(run(&a).stdout, run(&a).stdout);
    }
}

#[test]
fn dot_exports() {
    let count = |args: &[&str]| {
        let text = String::from_utf8(run(args).stdout).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| l.starts_with("  ")).collect();
        let edges = body.iter().filter(|l| l.contains("->") || l.contains("--")).count();
        (body.len() - edges, edges)
    };
    let p2 = corpus("p2.fan");
    assert_eq!(count(&["emit", "dot", &p2]), (7, 9));
    assert_eq!(count(&["emit", "dot", "--of", "nerve", &p2]), (3, 3));
    assert_eq!(count(&["emit", "dot", "--of", "diagram", &p2]), (6, 6));
}

#[test]
fn corpus_files_round_trip() {
    for name in ["p1", "p2", "p1xp1", "f1", "p3", "a2", "a3"] {
        let path = corpus(&format!("{name}.fan"));
        let text = std::fs::read_to_string(&path).unwrap();
        let f = fanifold::io::load_fan(&text).unwrap();
        let doc = fanifold::io::parse_fan(&text).unwrap();
        assert_eq!(fanifold::io::parse_fan(&doc.emit()).unwrap(), doc, "{name}");
        assert_eq!(fanifold::io::load_fan(&fanifold::io::emit_fan(&f, Some(name))).unwrap(), f);
    }
    let text = std::fs::read_to_string(corpus("broken/corrupted_arrow.fanifold")).unwrap();
    let phi = fanifold::io::parse_fanifold(&text).unwrap();
    assert_eq!(fanifold::io::parse_fanifold(&fanifold::io::emit_fanifold(&phi)).unwrap(), phi);
}
