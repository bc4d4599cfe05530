use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.prob"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffnull")).args(args).output().expect("binary runs")
}

/// Runs with `--json` into a temporary file; returns exit code, stdout and the report.
fn run_json(args: &[&str]) -> (i32, String, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full = vec!["--json", path.to_str().unwrap()];
    full.extend_from_slice(args);
    let out = run(&full);
    let report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), report)
}

fn fx(name: &str) -> String {
    fixture(name).to_str().unwrap().to_owned()
}

#[test]
fn min_order_finds_t() {
    let (code, stdout, r) = run_json(&["min-order", &fx("ex3_n1"), "--h-max", "4"]);
    assert_eq!(code, 0);
    assert!(stdout.ends_with("t = 2\n"), "{stdout}");
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "min-order");
    assert_eq!(r["results"]["result"], "found");
    assert_eq!(r["results"]["t"], 2);
    assert_eq!(r["results"]["verdicts"][1]["status"], "not-in-radical");
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn min_order_not_found() {
    let (code, _, r) = run_json(&["min-order", &fx("ex_unsat"), "--h-max", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["results"]["result"], "not-found");
    assert_eq!(r["results"]["verdicts"].as_array().unwrap().len(), 3);
}

#[test]
fn ackermann_values_and_cap() {
    let (code, stdout, r) = run_json(&["ackermann", "3", "2"]);
    assert_eq!((code, stdout.as_str()), (0, "29\n"));
    assert_eq!(r["results"]["value"], "29");
    assert_eq!(r["results"]["exact"], true);
    let out = run(&["ackermann", "5", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "(ack 5 3)\n");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.prob");
    std::fs::write(&bad, "[ring]\nderivations = 2\nindeterminates = y1\nfield = Q\n[system]\nF = y1[1,0,1]\n").unwrap();
    let out = run(&["min-order", bad.to_str().unwrap(), "--h-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 6, column 5"), "{err}");
    assert!(err.contains("multi-index of 'y1' has 3 entries but the ring has 2 derivations"), "{err}");

    std::fs::write(&bad, "[ring]\nderivations = 1\nindeterminates = y\nfield = Q\n[system]\nF = y +\n").unwrap();
    assert_eq!(run(&["bound", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["min-order", "/nonexistent.prob", "--h-max", "1"]).status.code(), Some(2));
    assert_eq!(run(&["min-order", &fx("ex1_k2")]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["min-order", "--h-max", "5"],
        &["decompose", "--verify"],
        &["bound"],
    ];
    for args in cases {
        let mut files = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{}_{i}.json", args[0]));
            let mut full = vec!["--json", path.to_str().unwrap(), args[0]];
            let file = fx("ex3_n2");
            full.push(&file);
            full.extend_from_slice(&args[1..]);
            assert_eq!(run(&full).status.code(), Some(0), "{args:?}");
            files.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn decompose_writes_verified_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let (code, _, r) = run_json(&["decompose", &fx("ex3_n2"), "--verify", "--trace", trace.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = &r["results"]["verify"];
    assert_eq!(v["dicksonian"], true);
    assert_eq!(v["degree_growth"], true);
    assert_eq!(v["stuck"], 0);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["schema"], 1);
    assert_eq!(Value::from(t["iterations"].as_array().unwrap().len()), r["results"]["iterations"]);
    assert!(!t["components"].as_array().unwrap().is_empty());

    let out = run(&["decompose", &fx("ex3_n2"), "--max-iterations", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bound_reports_symbolic_entries() {
    let (code, stdout, r) = run_json(&["bound", &fx("ex1_k2")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("(ack 8 511)"), "{stdout}");
    let entries = r["results"]["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["exact"] == false));
}

#[test]
fn dickson_subcommands() {
    let (code, _, r) = run_json(&["dickson", "check", "[[2,0],[1,1],[0,5]]"]);
    assert_eq!((code, &r["results"]["dicksonian"]), (0, &Value::Bool(true)));
    let (_, _, r) = run_json(&["dickson", "check", "[[1,1],[2,2]]"]);
    assert_eq!(r["results"]["dicksonian"], false);

    let (code, _, r) = run_json(&["dickson", "search", r#"{"affine":{"a":1,"b":0}}"#, "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["length"], 8);
    assert_eq!(r["results"]["conclusive"], true);
    let out = run(&["dickson", "search", r#"{"affine":{"a":2,"b":2}}"#, "--n", "2", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));

    let (code, stdout, _) = run_json(&["dickson", "pad", "[[2],[1]]", "--f", r#"{"table":[2,3]}"#, "--d", "2"]);
    assert_eq!((code, stdout.as_str()), (0, "[[2,2,2],[1,3,3]]\n"));
    let out = run(&["dickson", "pad", "[[1,1],[2,2]]", "--f", r#"{"table":[2,3]}"#, "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example_command_regenerates_fixtures() {
    let cases = [
        ("ex1", [2, 3, 4].as_slice()),
        ("ex2", &[1, 2, 3]),
        ("ex3", &[1, 2, 3]),
        ("ex4", &[1, 2]),
    ];
    let dir = tempfile::tempdir().unwrap();
    for (family, params) in cases {
        for p in params {
            let slug = match family {
                "ex1" => format!("ex1_k{p}"),
                "ex4" => format!("ex4_m{p}"),
                _ => format!("{family}_n{p}"),
            };
            let want = std::fs::read_to_string(fixture(&slug)).unwrap();
            let out = run(&["example", family, &p.to_string()]);
            assert_eq!(out.status.code(), Some(0));
            assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{slug}");
            let path = dir.path().join(format!("{slug}.prob"));
            assert_eq!(run(&["example", family, &p.to_string(), "-o", path.to_str().unwrap()]).status.code(), Some(0));
            assert_eq!(std::fs::read_to_string(&path).unwrap(), want, "{slug}");
        }
    }
    assert_eq!(run(&["example", "ex5", "1"]).status.code(), Some(2));
    assert_eq!(run(&["example", "ex1", "0"]).status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let (_, _, r) = run_json(&["--timing", "ackermann", "2", "3"]);
    assert!(r["timing_ms"].is_u64());
}
