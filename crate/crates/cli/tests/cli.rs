use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn hres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hres")).args(args).output().expect("spawn hres")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}

#[test]
fn residue_of_dt_over_t() {
    let out = hres(&["res", "--n", "1", "t^-1 d(t)"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out), json!({"value": "1"}));
}

#[test]
fn residue_in_two_variables() {
    let out = hres(&["res", "--n", "2", "t1^-1*t2^-1 d(t1) ^ d(t2)"]);
    assert_eq!(stdout_json(&out), json!({"value": "1"}));
    let out = hres(&["res", "--n", "2", "t1^-1*t2^-1 d(t2) ^ d(t1)"]);
    assert_eq!(stdout_json(&out), json!({"value": "-1"}));
}

#[test]
fn residue_over_gaussian_rationals() {
    let out = hres(&["res", "--n", "1", "--ext", "x^2+1", "t^-1 d(t)"]);
    assert_eq!(stdout_json(&out), json!({"value": "2"}));
    let out = hres(&["res", "--n", "1", "--ext", "x^2+1", "(x)*t^-1 d(t)"]);
    assert_eq!(stdout_json(&out), json!({"value": "0"}));
}

#[test]
fn trace_subcommand() {
    let op = r#"[{"coeff": "1", "shift": [0, 0], "window": [[0, 2], [-1, 1]]}]"#;
    let out = hres(&["trace", op]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out), json!({"value": "4"}));
}

#[test]
fn expand_subcommand() {
    let out = hres(&["expand", "--place", "t", "--order", "2", "(t+1)/t^2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["series"], "u^-2 + u^-1 + O(u^2)");
    assert_eq!(v["parameter"], "t");
}

#[test]
fn global_sum_subcommand() {
    let out = hres(&["global-sum", "(t^3+2)/((t-1)*(t^2+1))"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["sum"], "0");
    let places = v["places"].as_array().unwrap();
    assert!(places.iter().any(|p| p["degree"] == 2));
    assert!(places.iter().any(|p| p["place"] == "inf"));
}

#[test]
fn verify_suites_report_no_failures() {
    for suite in ["axioms", "compare", "global", "nodal"] {
        let out = hres(&["verify", "--suite", suite, "--cases", "5", "--seed", "11"]);
        let v = stdout_json(&out);
        assert_eq!(v["suite"], suite);
        assert_eq!(v["failures"], json!([]), "{suite}");
        assert!(out.status.success());
    }
}

#[test]
fn nodal_subcommand() {
    let out = hres(&["nodal", "--order", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out), json!({"ok": true}));
}

#[test]
fn unknown_flag_is_an_error() {
    let out = hres(&["res", "--n", "1", "--bogus", "t^-1 d(t)"]);
    assert!(!out.status.success());
    assert!(stdout_json(&out).get("error").is_some());
}

#[test]
fn library_errors_are_reported_as_json() {
    for args in [
        &["res", "--n", "1", "t1^^2 d(t1)"][..],
        &["res", "--n", "1", "--ext", "x^2-1", "t^-1 d(t)"],
        &["trace", r#"[{"coeff": "1", "shift": [0], "window": [["-inf", "inf"]]}]"#],
        &["trace", "not json"],
        &["expand", "--place", "t^2-1", "--order", "1", "1/t"],
        &["verify", "--suite", "everything"],
        &[],
    ] {
        let out = hres(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stdout_json(&out)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn parse_errors_carry_offsets() {
    let out = hres(&["res", "--n", "1", "t1^^2 d(t1)"]);
    let msg = stdout_json(&out)["error"].as_str().unwrap().to_string();
    assert!(msg.contains("byte 3"), "{msg}");
}

#[test]
fn batch_mode_preserves_order() {
    let dir = std::env::temp_dir().join(format!("hres-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tasks.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    let tasks = [
        json!({"op": "res", "n": 1, "form": "t^-1 d(t)"}),
        json!({"op": "global-sum", "rf": "1/(t^2+1)"}),
        json!({"op": "nodal", "order": 12}),
        json!({"op": "res", "n": 2, "form": "t1^-2*t2^-1 d(t1) ^ d(t2)"}),
        json!({"op": "verify", "suite": "global", "cases": 3, "seed": 1}),
    ];
    for t in &tasks {
        writeln!(f, "{t}").unwrap();
    }
    drop(f);
    let out = hres(&["--json-lines", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), tasks.len());
    for (line, task) in lines.iter().zip(&tasks) {
        assert_eq!(line["op"], task["op"]);
    }
    assert_eq!(lines[0]["result"], "1");
    assert_eq!(lines[1]["result"], "0");
    assert_eq!(lines[1]["per_place"].as_array().unwrap().len(), 2);
    assert_eq!(lines[2]["result"], true);
    assert_eq!(lines[3]["result"], "0");
    assert_eq!(lines[4]["result"]["failures"], json!([]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_errors_are_per_line() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hres"))
        .args(["--json-lines", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"{\"op\":\"res\",\"n\":1,\"form\":\"t^-1 d(t)\"}\n{\"op\":\"frobnicate\"}\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let lines: Vec<Value> =
        String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["result"], "1");
    assert!(lines[1]["error"].is_string());
}
