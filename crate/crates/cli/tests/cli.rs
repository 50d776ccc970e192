use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn g5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g5")).args(args).env_remove("G5_THREADS").output().expect("g5 runs")
}

fn run_json(args: &[&str], expected_exit: i32) -> Value {
    let out = g5(args);
    assert_eq!(out.status.code(), Some(expected_exit), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("manifest is JSON")
}

fn exit_code(args: &[&str]) -> i32 {
    g5(args).status.code().expect("exit code")
}

#[test]
fn recurrence_solutions() {
    let m = run_json(&["recurrence", "--n-max", "100"], 0);
    assert_eq!(m["schema"], 1);
    assert_eq!(m["command"], "recurrence");
    assert_eq!(m["verdict"], "pass");
    assert_eq!(m["payload"]["solutions"], serde_json::json!([1, 2, 7]));
    assert_eq!(m["payload"]["minus_one_solutions"], serde_json::json!([]));
}

#[test]
fn scan_disc_small_range() {
    let m = run_json(&["scan-disc", "--d", "-19", "--q-max", "350"], 0);
    assert_eq!(m["payload"]["qs"], serde_json::json!([47, 61, 137, 277, 311, 347]));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(exit_code(&["trigonal", "--q", "12"]), 2);
    assert_eq!(exit_code(&["trigonal", "--q", "47"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2);
    assert_eq!(exit_code(&["recurrence", "--n-max", "100", "--bogus"]), 2);
    assert_eq!(exit_code(&["reduce", "--q", "13"]), 2);
    assert_eq!(exit_code(&["strassmann", "--precision", "10", "--kmax", "5"]), 2);
    assert_eq!(exit_code(&["quadric-count", "--q", "11", "--case", "1", "--coeffs", "1,2,3"]), 2);
    assert_eq!(exit_code(&["quadric-count", "--q", "11", "--case", "3", "--coeffs", "1,1,1,1,1,1,1,1,1"]), 2);
}

#[test]
fn budget_and_precision_exit_codes() {
    assert_eq!(exit_code(&["quadric-count", "--q", "401", "--case", "1", "--coeffs", "1,1,1,1,1,1,1,1,1"]), 3);
    assert_eq!(exit_code(&["strassmann", "--precision", "1", "--kmax", "3"]), 4);
}

#[test]
fn hermitian_verify_reports_failed_isometry() {
    // R and S do not preserve H_1 under any reading of the printed matrix
    let m = run_json(&["hermitian-verify"], 1);
    let p = &m["payload"];
    assert_eq!(m["verdict"], "fail");
    assert_eq!(p["frozen"], Value::Null);
    assert_eq!(p["h1_diagonal"], serde_json::json!([[3, 0], [3, 0], [3, 0], [4, 0], [5, 0]]));
    assert_eq!(p["trace_r"], serde_json::json!([0, 0]));
    assert_eq!(p["rs_group"]["order"], 10);
    assert_eq!(p["rs_minus_group"]["order"], 20);
}

#[test]
fn reduce_over_f61() {
    let m = run_json(&["reduce", "--q", "61"], 0);
    let choices = m["payload"]["choices"].as_array().unwrap();
    assert_eq!(choices.len(), 2);
    for c in choices {
        assert_eq!(c["charpoly_r"], serde_json::json!([[60], [0], [0], [0], [0], [1]]));
        assert_eq!(c["rsr_equals_s"], true);
    }
}

#[test]
fn number_theory_commands() {
    let d = run_json(&["diophantine", "--n-max", "40"], 0);
    let ns: Vec<u64> = d["payload"]["solutions"].as_array().unwrap().iter().map(|s| s["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![1, 2, 7]);
    let s = run_json(&["strassmann", "--precision", "10", "--kmax", "12"], 0);
    assert_eq!(s["payload"]["valuation_c_1_2"], 1);
    assert_eq!(s["payload"]["valuation_c_2_1"], 2);
    run_json(&["pgl3", "--q-max", "2000"], 0);
    let t = run_json(&["singular-triple", "--q", "47"], 0);
    assert_eq!(t["payload"]["e"], 4);
}

#[test]
fn quadric_commands() {
    let c = run_json(&["quadric-count", "--q", "11", "--case", "2", "--coeffs", "1,2,3,4,5,6,7,8,9"], 0);
    assert!(c["payload"]["count"].as_u64().is_some());
    assert_eq!(c["payload"]["n_max"], 42);
    let s = run_json(&["quadric-search", "--q", "11", "--case", "1", "--samples", "3", "--seed", "7"], 0);
    assert_eq!(s["payload"]["samples"], 3);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = g5(&["pgl3", "--q-max", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let m: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["command"], "pgl3");
}

#[test]
fn payloads_round_trip() {
    for args in [
        vec!["recurrence", "--n-max", "30"],
        vec!["hermitian-verify"],
        vec!["reduce", "--q", "11"],
        vec!["trigonal", "--q", "11"],
        vec!["strassmann"],
    ] {
        let out = g5(&args);
        let m: Value = serde_json::from_slice(&out.stdout).unwrap();
        let text = serde_json::to_string(&m["payload"]).unwrap();
        let again: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), text, "{args:?}");
    }
}

#[test]
fn digests_ignore_timestamps_and_threads() {
    let a = run_json(&["trigonal", "--q", "61", "--threads", "1"], 0);
    let b = Command::new(env!("CARGO_BIN_EXE_g5"))
        .args(["trigonal", "--q", "61"])
        .env("G5_THREADS", "3")
        .output()
        .unwrap();
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(a["payload"]["table_digest"], b["payload"]["table_digest"]);
    assert_eq!(a["digest"], b["digest"]);
    assert_eq!(a["payload"]["max_adjusted"], 112);
    assert_eq!(a["payload"]["n_max"], 137);
}

fn checkpoint_file(dir: &Path) -> std::path::PathBuf {
    let entries: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    entries[0].clone()
}

#[test]
fn checkpoint_resume_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().to_str().unwrap();
    let full = run_json(&["trigonal", "--q", "61"], 0);

    let partial = run_json(&["trigonal", "--q", "61", "--checkpoint", ck, "--stop-after", "9"], 4);
    assert_eq!(partial["payload"]["completed_chunks"], 9);
    let resumed = run_json(&["trigonal", "--q", "61", "--checkpoint", ck, "--threads", "2"], 0);
    assert_eq!(resumed["payload"]["table_digest"], full["payload"]["table_digest"]);

    // flip one payload value in chunk 4
    let path = checkpoint_file(dir.path());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: Value = serde_json::from_str(&lines[5]).unwrap();
    assert_eq!(rec["chunk_id"], 4);
    let old = rec["payload"][0][0].as_u64().unwrap();
    rec["payload"][0][0] = Value::from(old + 1);
    lines[5] = rec.to_string();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = g5(&["trigonal", "--q", "61", "--checkpoint", ck]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chunk 4"));
}
