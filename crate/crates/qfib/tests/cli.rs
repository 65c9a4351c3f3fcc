//! End-to-end tests of the qfib binary: flags, exit codes, JSON reports,
//! batch mode, certificate round trips.

use std::io::Write;
use std::process::{Command, Stdio};

fn qfib(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_qfib"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn analyze_standard_example() {
    let (out, _, code) = qfib(&["analyze", "--p", "1,0,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("UNIV_CH0_TRIVIAL"));
    assert!(out.contains("criterion-a"));
}

#[test]
fn analyze_diagonal_counterexample() {
    let (out, _, code) = qfib(&["analyze", "--diagonal", "1;1+u^2;-u;-u", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["result"]["status"], "NOT_UNIV_CH0_TRIVIAL");
    assert!(v["evidence"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["criterion"] == "brauer"));
}

#[test]
fn hilbert_example() {
    let (out, _, code) = qfib(&["hilbert", "--a", "-1", "--b", "-3", "--place", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("-1"));
}

#[test]
fn exit_codes() {
    // malformed input
    let (_, err, code) = qfib(&["jinv", "--p", "nope"]);
    assert_eq!(code, 2, "stderr: {err}");
    // precondition violation (non-quadratic p)
    let (_, _, code) = qfib(&["jinv", "--p", "0,1,0,1"]);
    assert_eq!(code, 3);
    // unknown command
    let (_, _, code) = qfib(&["frobnicate"]);
    assert_eq!(code, 2);
    // no arguments prints usage
    let (_, err, code) = qfib(&[]);
    assert_eq!(code, 2);
    assert!(err.contains("usage"));
}

#[test]
fn reports_are_stable_modulo_timing() {
    let (a, _, _) = qfib(&["analyze", "--p", "1,0,1", "--json"]);
    let (b, _, _) = qfib(&["analyze", "--p", "1,0,1", "--json"]);
    let mut va: serde_json::Value = serde_json::from_str(a.trim()).unwrap();
    let mut vb: serde_json::Value = serde_json::from_str(b.trim()).unwrap();
    va["timing_us"] = 0.into();
    vb["timing_us"] = 0.into();
    assert_eq!(va.to_string(), vb.to_string());
}

#[test]
fn certificate_round_trip_through_files() {
    let dir = std::env::temp_dir().join("qfib-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cert_path = dir.join("cert.json");
    let cert_file = cert_path.to_str().unwrap();

    let (_, err, code) = qfib(&["certify", "--p", "1,1,1", "--out", cert_file]);
    assert_eq!(code, 0, "stderr: {err}");
    let (out, err, code) = qfib(&["verify-cert", "--file", cert_file]);
    assert_eq!(code, 0, "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["criterion_a"], true);
    assert_eq!(v["u_plus_v"], true);

    // tampering must be caught
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    doc["u_plus_v"]["entries"][0]["weight"] = "2".into();
    let bad_path = dir.join("bad.json");
    std::fs::write(&bad_path, doc.to_string()).unwrap();
    let (out, _, code) = qfib(&["verify-cert", "--file", bad_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["u_plus_v"], false);
}

#[test]
fn batch_mode_preserves_order_and_isolates_errors() {
    let requests = r#"{"command":"jinv","p":"1,0,1"}
{"command":"nope"}
{"command":"hilbert","a":"-1","b":"-3","place":"3"}
"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_qfib"))
        .args(["batch", "--file", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(requests.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["result"]["j"], "1728");
    assert_eq!(lines[1]["result"]["exit_code"], 2);
    assert_eq!(lines[2]["result"]["symbol"], -1);
}

#[test]
fn residues_profile_output() {
    let (out, _, code) = qfib(&["residues", "--f", "-1", "--g", "0,1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["profile"]["0"], "nontrivial");
    assert_eq!(v["profile"]["inf"], "nontrivial");
    assert_eq!(v["nontrivial"], 2);
}

#[test]
fn pencil_subcommand() {
    let f = "1 0 0 0 0 0 1 0 0 0 0 1 0 0 0 1 0 0 1 0 1";
    let g = "0 0 0 0 0 0 1 0 0 0 0 2 0 0 0 3 0 0 4 0 5";
    let (out, _, code) = qfib(&["pencil", "--f", f, "--g", g]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["separable"], true);
    assert_eq!(v["delta"]["genus"], 2);
    assert_eq!(v["sextic"][1], "120");
    // degenerate input maps to a precondition exit
    let zero = "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0";
    let (_, _, code) = qfib(&["pencil", "--f", zero, "--g", zero]);
    assert_eq!(code, 3);
}

#[test]
fn batch_handles_a_thousand_analyses_in_budget() {
    let mut requests = String::new();
    let mut state = 0x51u64;
    let mut next = move |m: i64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
        ((state >> 33) as i64).rem_euclid(m)
    };
    let mut n = 0;
    while n < 1000 {
        let a = next(19) - 9;
        let b = next(9) + 1 + (a * a) / 4;
        if a * a == 4 * b {
            continue;
        }
        requests.push_str(&format!(
            "{{\"command\":\"analyze\",\"p\":\"{b},{a},1\"}}\n"
        ));
        n += 1;
    }
    let start = std::time::Instant::now();
    let mut child = Command::new(env!("CARGO_BIN_EXE_qfib"))
        .args(["batch", "--file", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(requests.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let dt = start.elapsed();
    assert_eq!(out.status.code(), Some(0));
    let lines = String::from_utf8_lossy(&out.stdout).lines().count();
    assert_eq!(lines, 1000);
    assert!(dt.as_secs_f64() < 60.0, "batch of 1000 took {dt:?}");
}

#[test]
fn prime_budget_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_qfib"))
        .args(["zarhin", "--f", "-1,-1,0,0,0,1", "--json"])
        .env("QFIB_PRIME_BUDGET", "1")
        .output()
        .unwrap();
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    // with a single prime the certificate cannot complete
    assert_eq!(v["result"]["result"], "inconclusive");
}
