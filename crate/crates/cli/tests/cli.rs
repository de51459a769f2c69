// Copyright contributors to the qhf project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end tests of the `qhf` binary: exit-code contract, report
//! formats, env-variable guard overrides, and emission/re-ingestion.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qhf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qhf_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qhf"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("qhf-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn balanced_exit_codes_and_text() {
    let out = qhf(&["balanced", "x1 & x2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "#SAT=1, beta=1/2, balanced=false\n");

    let out = qhf(&["balanced", "x1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "#SAT=1, beta=0, balanced=true\n");
}

#[test]
fn balanced_json_mode() {
    let out = qhf(&["balanced", "x1 & x2", "--output", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["balanced"], serde_json::json!(false));
    assert_eq!(value["beta"], serde_json::json!("1/2"));
    assert_eq!(value["sat"]["count_sat"], serde_json::json!(1));
}

#[test]
fn parse_reports_ast() {
    let out = qhf(&["parse", "x1 & x2 | x3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n_vars: 3"));
    assert!(text.contains("canonical: x1 & x2 | x3"));

    let out = qhf(&["parse", "x1 &"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimacs_input() {
    let path = tmp_path("clauses.cnf");
    std::fs::write(&path, "c test\np cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
    let out = qhf(&["balanced", "--dimacs", path.to_str().unwrap()]);
    // XOR-like CNF: (x1|x2) & (!x1|!x2) has 2 of 4 models.
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("balanced=true"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_reduction_reports() {
    let out = qhf(&["verify-reduction", "x1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("balanced: yes"));
    assert!(text.contains("biconditional holds: yes"));

    let out = qhf(&["verify-reduction", "x1 & x2", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["balanced"], serde_json::json!(false));
    assert_eq!(value["biconditional_holds"], serde_json::json!(true));
    assert_eq!(
        value["identity_initialized"]["holds"],
        serde_json::json!(false)
    );
    assert_eq!(value["superposition"]["holds"], serde_json::json!(true));
}

#[test]
fn sweep_summary_and_determinism() {
    let first = qhf(&["sweep", "1"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(
        stdout(&first),
        "n = 1: 4 functions, 2 balanced, 2 unbalanced\n\
         biconditional holds: 4/4\n\
         promise respected: 4/4\n"
    );
    let second = qhf(&["sweep", "1"]);
    assert_eq!(stdout(&first), stdout(&second));

    let out = qhf(&["sweep", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emitted_circuits_reingest() {
    let native = tmp_path("dj.qc");
    let out = qhf(&["dj", "x1 & x2", "--out", native.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // The DJ circuit composed once is not identity; simulating works.
    let out = qhf(&["simulate", native.to_str().unwrap(), "--input", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sqrt2"));

    let out = qhf(&["count", native.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("gates: total="));

    // qasm2 emission re-ingests through the sniffer.
    let qasm = tmp_path("dj.qasm");
    let out = qhf(&[
        "dj",
        "x1 & x2",
        "--format",
        "qasm2",
        "--out",
        qasm.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = qhf(&["count", qasm.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    std::fs::remove_file(&native).ok();
    std::fs::remove_file(&qasm).ok();
}

#[test]
fn check_identity_and_detect_on_reduction() {
    let balanced = tmp_path("red-balanced.qc");
    let out = qhf(&["reduce", "x1", "--out", balanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = qhf(&["check-identity", balanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds"));

    let unbalanced = tmp_path("red-and.qc");
    let out = qhf(&["reduce", "x1 & x2", "--out", unbalanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = qhf(&["check-identity", unbalanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = qhf(&["detect", unbalanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("superposition: detected"));
    assert!(text.contains("non-affine correlation: detected"));

    std::fs::remove_file(&balanced).ok();
    std::fs::remove_file(&unbalanced).ok();
}

#[test]
fn lower_emits_h_tof_only() {
    let src = tmp_path("to-lower.qc");
    let out = qhf(&["reduce", "x1 | x2", "--out", src.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = qhf(&["lower", src.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines() {
        let head = line.split_whitespace().next().unwrap_or("");
        assert!(
            matches!(head, "qubits" | "role" | "reg" | "h" | "ccx" | ""),
            "unexpected line `{line}`"
        );
    }
    std::fs::remove_file(&src).ok();
}

#[test]
fn strict_h_tof_flag_on_emission() {
    let out = qhf(&["reduce", "x1 & x2", "--strict-h-tof"]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines() {
        let head = line.split_whitespace().next().unwrap_or("");
        assert!(matches!(head, "qubits" | "role" | "reg" | "h" | "ccx" | ""));
    }
}

#[test]
fn missing_circuit_file_is_usage_error() {
    let out = qhf(&["check-identity", "--semantics", "full", "missing.qasm"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qhf(&[
        "check-identity",
        "--semantics",
        "full",
        "missing.qasm",
        "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(value["error"]["message"].is_string());
}

#[test]
fn env_guard_overrides() {
    let out = qhf_env(&["balanced", "x1 & x2"], &[("QHF_MAX_FORMULA_VARS", "1")]);
    assert_eq!(out.status.code(), Some(2));

    let out = qhf_env(&["balanced", "x1 & x2"], &[("QHF_MAX_FORMULA_VARS", "0")]);
    assert_eq!(out.status.code(), Some(2));

    let out = qhf_env(&["balanced", "x1 & x2"], &[("QHF_MAX_FORMULA_VARS", "2")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_formula_is_usage_error() {
    let out = qhf(&["balanced"]);
    assert_eq!(out.status.code(), Some(2));
}
