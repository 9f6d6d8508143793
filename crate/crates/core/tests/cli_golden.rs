//! Runs the `tensordual` binary over `tests/golden/*.json` and compares exit
//! codes and reports with the snapshots in `tests/golden/expected/`.
//! Set `UPDATE_GOLDEN=1` to rewrite the snapshots.

mod common;

use std::process::Command;

use common::{golden_dir, run_cli as run, CORPUS};

#[test]
fn corpus_exit_codes_and_snapshots() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let expected_dir = golden_dir().join("expected");
    for &(name, cmd, code) in CORPUS {
        let input = golden_dir().join(format!("{name}.json"));
        let (got, report) = run(cmd, &input, &[]);
        assert_eq!(got, code, "{name}: exit code\n{report}");
        assert!(report.ends_with('\n') && !report.contains('\r'), "{name}: LF-terminated report");
        let snap = expected_dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&snap, &report).unwrap();
        } else {
            let want = std::fs::read_to_string(&snap).unwrap_or_else(|_| panic!("missing snapshot {}", snap.display()));
            assert_eq!(report, want, "{name}: report differs from snapshot");
        }
    }
}

#[test]
fn reports_are_byte_deterministic() {
    for &(name, cmd, _) in CORPUS {
        let input = golden_dir().join(format!("{name}.json"));
        let a = run(cmd, &input, &[]);
        let b = run(cmd, &input, &[]);
        assert_eq!(a, b, "{name}");
        let seq = run(cmd, &input, &["--sequential"]);
        assert_eq!(a, seq, "{name}: sequential run differs");
    }
}

#[test]
fn witnesses_and_certificates_recheck() {
    for &(name, cmd, code) in CORPUS {
        let input = golden_dir().join(format!("{name}.json"));
        let (got, report) = run(cmd, &input, &["--check-witness"]);
        assert_eq!(got, code, "{name}: {report}");
        if code != 2 {
            let v: serde_json::Value = serde_json::from_str(&report).unwrap();
            assert_eq!(v["witness_check"], "passed", "{name}");
        }
    }
}

#[test]
fn every_command_has_both_outcomes() {
    for cmd in ["snf", "group", "tensor", "dual-check", "decompose", "reduce", "polar", "verify"] {
        let codes: Vec<i32> = CORPUS.iter().filter(|c| c.1 == cmd).map(|c| c.2).collect();
        assert!(codes.contains(&0), "{cmd} lacks an affirmative case");
        assert!(codes.iter().any(|&c| c != 0), "{cmd} lacks a negative case");
    }
}

#[test]
fn input_errors_name_the_field() {
    let (code, report) = run("snf", &golden_dir().join("snf_ragged.json"), &[]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["error"]["path"], "$.matrix[1]");
    let (_, report) = run("snf", &golden_dir().join("bad_syntax.json"), &[]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(v["error"]["path"].as_str().unwrap().starts_with("line 3"));
}

#[test]
fn unknown_command_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_tensordual")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
