//! Black-box tests of the `omin` binary.

use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_omin");

const ASA_INSTANCE: &str = "0 4\n1 3\n2 5\n3 6\n4 2\n5 1\n6 0\n7 7\n";
const RSA_INSTANCE: &str = "0 5\n1 1\n2 3\n3 6\n4 0\n5 2\n6 4\n7 7\n";

fn write_file(content: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(content.as_bytes()).unwrap();
    file
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut command = Command::new(BIN);
    command.args(args).env_remove("OMIN_SEED");
    for (key, value) in env {
        command.env(key, value);
    }
    command.output().expect("failed to spawn omin")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn route_prints_the_path() {
    let out = stdout(&run(&["route", "--src", "0", "--dst", "0", "--size", "8"]));
    assert!(out.contains("links: 000 000 000 000"));
    let out = stdout(&run(&["route", "--src", "5", "--dst", "3"]));
    assert!(out.contains("network: 8 ports, 3 stages"));
    assert!(out.contains("route: 101 -> 011"));
}

#[test]
fn schedule_asa_reports_the_expected_passes() {
    let file = write_file(ASA_INSTANCE);
    let out = stdout(&run(&[
        "schedule",
        file.path().to_str().unwrap(),
        "--algo",
        "asa",
    ]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["algorithm"], "asa");
    assert_eq!(doc["mode"], "paper");
    assert_eq!(
        doc["passes"],
        serde_json::json!([[1, 2, 4, 7], [5, 6, 0, 3]])
    );
    assert_eq!(doc["metrics"]["pass_count"], 2);
}

#[test]
fn schedule_strict_mode_and_text_format() {
    let file = write_file(ASA_INSTANCE);
    let out = stdout(&run(&[
        "schedule",
        file.path().to_str().unwrap(),
        "--algo",
        "asa",
        "--mode",
        "strict",
        "--format",
        "text",
    ]));
    assert!(out.contains("mode: strict"));
    assert!(out.contains("pass 1:"));
}

#[test]
fn analyze_counts_the_known_conflicts() {
    let file = write_file(RSA_INSTANCE);
    let out = stdout(&run(&[
        "analyze",
        file.path().to_str().unwrap(),
        "--format",
        "json",
    ]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["link"]["total"], 4);
    assert_eq!(doc["windows"]["matches_oracle"], true);

    let text = stdout(&run(&["analyze", file.path().to_str().unwrap()]));
    assert!(text.contains("link conflicts: 4 occurrences"));

    let csv = stdout(&run(&[
        "analyze",
        file.path().to_str().unwrap(),
        "--format",
        "csv",
    ]));
    assert!(csv.starts_with("kind,slot,unit,source_a,source_b\n"));
}

#[test]
fn bench_is_deterministic_and_honours_the_seed_env() {
    let args = [
        "bench",
        "--sizes",
        "8",
        "--trials",
        "2",
        "--no-timing",
        "--seed",
        "5",
    ];
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_eq!(first, second);
    assert!(first.starts_with("algorithm,N,seed,trial"));

    let via_env = stdout(&run_with_env(
        &["bench", "--sizes", "8", "--trials", "2", "--no-timing"],
        &[("OMIN_SEED", "5")],
    ));
    assert_eq!(via_env, first);

    // an explicit flag wins over the environment
    let flag_wins = stdout(&run_with_env(&args, &[("OMIN_SEED", "9")]));
    assert_eq!(flag_wins, first);

    let bad_env = run_with_env(
        &["bench", "--sizes", "8", "--trials", "1"],
        &[("OMIN_SEED", "not-a-number")],
    );
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn bench_writes_the_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    let out = stdout(&run(&[
        "bench",
        "--sizes",
        "8",
        "--trials",
        "1",
        "--seed",
        "1",
        "--algos",
        "wm,asa",
        "--out",
        path.to_str().unwrap(),
    ]));
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("\nwm,8,"));
    assert!(csv.contains("\nasa,8,"));
}

#[test]
fn dot_emits_graphviz() {
    let out = stdout(&run(&["dot"]));
    assert!(out.starts_with("digraph omega"));
    let file = write_file(RSA_INSTANCE);
    let overlay = stdout(&run(&["dot", file.path().to_str().unwrap()]));
    assert!(overlay.contains("penwidth=2]"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(
        run(&["route", "--src", "0", "--dst", "1", "--size", "12"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["analyze", "/nonexistent/messages.txt"]).status.code(),
        Some(1)
    );

    let file = write_file("0 0\n1 1\n2 2\n3 3\n");
    let small = run(&[
        "schedule",
        file.path().to_str().unwrap(),
        "--algo",
        "asa",
        "--size",
        "4",
    ]);
    assert_eq!(small.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&small.stderr);
    assert!(stderr.starts_with("error: "), "stderr was: {stderr}");
}

#[test]
fn malformed_message_files_name_the_line() {
    let file = write_file("0 1\n1 2 3\n");
    let out = run(&["analyze", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr was: {stderr}");
}
