//! The `crystalcalc` binary: exit codes, report files, thread bounds.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystalcalc")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crystalcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn compare_passes() {
    let out = bin(&["compare", "--algebra", "gm", "--p", "3", "--N", "2", "--D", "4", "--E", "3", "--M", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("schema: crystalcalc/1\nverb: compare\n"));
    assert!(text.contains("completion: implicit mod p^N\n"));
    assert!(text.contains("cell: degree=1 graded=0 dr=Z/3^2 cris=Z/3^2\n"));
}

#[test]
fn missing_p_exits_2() {
    assert_eq!(bin(&["compare", "--algebra", "gm"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate", "--p", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["known", "--algebra", "ell-3-1-2", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn incongruent_lifts_exit_1_with_witness() {
    let a = scratch("id.morph", "schema: crystalcalc/1\nimage: x = x\nimage: y = y\n");
    let b = scratch("double.morph", "schema: crystalcalc/1\nimage: x = 2*x\nimage: y = 2*y\n");
    let out = bin(&[
        "homotopy",
        "--algebra",
        "gm",
        "--p",
        "3",
        "--N",
        "2",
        "--phi1",
        a.to_str().unwrap(),
        "--phi2",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: fail\nwitness: "), "{text}");
}

#[test]
fn report_file_and_thread_bound() {
    let dir = std::env::temp_dir().join(format!("crystalcalc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let args = ["cris", "--algebra", "a1", "--p", "2", "--N", "3", "--E", "5"];
    let mut reports = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.join(format!("cris-{threads}.txt"));
        let out = Command::new(env!("CARGO_BIN_EXE_crystalcalc"))
            .args(args)
            .args(["--out", path.to_str().unwrap()])
            .env("CRYSTALCALC_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let bad = Command::new(env!("CARGO_BIN_EXE_crystalcalc")).args(args).env("CRYSTALCALC_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
