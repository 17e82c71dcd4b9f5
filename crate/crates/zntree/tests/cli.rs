//! End-to-end runs of the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zntree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zntree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn eval_prints_normal_form() {
    let o = zntree(&["eval", "a * b * b^-1"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains('a'));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&zntree(&["--bogus"])), 64);
    assert_eq!(code(&zntree(&["tree"])), 64);
    assert_eq!(code(&zntree(&["--help"])), 0);
    assert_eq!(code(&zntree(&["eval", "a * * b"])), 2);
    assert_eq!(code(&zntree(&["--workspace", "/nonexistent.json", "eval", "a"])), 2);
    assert_eq!(code(&zntree(&["strip", "count", "--end-a", "a^+inf", "--end-b", "a^+inf"])), 2);
}

#[test]
fn walk_run_is_byte_identical_under_a_seed() {
    let run = |dir: &Path, threads: &str| {
        let o = zntree(&[
            "--seed", "11", "--threads", threads, "--out", dir.to_str().unwrap(),
            "walk", "run", "--walks", "40", "--steps", "800",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    let (a, b) = (scratch("walk_a"), scratch("walk_b"));
    run(&a, "1");
    run(&b, "2");
    for f in ["walks.csv", "cones.csv", "residuals.csv", "summary.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert!(!x.is_empty(), "{f} empty");
        assert_eq!(x, std::fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn tree_explore_writes_histogram() {
    let dir = scratch("tree");
    let o = zntree(&[
        "--workspace", "notmin", "--out", dir.to_str().unwrap(), "tree", "explore", "--depth", "3",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("class_histogram.csv")).unwrap();
    assert!(csv.lines().count() >= 2);
}

#[test]
fn metric_pair_and_strip_count() {
    let dir = scratch("metric");
    let out = dir.to_str().unwrap();
    let o = zntree(&["--out", out, "metric", "pair", "a b", "a b^-1", "--depth", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("distance"));
    let o = zntree(&[
        "--out", out, "strip", "count", "--end-a", "a^-inf", "--end-b", "a^+inf", "--kmax", "5",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("strip.csv")).unwrap();
    // Axis counts 2k+1.
    for k in 1..=5u32 {
        let want = (2 * k + 1).to_string();
        let row = csv.lines().find(|l| l.split(',').next() == Some(&k.to_string())).unwrap();
        assert_eq!(row.split(',').nth(1), Some(want.as_str()), "{row}");
    }
}
