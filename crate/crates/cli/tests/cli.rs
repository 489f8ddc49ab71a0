//! End-to-end tests of the `invfp` binary: golden outputs, exit codes, and
//! byte-identical reruns.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn invfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invfp"))
        .args(args)
        .env_remove("INVFP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn invfp_with_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invfp"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Fresh scratch directory under the target-level temp dir.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invfp-test-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

#[test]
fn enumerate_golden_rows() {
    let out = invfp(&["enumerate", "--pattern", "231", "--n", "3", "--involutions"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "fp,count\n1,3\n3,1\n");
}

#[test]
fn enumerate_empty_permutation() {
    let out = invfp(&["enumerate", "--pattern", "231", "--n", "0", "--involutions"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "fp,count\n0,1\n");
}

#[test]
fn enumerate_full_symmetric_group() {
    // All of S_3 avoiding 4321 vacuously: 3! = 6 permutations, fp counts
    // 0 (two 3-cycles), 1 (three transpositions), 3 (identity).
    let out = invfp(&["enumerate", "--pattern", "4321", "--n", "3"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "fp,count\n0,2\n1,3\n3,1\n");
}

#[test]
fn enumerate_rejects_bad_pattern_and_cap() {
    let out = invfp(&["enumerate", "--pattern", "99", "--n", "3"]);
    assert_eq!(exit_code(&out), 2);
    let out = invfp(&["enumerate", "--pattern", "231", "--n", "40", "--involutions"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn gf_golden_rows() {
    let out = invfp(&["gf", "--class", "iv231", "--order", "10"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("n,j,coefficient\n"));
    assert!(text.contains("\n3,3,1\n"), "x^3 t^3 coefficient of 1");
    assert!(text.contains("\n3,1,3\n"), "x t^3 coefficient of 3");
}

#[test]
fn gf_order_zero() {
    let out = invfp(&["gf", "--class", "av321", "--order", "0"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "n,j,coefficient\n0,0,1\n");
}

#[test]
fn gf_rejects_unknown_class() {
    let out = invfp(&["gf", "--class", "zzz", "--order", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn gf_writes_out_file() {
    let dir = scratch("gf-out");
    let path = dir.join("iv321.csv");
    let out = invfp(&[
        "gf",
        "--class",
        "iv321",
        "--order",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(&path).expect("csv written");
    assert!(text.contains("\n3,1,2\n"), "x t^3 coefficient of 2");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sample_is_deterministic_and_seed_sensitive() {
    let args = ["sample", "--what", "iv231", "--n", "40", "--samples", "6", "--seed", "3"];
    let a = invfp(&args);
    let b = invfp(&args);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b), "same flags, same bytes");
    assert!(stdout(&a).starts_with("value\n"));
    assert_eq!(stdout(&a).lines().count(), 7);

    let c = invfp(&[
        "sample", "--what", "iv231", "--n", "40", "--samples", "6", "--seed", "4",
    ]);
    assert_ne!(stdout(&a), stdout(&c), "seed must matter");
}

#[test]
fn sample_requires_n_where_applicable() {
    let out = invfp(&["sample", "--what", "iv231", "--samples", "3"]);
    assert_eq!(exit_code(&out), 2);
    let out = invfp(&["sample", "--what", "shape", "--samples", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_pass_writes_json_and_exits_zero() {
    let dir = scratch("verify-pass");
    let out = invfp(&[
        "verify",
        "--suite",
        "rayleigh_iv321",
        "--n",
        "400",
        "--threshold",
        "0.2",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).starts_with("PASS rayleigh_iv321 ks_rayleigh(n=400)"));

    let json = fs::read_to_string(dir.join("rayleigh_iv321.json")).expect("summary written");
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    let rows = parsed.as_array().expect("array of records");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["experiment"], "rayleigh_iv321");
    assert_eq!(rows[0]["pass"], true);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_threshold_failure_exits_one() {
    let dir = scratch("verify-fail");
    let out = invfp(&[
        "verify",
        "--suite",
        "rayleigh_iv321",
        "--n",
        "400",
        "--threshold",
        "0.0001",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).starts_with("FAIL rayleigh_iv321"));
    let json = fs::read_to_string(dir.join("rayleigh_iv321.json")).expect("summary written");
    assert!(json.contains("\"pass\": false"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_rerun_is_byte_identical() {
    let dir_a = scratch("verify-rerun-a");
    let dir_b = scratch("verify-rerun-b");
    let run = |dir: &Path| {
        invfp(&[
            "verify",
            "--suite",
            "thm_avn321",
            "--order",
            "80",
            "--threshold",
            "0.2",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
    };
    let a = run(&dir_a);
    let b = run(&dir_b);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let ja = fs::read(dir_a.join("thm_avn321.json")).expect("first summary");
    let jb = fs::read(dir_b.join("thm_avn321.json")).expect("second summary");
    assert_eq!(ja, jb, "rerun must reproduce the summary byte for byte");
    fs::remove_dir_all(&dir_a).ok();
    fs::remove_dir_all(&dir_b).ok();
}

#[test]
fn verify_rejects_unknown_suite_and_bad_flags() {
    let out = invfp(&["verify", "--suite", "nope"]);
    assert_eq!(exit_code(&out), 2);

    // --order belongs to thm_avn321 only.
    let out = invfp(&["verify", "--suite", "thm_t231", "--order", "10"]);
    assert_eq!(exit_code(&out), 2);

    // Zero is not a positive parameter.
    let out = invfp(&["verify", "--suite", "thm_avn321", "--order", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_infeasible_parameters_exit_two() {
    // The exact tableau law for k = 4 is capped well below n = 400.
    let out = invfp(&["verify", "--suite", "thm_increasefp", "--n", "400"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_honors_out_dir_env_var() {
    let dir = scratch("verify-env");
    let out = invfp_with_env(
        &[
            "verify",
            "--suite",
            "rayleigh_iv321",
            "--n",
            "400",
            "--threshold",
            "0.2",
        ],
        "INVFP_OUT_DIR",
        &dir,
    );
    assert_eq!(exit_code(&out), 0);
    assert!(
        dir.join("rayleigh_iv321.json").exists(),
        "summary lands in $INVFP_OUT_DIR"
    );
    fs::remove_dir_all(&dir).ok();
}
