use std::path::{Path, PathBuf};
use std::process::Command;

fn dlrsim(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dlrsim"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn demo_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/scenario.toml")
}

#[test]
fn help_exits_zero() {
    assert_eq!(dlrsim(&["--help"]).0, 0);
}

#[test]
fn calibrate_prints_every_line() {
    let (code, out) = dlrsim(&["calibrate"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() > 10, "{out}");
}

#[test]
fn validate_demo_scenario() {
    let cfg = demo_config();
    let (code, out) = dlrsim(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("6 zones"), "{out}");
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = dlrsim(&["sweep", "--out", dir.path().to_str().unwrap(), "--points", "11", "--parameter", "wind"]);
    assert_eq!(code, 0);
    assert!(dir.path().join("sweep_wind_speed.csv").exists());
}

#[test]
fn input_errors_exit_one() {
    let cfg = demo_config();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(dlrsim(&["validate", "--config", "/nonexistent/scenario.toml"]).0, 1);
    assert_eq!(dlrsim(&["validate", "--config", cfg, "--rating-mode", "sometimes"]).0, 1);
    assert_eq!(dlrsim(&["validate", "--config", cfg, "--horizon", "0"]).0, 1);
    assert_eq!(dlrsim(&["validate", "--config", cfg, "--res-scale", "-1"]).0, 1);
    assert_eq!(dlrsim(&["frobnicate"]).0, 1);
}
