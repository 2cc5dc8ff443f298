//! End-to-end tests of the ep2d binary: golden-file reproducibility, exit
//! codes, and the dump-consuming subcommands.

use std::path::{Path, PathBuf};
use std::process::Command;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ep2d"))
}

#[test]
fn simulate_reproduces_golden_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = repo_root().join("configs/reference.toml");
    let out = bin()
        .current_dir(dir.path())
        .args(["simulate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read(dir.path().join("out/summary.json")).unwrap();
    let golden = std::fs::read(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/reference_summary.json"),
    )
    .unwrap();
    assert_eq!(
        summary, golden,
        "summary JSON must reproduce the golden file byte for byte"
    );
    // determinism: a second run yields byte-identical CSV
    let csv1 = std::fs::read(dir.path().join("out/run.csv")).unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["simulate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(csv1, std::fs::read(dir.path().join("out/run.csv")).unwrap());
    let head = String::from_utf8_lossy(&csv1);
    assert!(head.starts_with("# config "), "CSV must carry the config hash");
}

#[test]
fn exit_codes_distinguish_usage_runtime_and_verification() {
    // usage: unknown flag
    let out = bin().args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // usage: invalid config value names the key
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(repo_root().join("configs/reference.toml"))
        .unwrap()
        .replace("n = 32", "n = 33");
    std::fs::write(&bad, text).unwrap();
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));

    // runtime: missing file
    let out = bin()
        .args(["simulate", "--config", "/nonexistent/nope.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // usage: unknown check name lists the available checks
    let cfg = repo_root().join("configs/reference.toml");
    let out = bin()
        .args(["verify", "--check", "bogus", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phase_bounds"));

    // verification failure: the dispersive window cannot fit on the small
    // reference grid, so the check fails and the exit code is 3
    let out = bin()
        .args(["verify", "--check", "dispersive_decay", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dispersive_decay: FAIL"));
}

#[test]
fn verify_passing_check_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = repo_root().join("configs/reference.toml");
    let report = dir.path().join("verify.json");
    let out = bin()
        .args(["verify", "--check", "linear_profile", "--report"])
        .arg(&report)
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["pass"], serde_json::Value::Bool(true));
    assert_eq!(rep["checks"][0]["name"], "linear_profile");
}

#[test]
fn normalform_and_norms_consume_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ep2d::config::RunConfig::from_path(&repo_root().join("configs/reference.toml"))
        .unwrap();
    let u = cfg.initial_unknown().unwrap();
    let dump = dir.path().join("u.ep2d");
    ep2d::io::write_field(&dump, u.field()).unwrap();

    let freqs = dir.path().join("freqs.json");
    std::fs::write(&freqs, "[[1,0],[2,1]]").unwrap();
    let out_csv = dir.path().join("w.csv");
    let out = bin()
        .args(["normalform", "--input"])
        .arg(&dump)
        .arg("--freqs")
        .arg(&freqs)
        .arg("--out")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("k1,k2,w_re"));

    let out = bin()
        .args(["norms", "--n0", "5", "--n", "8", "--input"])
        .arg(&dump)
        .output()
        .unwrap();
    assert!(out.status.success());
    let rep: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    assert!(rep["z_norm"].as_f64().unwrap() > 0.0);
    assert!(rep["h_norms"]["8"].as_f64().unwrap() > 0.0);

    // decay-fit on a synthetic CSV
    let csv = dir.path().join("series.csv");
    let mut text = String::from("time,obs\n");
    for i in 0..120 {
        let t = 1.0 + 0.5 * i as f64;
        text.push_str(&format!("{t},{}\n", (1.0 + t).powf(-1.0)));
    }
    std::fs::write(&csv, text).unwrap();
    let out = bin()
        .args(["decay-fit", "--column", "obs", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((fit["exponent"].as_f64().unwrap() + 1.0).abs() < 1e-9);
}
