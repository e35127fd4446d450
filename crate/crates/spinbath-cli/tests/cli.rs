//! End-to-end checks of the three subcommands against the built binary.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinbath"))
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(
        &path,
        r#"{
            "topology": "global",
            "family": "mixed",
            "n_modes": 4,
            "seed": 11,
            "initial_state": "bell_phi_plus",
            "time_grid": { "t_max": 10.0, "n_points": 50 }
        }"#,
    )
    .unwrap();
    path
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out = bin().args(["validate", "--config"]).arg(&config).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok:"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "topology": "global" }"#).unwrap();
    let out = bin().args(["validate", "--config"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn run_writes_csv_svg_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .args(["--engine", "oracle", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("scenario.csv")).unwrap();
    assert!(csv.starts_with("t,f_re,f_im,g_re,g_im,concurrence\n"));
    assert_eq!(csv.lines().count(), 51);
    assert!(out_dir.join("scenario.svg").exists());
    let meta = std::fs::read_to_string(out_dir.join("scenario_metadata.json")).unwrap();
    assert!(meta.contains("\"engine\": \"oracle\""));
}

#[test]
fn figure_guards_its_id_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["figure", "--id", "9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("2..=8"));
}
