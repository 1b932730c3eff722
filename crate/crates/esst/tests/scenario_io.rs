//! End-to-end checks of the scenario runner's file outputs.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use esst::scenario::{parse_config, run_scenario, Mode, ScenarioConfig};

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("esst-io-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|line| line.split(',').map(|cell| cell.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn reproduce_fig2_emits_the_left_trajectory() {
    let dir = temp_dir("fig2");
    let mut config = ScenarioConfig::new(Mode::ReproduceFig2);
    config.output_dir = dir.clone();
    let report = run_scenario(&config).unwrap();

    let names: Vec<String> = report
        .files
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, vec!["pulses.csv", "trajectory_left.csv"]);

    let (header, rows) = read_csv(&dir.join("trajectory_left.csv"));
    assert_eq!(header, vec!["t", "P1", "P2", "P3", "norm_error", "invariant_residual"]);
    assert_eq!(rows.len(), config.steps + 1);
    let last = rows.last().unwrap();
    assert!((0.9986..=0.9996).contains(&last[3]), "final P3 = {}", last[3]);
    assert!((last[0] - 0.5).abs() < 1e-12, "final t should be tau in us");
    // Interior residual column is finite; the stencil endpoints are NaN.
    assert!(rows[0][5].is_nan());
    assert!(rows[1][5].is_finite());

    let (pulse_header, pulse_rows) = read_csv(&dir.join("pulses.csv"));
    assert_eq!(pulse_header, vec!["t", "omega_x", "omega_y", "omega_z"]);
    for row in &pulse_rows {
        assert_eq!(row[1], row[3], "omega_x and omega_z columns must match");
    }
    assert_eq!(pulse_rows[0][1], 0.0);
    assert_eq!(pulse_rows.last().unwrap()[2], 0.0);

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn reproduce_fig3_emits_the_right_trajectory() {
    let dir = temp_dir("fig3");
    let mut config = ScenarioConfig::new(Mode::ReproduceFig3);
    config.output_dir = dir.clone();
    config.steps = 2000;
    run_scenario(&config).unwrap();

    let (_, rows) = read_csv(&dir.join("trajectory_right.csv"));
    let last = rows.last().unwrap();
    assert!((0.9986..=0.9996).contains(&last[2]), "final P2 = {}", last[2]);
    assert!(!dir.join("trajectory_left.csv").exists());

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn manifest_records_checksums_and_feasibility() {
    let dir = temp_dir("manifest");
    let mut config = ScenarioConfig::new(Mode::Design);
    config.output_dir = dir.clone();
    config.steps = 1000;
    let report = run_scenario(&config).unwrap();

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report.manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "esst");
    assert_eq!(manifest["mode"], "design");
    assert_eq!(manifest["parameters"]["tau_us"], 0.5);
    assert_eq!(manifest["parameters"]["eta"], 0.02);

    // Checksums must match the actual bytes on disk.
    for file in manifest["files"].as_array().unwrap() {
        let name = file["name"].as_str().unwrap();
        let bytes = fs::read(dir.join(name)).unwrap();
        assert_eq!(file["bytes"].as_u64().unwrap() as usize, bytes.len());
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(file["sha256"].as_str().unwrap(), hex);
    }

    // The feasibility line compares the field peak to 2 pi x 10 rad/us.
    let peak = manifest["feasibility"]["omega_max_rad_per_us"].as_f64().unwrap();
    assert!((peak - 29.331929221147).abs() < 1e-6);
    let anchor = manifest["feasibility"]["typical_rabi_rad_per_us"].as_f64().unwrap();
    assert!((anchor - 62.83185307179586).abs() < 1e-12);
    let ratio = manifest["feasibility"]["omega_max_over_typical"].as_f64().unwrap();
    assert!((ratio - peak / anchor).abs() < 1e-15);

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn sweep_mode_uses_the_configured_grid() {
    let dir = temp_dir("sweep");
    let config = parse_config(&format!(
        r#"{{"mode":"sweep","etas":[0.02],"steps":1000,"output_dir":"{}"}}"#,
        dir.display()
    ))
    .unwrap();
    run_scenario(&config).unwrap();

    let (header, rows) = read_csv(&dir.join("sweep.csv"));
    assert_eq!(header, vec!["eta", "P3_L", "P3_R", "P2_R", "excess", "omega_max"]);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row[0], 0.02);
    assert!((row[1] - 0.99913059).abs() < 1e-6);
    assert!((row[3] - 0.99913059).abs() < 1e-6);
    assert!((row[4] - 0.99920581).abs() < 1e-6);

    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn invalid_sweep_config_writes_nothing() {
    let dir = temp_dir("invalid");
    let mut config = ScenarioConfig::new(Mode::Sweep);
    config.output_dir = dir.clone();
    config.etas = Some(vec![]);
    let err = run_scenario(&config).unwrap_err();
    assert!(err.is_config_error());
    assert!(!dir.exists(), "validation failures must not create output");
}

#[test]
fn propagate_honors_the_chirality_selection() {
    let dir = temp_dir("selection");
    let config = parse_config(&format!(
        r#"{{"mode":"propagate","chirality":"right","steps":500,"output_dir":"{}"}}"#,
        dir.display()
    ))
    .unwrap();
    run_scenario(&config).unwrap();
    assert!(dir.join("trajectory_right.csv").exists());
    assert!(!dir.join("trajectory_left.csv").exists());
    assert!(dir.join("pulses.csv").exists());

    let _ = fs::remove_dir_all(&dir);
}
