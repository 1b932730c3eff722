//! Scenario runner: strict JSON config in, CSV artifacts and a manifest out.
//!
//! Every run writes files with fixed formatting (12 significant digits,
//! `\n` line endings) so that identical configs produce bitwise-identical
//! outputs, independent of worker count. The manifest records the resolved
//! parameters and a SHA-256 checksum per emitted file.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::Vector3;
use crate::design::{designed_pulses, polynomial_schedule, DesignParams, MAX_ETA};
use crate::error::{Error, Result};
use crate::metrics::{default_eta_grid, omega_max, sweep_eta, write_sweep_csv};
use crate::model::Chirality;
use crate::propagate::{propagate, Trajectory, MIN_STEPS};

/// Typical experimentally available drive strength, 2 pi x 10 MHz expressed
/// in rad/us; reported in the manifest for comparison, never enforced.
pub const RABI_ANCHOR_RAD_PER_US: f64 = 2.0 * PI * 10.0;

/// What a run should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Emit the designed waveforms only.
    Design,
    /// Designed waveforms plus trajectories for the selected chiralities.
    Propagate,
    /// Eta sweep table.
    Sweep,
    /// Headline left-handed transfer: pulses + left trajectory.
    ReproduceFig2,
    /// Same shared field, right-handed molecule: pulses + right trajectory.
    ReproduceFig3,
    /// Default eta sweep.
    ReproduceFig4,
}

/// Which enantiomers the `propagate` mode runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiralitySelection {
    Left,
    Right,
    #[default]
    Both,
}

impl ChiralitySelection {
    fn includes(self, chirality: Chirality) -> bool {
        matches!(
            (self, chirality),
            (ChiralitySelection::Both, _)
                | (ChiralitySelection::Left, Chirality::Left)
                | (ChiralitySelection::Right, Chirality::Right)
        )
    }
}

fn default_tau_us() -> f64 {
    0.5
}

fn default_eta() -> f64 {
    0.02
}

fn default_steps() -> usize {
    4000
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Scenario configuration. Unknown keys are rejected; all fields except
/// `mode` have defaults, and the defaults reproduce the headline transfer
/// (eta = 0.02, eta' = -0.02, tau = 0.5 us, 4000 steps).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub mode: Mode,
    /// Total duration in microseconds.
    #[serde(default = "default_tau_us")]
    pub tau_us: f64,
    /// Regularization angle of the left-handed design; the shared field
    /// equals the right-handed design at eta' = -eta.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Explicit sweep grid; when absent the sweep modes use 20 log-spaced
    /// values in [0.005, 0.1].
    #[serde(default)]
    pub etas: Option<Vec<f64>>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub chirality: ChiralitySelection,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn new(mode: Mode) -> Self {
        ScenarioConfig {
            mode,
            tau_us: default_tau_us(),
            eta: default_eta(),
            etas: None,
            steps: default_steps(),
            chirality: ChiralitySelection::default(),
            output_dir: default_output_dir(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_us.is_finite() && self.tau_us > 0.0) {
            return Err(Error::config("tau_us", format!("must be finite and > 0, got {}", self.tau_us)));
        }
        if !self.eta.is_finite() || self.eta == 0.0 || self.eta.abs() > MAX_ETA {
            return Err(Error::config(
                "eta",
                format!(
                    "eta must be nonzero with |eta| <= {MAX_ETA} (eta = 0 makes omega_y diverge \
                     at t = 0), got {}",
                    self.eta
                ),
            ));
        }
        if self.steps < MIN_STEPS {
            return Err(Error::config("steps", format!("need at least {MIN_STEPS}, got {}", self.steps)));
        }
        if let Some(etas) = &self.etas {
            if etas.is_empty() {
                return Err(Error::config("etas", "the eta list must not be empty".to_string()));
            }
            for &eta in etas {
                if !(eta.is_finite() && eta > 0.0 && eta <= MAX_ETA) {
                    return Err(Error::config(
                        "etas",
                        format!("each eta must lie in (0, {MAX_ETA}], got {eta}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The grid a sweep run will actually use.
    pub fn resolved_eta_grid(&self) -> Vec<f64> {
        self.etas.clone().unwrap_or_else(default_eta_grid)
    }
}

/// Strict parse of a JSON scenario document, followed by validation.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

#[derive(Clone, Debug, Serialize)]
struct FileRecord {
    name: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct ResolvedParameters {
    tau_us: f64,
    eta: f64,
    eta_grid: Option<Vec<f64>>,
    steps: usize,
    chirality: ChiralitySelection,
    output_dir: String,
}

#[derive(Serialize)]
struct Feasibility {
    omega_max_rad_per_us: f64,
    typical_rabi_rad_per_us: f64,
    omega_max_over_typical: f64,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    mode: Mode,
    parameters: ResolvedParameters,
    feasibility: Feasibility,
    files: Vec<FileRecord>,
}

/// Paths produced by a successful run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

struct Emitter {
    dir: PathBuf,
    records: Vec<FileRecord>,
    paths: Vec<PathBuf>,
}

impl Emitter {
    fn write(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        let digest = Sha256::digest(contents);
        let sha256: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.records.push(FileRecord { name: name.to_string(), bytes: contents.len(), sha256 });
        self.paths.push(path);
        Ok(())
    }
}

fn trajectory_with_diagnostics(
    config: &ScenarioConfig,
    shared_field: &crate::design::PulseSet,
    chirality: Chirality,
) -> Result<Trajectory> {
    // The schedule that this enantiomer follows under the shared field:
    // the left branch at eta, the right branch at eta' = -eta.
    let schedule_eta = match chirality {
        Chirality::Left => config.eta,
        Chirality::Right => -config.eta,
    };
    let params = DesignParams::new(config.tau_us, schedule_eta).with_grid_points(config.steps + 1);
    let schedule = polynomial_schedule(&params, chirality)?;
    let trajectory = propagate(shared_field, chirality, &Vector3::basis(0), config.steps)?;
    // Diagnostic invariance residual, computed with omega0 = 1/tau so the
    // column is invariant under rescaling tau.
    trajectory.with_invariant_residuals(&schedule, shared_field, 1.0 / config.tau_us)
}

/// Execute a scenario and emit its artifacts plus `run_manifest.json`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir).map_err(|e| io_err(&config.output_dir, e))?;
    let mut emitter = Emitter {
        dir: config.output_dir.clone(),
        records: Vec::new(),
        paths: Vec::new(),
    };

    let field_peak: f64;
    let mut eta_grid = None;

    match config.mode {
        Mode::Design | Mode::Propagate | Mode::ReproduceFig2 | Mode::ReproduceFig3 => {
            let params =
                DesignParams::new(config.tau_us, config.eta).with_grid_points(config.steps + 1);
            let shared_field = designed_pulses(&params, Chirality::Left)?;
            field_peak = omega_max(&shared_field);

            let mut csv = Vec::new();
            shared_field.write_csv(&mut csv).map_err(|e| io_err(&emitter.dir, e))?;
            emitter.write("pulses.csv", &csv)?;

            let selection = match config.mode {
                Mode::ReproduceFig2 => ChiralitySelection::Left,
                Mode::ReproduceFig3 => ChiralitySelection::Right,
                Mode::Design => ChiralitySelection::Left, // no trajectories below
                Mode::Propagate => config.chirality,
                _ => unreachable!(),
            };
            if config.mode != Mode::Design {
                for (chirality, name) in [
                    (Chirality::Left, "trajectory_left.csv"),
                    (Chirality::Right, "trajectory_right.csv"),
                ] {
                    if selection.includes(chirality) {
                        let trajectory =
                            trajectory_with_diagnostics(config, &shared_field, chirality)?;
                        let mut csv = Vec::new();
                        trajectory.write_csv(&mut csv).map_err(|e| io_err(&emitter.dir, e))?;
                        emitter.write(name, &csv)?;
                    }
                }
            }
        }
        Mode::Sweep | Mode::ReproduceFig4 => {
            let grid = config.resolved_eta_grid();
            let rows = sweep_eta(&grid, config.tau_us, config.steps)?;
            field_peak = rows.iter().fold(0.0_f64, |a, r| a.max(r.omega_max));
            let mut csv = Vec::new();
            write_sweep_csv(&rows, &mut csv).map_err(|e| io_err(&emitter.dir, e))?;
            emitter.write("sweep.csv", &csv)?;
            eta_grid = Some(grid);
        }
    }

    let manifest = Manifest {
        tool: "esst",
        version: env!("CARGO_PKG_VERSION"),
        mode: config.mode,
        parameters: ResolvedParameters {
            tau_us: config.tau_us,
            eta: config.eta,
            eta_grid,
            steps: config.steps,
            chirality: config.chirality,
            output_dir: config.output_dir.display().to_string(),
        },
        feasibility: Feasibility {
            omega_max_rad_per_us: field_peak,
            typical_rabi_rad_per_us: RABI_ANCHOR_RAD_PER_US,
            omega_max_over_typical: field_peak / RABI_ANCHOR_RAD_PER_US,
        },
        files: emitter.records.clone(),
    };
    let manifest_path = emitter.dir.join("run_manifest.json");
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    fs::write(&manifest_path, body.as_bytes()).map_err(|e| io_err(&manifest_path, e))?;

    Ok(RunReport { output_dir: emitter.dir, files: emitter.paths, manifest_path })
}

impl Error {
    /// True for errors that indicate a bad configuration rather than a
    /// numerical failure; the CLI maps these to a distinct exit code.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::InvalidConfig { .. } | Error::ConfigParse(_))
    }
}
