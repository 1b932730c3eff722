//! Thin command-line front end: one subcommand per scenario mode, flags
//! overriding config-file values.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use esst::scenario::{self, ChiralitySelection, Mode, ScenarioConfig};

#[derive(Parser)]
#[command(name = "esst", version, about = "Enantio-specific state transfer scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of integrator steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Regularization angle of the left-handed design (rad).
    #[arg(long)]
    eta: Option<f64>,
    /// Total duration in microseconds.
    #[arg(long = "tau-us")]
    tau_us: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the designed waveforms (pulses.csv).
    Design(CommonArgs),
    /// Waveforms plus population trajectories for the selected enantiomers.
    Propagate {
        #[command(flatten)]
        common: CommonArgs,
        /// Which enantiomers to propagate.
        #[arg(long, value_enum)]
        chirality: Option<CliChirality>,
    },
    /// Eta sweep (sweep.csv).
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated eta values; defaults to 20 log-spaced in [0.005, 0.1].
        #[arg(long, value_delimiter = ',')]
        etas: Option<Vec<f64>>,
    },
    /// Headline left-handed transfer (pulses.csv + trajectory_left.csv).
    ReproduceFig2(CommonArgs),
    /// Same shared field, right-handed molecule (trajectory_right.csv).
    ReproduceFig3(CommonArgs),
    /// Default eta sweep on the headline grid.
    ReproduceFig4(CommonArgs),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CliChirality {
    Left,
    Right,
    Both,
}

impl From<CliChirality> for ChiralitySelection {
    fn from(value: CliChirality) -> Self {
        match value {
            CliChirality::Left => ChiralitySelection::Left,
            CliChirality::Right => ChiralitySelection::Right,
            CliChirality::Both => ChiralitySelection::Both,
        }
    }
}

fn build_config(
    mode: Mode,
    common: &CommonArgs,
    chirality: Option<CliChirality>,
    etas: Option<Vec<f64>>,
) -> Result<ScenarioConfig, esst::Error> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| esst::Error::Io {
                path: path.clone(),
                source,
            })?;
            scenario::parse_config(&text)?
        }
        None => ScenarioConfig::new(mode),
    };
    config.mode = mode; // the subcommand decides the mode
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    if let Some(steps) = common.steps {
        config.steps = steps;
    }
    if let Some(eta) = common.eta {
        config.eta = eta;
    }
    if let Some(tau_us) = common.tau_us {
        config.tau_us = tau_us;
    }
    if let Some(selection) = chirality {
        config.chirality = selection.into();
    }
    if let Some(grid) = etas {
        config.etas = Some(grid);
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common, chirality, etas) = match &cli.command {
        Command::Design(common) => (Mode::Design, common, None, None),
        Command::Propagate { common, chirality } => {
            (Mode::Propagate, common, *chirality, None)
        }
        Command::Sweep { common, etas } => (Mode::Sweep, common, None, etas.clone()),
        Command::ReproduceFig2(common) => (Mode::ReproduceFig2, common, None, None),
        Command::ReproduceFig3(common) => (Mode::ReproduceFig3, common, None, None),
        Command::ReproduceFig4(common) => (Mode::ReproduceFig4, common, None, None),
    };

    let config = match build_config(mode, common, chirality, etas) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("esst: {err}");
            return ExitCode::from(2);
        }
    };
    match scenario::run_scenario(&config) {
        Ok(report) => {
            for path in &report.files {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", report.manifest_path.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("esst: {err}");
            ExitCode::from(if err.is_config_error() { 2 } else { 1 })
        }
    }
}
