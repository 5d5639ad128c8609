//! `qcorr`: evolve a two-qubit scenario and emit its correlation trajectory.

mod config;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qcorr_core::dynamics::MIN_DETECTION_SAMPLES;
use qcorr_core::{detect_transition, evolve_trajectory, CoreError, Sign, TransitionResult};

use config::{parse_sign, validate, ChannelName, FamilyName, ScenarioConfig};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ENGINE: u8 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qcorr", version, about = "Classical and quantum correlation dynamics of two qubits under local noise")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// JSON scenario file; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Correlation along z for the dephasing family.
    #[arg(long)]
    c3: Option<f64>,
    /// Selects c1(0) = ±1, c2(0) = ∓c3.
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    sign: Option<Sign>,
    /// Schmidt angle in radians for the pure family.
    #[arg(long)]
    theta: Option<f64>,
    /// Singlet fraction for the Werner family.
    #[arg(long)]
    beta: Option<f64>,
    /// Decoherence rate.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    channel: Option<ChannelName>,
    /// End of the time grid (default 2/γ).
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check the scenario and print a report without evolving it.
    #[arg(long)]
    validate_only: bool,
}

impl Cli {
    fn flags(&self) -> ScenarioConfig {
        ScenarioConfig {
            family: self.family,
            c3: self.c3,
            sign: self.sign,
            theta: self.theta,
            beta: self.beta,
            fano: None,
            gamma: self.gamma,
            channel: self.channel,
            t_max: self.tmax,
            n_points: self.points,
        }
    }
}

enum Failure {
    Config(Vec<String>),
    Engine(CoreError),
    Io(String),
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let base = match &cli.config {
        Some(path) => ScenarioConfig::from_file(path).map_err(|e| Failure::Config(vec![e]))?,
        None => ScenarioConfig::default(),
    };
    let config = base.overlay(cli.flags());
    let checked = validate(&config);

    if cli.validate_only {
        let report = match &checked {
            Ok(s) => format!("valid: family {}, γ = {}, {} points on [0, {}]\n", s.family.name(), s.gamma, s.n_points, s.t_max),
            Err(issues) => issues.iter().map(|m| format!("invalid: {m}\n")).collect(),
        };
        emit(cli, &report)?;
        return checked.map(|_| ()).map_err(|_| Failure::Config(Vec::new()));
    }

    let scenario = checked.map_err(Failure::Config)?;
    let traj = evolve_trajectory(&scenario).map_err(|e| match e {
        CoreError::Parameter(msg) => Failure::Config(vec![msg]),
        other => Failure::Engine(other),
    })?;
    let transition = if traj.samples.len() >= MIN_DETECTION_SAMPLES {
        detect_transition(&traj).map_err(Failure::Engine)?
    } else {
        eprintln!("warning: fewer than {MIN_DETECTION_SAMPLES} samples, transition detection skipped");
        TransitionResult {
            detected_t: None,
            analytic_t: scenario.analytic_transition_time(),
            method: String::new(),
        }
    };
    let text = match cli.format {
        Format::Csv => output::to_csv(&traj.samples, &transition),
        Format::Json => output::to_json(&scenario, &traj.samples, &transition),
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .or_else(|e| if e.kind() == io::ErrorKind::BrokenPipe { Ok(()) } else { Err(e) })
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(issues)) => {
            for m in issues {
                eprintln!("error: {m}");
            }
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ENGINE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}
