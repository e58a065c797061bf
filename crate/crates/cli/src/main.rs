//! `cyma`: validate frames, extract Monge–Ampère coefficients, solve on the
//! torus, reconstruct the 1-form and verify the original system.
//!
//! Exit codes: 0 success, 1 domain failure (invalid frame, failed solve),
//! 2 usage or IO error.

mod commands;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use output::Run;

#[derive(Parser, Debug)]
#[command(name = "cyma", version, about = "Monge–Ampère reduction of the Calabi–Yau equation on T²-bundles over T²")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct GlobalOpts {
    /// Directory for reports, field files and the run manifest.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Derivative backend: spectral or fd2 (overrides the config file).
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Grid size as N1xN2, e.g. 64x64 (overrides the config file).
    #[arg(long, global = true, value_parser = inputs::parse_grid_arg)]
    pub grid: Option<(usize, usize)>,
    /// Seed for the frame sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write every field as x1,x2,value CSV.
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a frame file against the constraints of its case.
    Validate { frame: String },
    /// Print the Monge–Ampère coefficients of a frame and their identity defects.
    Coeffs { frame: String },
    /// Solve the Monge–Ampère equation for given coefficients and forcing.
    Solve {
        coeffs: PathBuf,
        /// Forcing: field file (.f64 / .csv), mode list (.json or inline `[...]`),
        /// or `manufactured[:SCALE]`.
        forcing: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Solve, reconstruct the 1-form and evaluate the original system.
    Roundtrip {
        frame: String,
        forcing: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Closed-form solution for Nil frames with G³₃ = 0.
    Explicit { frame: String, forcing: String },
    /// Draw admissible frames from the seeded sampler.
    Sample {
        /// nil_yt or sol_r
        case: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Coeffs { .. } => "coeffs",
            Command::Solve { .. } => "solve",
            Command::Roundtrip { .. } => "roundtrip",
            Command::Explicit { .. } => "explicit",
            Command::Sample { .. } => "sample",
        }
    }
}

fn dispatch(cmd: &Command, run: &mut Run) -> anyhow::Result<u8> {
    match cmd {
        Command::Validate { frame } => commands::validate(run, frame),
        Command::Coeffs { frame } => commands::coeffs(run, frame),
        Command::Solve { coeffs, forcing, config } => commands::solve(run, coeffs, forcing, config.as_deref()),
        Command::Roundtrip { frame, forcing, config } => {
            commands::roundtrip(run, frame, forcing, config.as_deref())
        }
        Command::Explicit { frame, forcing } => commands::explicit(run, frame, forcing),
        Command::Sample { case, count } => commands::sample(run, case, *count),
    }
}

/// Domain failures from the library map to 1; everything else is a usage or IO problem.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<cyma_core::Error>() {
        Some(e) if e.is_domain_failure() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut run = Run::new(cli.command.name(), cli.global.clone());
    let code = match dispatch(&cli.command, &mut run) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    };
    let code = match run.finish(code, started.elapsed().as_secs_f64()) {
        Ok(()) => code,
        Err(err) => {
            eprintln!("error: writing manifest: {err:#}");
            2
        }
    };
    ExitCode::from(code)
}
