use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ntn_coherence_cli::{execute, parse_config, run, write_outputs, CliError, Command, Overrides};

/// Channel autocorrelation and coherence time for moving base stations and
/// users with a vMF scatterer field.
#[derive(Parser)]
#[command(name = "ntn-coherence", version = ntn_coherence_cli::output::VERSION)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Normalized autocorrelation over the lag grid.
    Curve,
    /// Coherence time for one threshold.
    Tc,
    /// Curves (and T_c) along one scenario axis.
    Sweep,
    /// Rician-factor study.
    Fig2,
    /// BS-speed study.
    Fig3,
    /// UE-beamwidth study.
    Fig4,
    /// Quadrature against the Monte-Carlo ensemble, with z-scores.
    McCheck,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Curve => Command::Curve,
            Cmd::Tc => Command::Tc,
            Cmd::Sweep => Command::Sweep,
            Cmd::Fig2 => Command::Fig2,
            Cmd::Fig3 => Command::Fig3,
            Cmd::Fig4 => Command::Fig4,
            Cmd::McCheck => Command::McCheck,
        }
    }
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let cfg = parse_config(cli.command.into(), &cli.overrides)?;
    if let Some(n) = cfg.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = execute(&cfg)?;
    let files = write_outputs(&out, &cfg)?;
    // a closed stdout (e.g. piped into `head`) is not an error for the run
    let mut stdout = std::io::stdout().lock();
    let _ = write!(stdout, "{}", run::summary(&cfg, &out));
    for f in &files {
        let _ = writeln!(stdout, "wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
