//! The `frgrav` command line: config-driven runs, residual verification of
//! exported metrics and two calculator commands.
//!
//! Exit codes: 0 success, 2 config error, 3 non-convergence, 4 residual above
//! tolerance, 5 IO error.

pub mod config;
pub mod export;
pub mod expr;
mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Family, RunConfig};
pub use run::{
    deriv, run, run_blackhole, verify, Gate, RunReport, SourceFile, VerifyReport, REPORT_SCHEMA,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("residual above tolerance: {0}")]
    Residual(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Residual(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::NonConvergence { .. } | crate::Error::Divergence { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "frgrav",
    version,
    about = "Fractional nonholonomic gravity solutions and residual checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlackholeKind {
    Schwarzschild,
    Rotoid,
    Solrot,
    Oscillator,
}

impl From<BlackholeKind> for Family {
    fn from(k: BlackholeKind) -> Self {
        match k {
            BlackholeKind::Schwarzschild => Family::Schwarzschild,
            BlackholeKind::Rotoid => Family::Rotoid,
            BlackholeKind::Solrot => Family::Solrot,
            BlackholeKind::Oscillator => Family::Oscillator,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the configured solution, write its metric, residuals and report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides tolerances.residual.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Overrides output.dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Caputo derivative of an expression at a point.
    Deriv {
        #[arg(long)]
        alpha: f64,
        /// Expression in x (x1, x2 and v are accepted as aliases).
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, allow_hyphen_values = true)]
        terminal: f64,
        /// Quadrature nodes on [terminal, at].
        #[arg(long, default_value_t = 2049)]
        nodes: usize,
    },
    /// One-parameter Mittag-Leffler function.
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Recompute residuals of an exported metric against a source file.
    Verify {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        source: PathBuf,
    },
    /// Run a blackhole config as the given kind.
    Blackhole {
        #[arg(long, value_enum)]
        kind: BlackholeKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run {
            config,
            tolerance,
            out,
        } => {
            let cfg = RunConfig::load(&config)?;
            let rep = run(&cfg, out.as_deref(), tolerance)?;
            println!("{}", rep.summary_line());
        }
        Command::Blackhole { kind, config, out } => {
            let cfg = RunConfig::load(&config)?;
            let rep = run_blackhole(cfg, kind.into(), out.as_deref())?;
            println!("{}", rep.summary_line());
        }
        Command::Deriv {
            alpha,
            expr,
            at,
            terminal,
            nodes,
        } => println!("{:.16e}", deriv(alpha, &expr, at, terminal, nodes)?),
        Command::Ml { alpha, z } => println!(
            "{:.16e}",
            crate::fraccore::mittag_leffler(alpha, z).map_err(CliError::from)?
        ),
        Command::Verify { metric, source } => {
            let rep = verify(&metric, &source)?;
            println!(
                "{}",
                serde_json::to_string(&rep).map_err(|e| CliError::Io(e.to_string()))?
            );
            if !rep.gate.passed {
                return Err(CliError::Residual(format!(
                    "max {:.3e} > {:.3e}",
                    rep.gate.max, rep.gate.tolerance
                )));
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("frgrav: {e}");
            e.exit_code()
        }
    }
}
