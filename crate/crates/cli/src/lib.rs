//! Command-line front end: load a builtin or a JSON structure file, run a
//! check, and print a deterministic JSON (or `--pretty`) report.
//!
//! Exit statuses: 0 pass, 1 verdict failure, 2 usage, parse or other error.

pub mod commands;
pub mod error;
pub mod file_format;
pub mod pretty;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cosym3_core::model::DEFAULT_ORDER_BOUND;

pub use commands::{Loaded, Source, ORDER_BOUND_VAR};
pub use error::CliError;
pub use file_format::StructureFile;
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "cosym3", version, about = "Exact checks for 3-cosymplectic structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct InputArgs {
    /// Builtin model: standard7, torus7, m7f, torus{4n+3}, standard{4n+3}
    #[arg(long, group = "source")]
    pub builtin: Option<String>,
    /// Structure file in JSON
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Human-readable tables instead of JSON
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Deformation parameter a > 0, as p/q
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: String,
    /// Write the deformed structure file here
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify or refute every 3-cosymplectic identity
    Check(CommonArgs),
    /// Betti numbers, eigenspace decomposition and their arithmetic
    Betti(CommonArgs),
    /// Apply the D_a-homothetic deformation and re-check
    Deform(DeformArgs),
    /// so(4,1) certificate on basic harmonic forms
    Liealg(CommonArgs),
}

impl InputArgs {
    fn source(&self) -> Source {
        match (&self.builtin, &self.input) {
            (Some(b), _) => Source::Builtin(b.clone()),
            (None, Some(p)) => Source::File(p.clone()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

/// Text to print and the process exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

pub fn order_bound_from(value: Option<&str>) -> Result<usize, CliError> {
    match value {
        None => Ok(DEFAULT_ORDER_BOUND),
        Some(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| CliError::Usage(format!("{ORDER_BOUND_VAR} must be a positive integer, got {v:?}"))),
    }
}

fn render(report: &Report, pretty: bool) -> String {
    if pretty {
        report.to_pretty()
    } else {
        report.to_json()
    }
}

pub fn run(cli: &Cli, order_bound: usize) -> Result<Outcome, CliError> {
    let (report, pretty, report_path) = match &cli.command {
        Command::Check(a) | Command::Betti(a) | Command::Liealg(a) => {
            let loaded = commands::load(&a.input.source(), order_bound)?;
            let report = match &cli.command {
                Command::Check(_) => commands::cmd_check(&loaded)?,
                Command::Betti(_) => commands::cmd_betti(&loaded)?,
                _ => commands::cmd_liealg(&loaded)?,
            };
            (report, a.pretty, a.output.clone())
        }
        Command::Deform(d) => {
            let a = commands::parse_parameter(&d.a)?;
            let loaded = commands::load(&d.input.source(), order_bound)?;
            let (report, file) = commands::cmd_deform(&loaded, &a, d.output.as_deref())?;
            if let Some(path) = &d.output {
                commands::write(path, &file.to_json())?;
            }
            (report, d.pretty, None)
        }
    };
    let text = render(&report, pretty);
    let status = if report.passed { 0 } else { 1 };
    match report_path {
        Some(path) => {
            commands::write(&path, &text)?;
            Ok(Outcome {
                stdout: String::new(),
                status,
            })
        }
        None => Ok(Outcome {
            stdout: text,
            status,
        }),
    }
}
