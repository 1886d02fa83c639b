//! Command-line front end: JSON problem files in, certified verdicts out.

pub mod commands;
pub mod problem;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use eqnv_core::Answer;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<eqnv_core::Error> for CliError {
    fn from(e: eqnv_core::Error) -> Self {
        match e {
            eqnv_core::Error::InternalInconsistency(m) => CliError::Internal(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Moment,
    Section,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Yes,
    No,
}

#[derive(Debug, Parser)]
#[command(name = "eqnv", version, about = "Decide torus-invariant non-vanishing with exact certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the decision pipeline and print a verdict report.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also report invariant section counts in degrees 1..=N.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        degrees: Option<u64>,
        /// Exit 1 unless the answer matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Print the moment or section polytope.
    Polytope {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "moment")]
        which: Which,
        /// Add a 2-D projection of the vertices in cyclic order.
        #[arg(long)]
        plot_data: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the certificate with an exact verification transcript.
    Certificate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// What a run prints and how it exits.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failed(e: &CliError) -> Self {
        Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Check {
            input,
            format,
            degrees,
            expect,
        } => commands::load(input)
            .and_then(|p| commands::check(&p, *format, *degrees))
            .map(|out| {
                let matches = match expect {
                    None => true,
                    Some(Expect::Yes) => out.answer == Answer::Yes,
                    Some(Expect::No) => out.answer == Answer::No,
                };
                let stderr = if matches {
                    String::new()
                } else {
                    format!("expected {:?} but the answer is {:?}\n", expect.unwrap(), out.answer)
                };
                Outcome {
                    code: if matches { EXIT_OK } else { EXIT_MISMATCH },
                    stdout: out.text,
                    stderr,
                }
            }),
        Command::Polytope {
            input,
            which,
            plot_data,
            format,
        } => commands::load(input)
            .and_then(|p| commands::polytope(&p, *which, *plot_data, *format))
            .map(ok),
        Command::Certificate { input, format } => commands::load(input)
            .and_then(|p| commands::certificate(&p, *format))
            .map(ok),
    };
    result.unwrap_or_else(|e| Outcome::failed(&e))
}

fn ok(stdout: String) -> Outcome {
    Outcome {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}
