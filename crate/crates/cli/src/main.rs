mod args;
mod de_cmd;
mod manifest;
mod plot;
mod sim_cmd;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config or input files (exit 1).
    Usage(String),
    /// Bracket or schedule failures in the numerics (exit 2).
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<ibdd_core::Error> for Failure {
    fn from(e: ibdd_core::Error) -> Self {
        use ibdd_core::Error as E;
        match e {
            E::Bracket { .. } | E::ScheduleUnavailable { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let r = match cli.command {
        Command::DeThreshold(a) => de_cmd::threshold(&a),
        Command::DeSchedule(a) => de_cmd::schedule(&a),
        Command::Sim(a) => sim_cmd::run(&a),
        Command::Plotdata(a) => plot::run(&a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
