//! `polyzeros` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 results not numerically
//! certified (outputs are still written), 4 a proven statement failed in
//! `verify`, 1 I/O failure.

mod commands;
mod opts;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use opts::Opts;

#[derive(Parser)]
#[command(name = "polyzeros", version, about = "Zeros of polynomial sequences P_n + B·P_{n−l} + A·P_{n−k} = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate P_0 … P_n.
    Seq(Opts),
    /// Zeros of P_n.
    Zeros(Opts),
    /// Trace the curve Im(B^k/A^l) = 0 over a window.
    Curve(Opts),
    /// Classify grid nodes by the moduli of the smallest roots in t.
    Dominance(Opts),
    /// Root-quotient geometry of each zero of P_n.
    Quotients(Opts),
    /// q-discriminant of A t^k + B t^l + 1 at --q, or a seeded consistency run.
    Qdisc(Opts),
    /// Check that the zeros of P_n lie on the curve and obey the sign rule.
    Verify(Opts),
    /// Zeros and traced curve for a built-in example, as SVG and CSV.
    Figure(Opts),
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    /// A computation failed outright (e.g. hit a pole).
    Numerical(String),
}

impl From<polyzeros::Error> for Failure {
    fn from(e: polyzeros::Error) -> Self {
        match e {
            polyzeros::Error::Pole(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// How a successful run ended; ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Clean,
    NonCertified,
    Violation,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Clean => 0,
            Status::NonCertified => 3,
            Status::Violation => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Seq(o) => o.resolve().and_then(|o| commands::seq(&o)),
        Command::Zeros(o) => o.resolve().and_then(|o| commands::zeros(&o)),
        Command::Curve(o) => o.resolve().and_then(|o| commands::curve(&o)),
        Command::Dominance(o) => o.resolve().and_then(|o| commands::dominance(&o)),
        Command::Quotients(o) => o.resolve().and_then(|o| commands::quotients(&o)),
        Command::Qdisc(o) => o.resolve().and_then(|o| commands::qdisc(&o)),
        Command::Verify(o) => o.resolve().and_then(|o| commands::verify(&o)),
        Command::Figure(o) => o.resolve().and_then(|o| commands::figure(&o)),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}
