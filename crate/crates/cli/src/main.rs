//! `fqdio`: batch experiments over F_q((1/T)) with CSV or JSON output.
//!
//! Exit codes: 0 all checks pass, 1 a falsification was recorded, 2 usage or
//! configuration error, 3 search space too large or precision exhausted.

mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fqdio::Error;

#[derive(Parser)]
#[command(name = "fqdio", version, about = "Diophantine approximation over F_q((1/T))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Field order; a prime power.
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Modulus of an extension field over F_p, as a polynomial in T.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Working precision of random or rational series.
    #[arg(long, default_value_t = 64)]
    pub prec: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// Where ξ comes from: a series, a continued fraction, or a seeded random draw.
#[derive(Args, Clone, Debug)]
pub struct XiArg {
    /// ξ as a series, e.g. `T^-1+T^-3+O(T^-20)`.
    #[arg(long, conflicts_with = "cf")]
    pub xi: Option<String>,
    /// ξ as a continued fraction; a trailing `...` repeats the listed quotients.
    #[arg(long)]
    pub cf: Option<String>,
}

/// The target y of an orbit experiment.
#[derive(Args, Clone, Debug)]
pub struct TargetArg {
    /// y = 0.
    #[arg(long, conflicts_with_all = ["slope", "y1"])]
    pub zero: bool,
    /// Rational slope `A/B`, with y₂ = 1.
    #[arg(long, conflicts_with = "y1")]
    pub slope: Option<String>,
    /// First component of y; a random series when omitted.
    #[arg(long, requires = "y2")]
    pub y1: Option<String>,
    #[arg(long)]
    pub y2: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fraction of ξ with the convergent identities checked.
    Cf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        /// Number of partial quotients.
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Convergent solutions of ‖Qξ‖ <= 1/(q|Q|).
    Dirichlet {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Solutions of ‖Qξ − α‖ <= q^{-2}/|Q|.
    Minkowski {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Exhaustive scan showing the inhomogeneous bound cannot be improved.
    Sharpness {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        qdeg: usize,
        /// Degrees cycled through by the partial quotients.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        degrees: Vec<usize>,
    },
    /// Monic solutions of ‖Qξ − α‖ <= q^{-1}/|Q|.
    Monic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// A pair (ξ, α) with ‖Qξ − α‖ <= Ψ(H), |Q| <= H insoluble on a height sequence.
    Casselspair {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// CSV with columns h, psi_h; defaults to psi_h = −⌈h/6⌉.
        #[arg(long)]
        psi_table: Option<std::path::PathBuf>,
    },
    /// Best orbit points γx near y, by brute force and by construction.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[command(flatten)]
        target: TargetArg,
        #[arg(long, default_value_t = 6)]
        hdeg: usize,
        #[arg(long, value_enum, default_value_t = Source::Both)]
        source: Source,
    },
    /// Exhaustive check that |γx| >= |x₂|/|Q_k| below |Q_{k+1}|.
    Lb {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Exhaustive check of the gap below the rational-slope construction.
    Gap {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long, default_value = "1/T+1")]
        slope: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Counts of SL₂ matrices with bounded columns, or unit-group sums.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        b1: usize,
        #[arg(long, default_value_t = 0)]
        b2: usize,
        /// Instead report the sum of Φ(f) over monic f of degrees 0..=N.
        #[arg(long)]
        phi: Option<usize>,
    },
    /// Finite-height exponent profiles.
    Exponent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        xi: XiArg,
        #[arg(long, value_enum, default_value_t = ExponentArg::Omega)]
        kind: ExponentArg,
        /// θ for the ω profiles; 0 when omitted.
        #[arg(long)]
        theta: Option<String>,
        #[command(flatten)]
        target: TargetArg,
        #[arg(long, default_value_t = 12)]
        hdeg: usize,
        #[arg(long, value_enum, default_value_t = Source::Construct)]
        source: Source,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Brute,
    Construct,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExponentArg {
    Omega,
    Mu,
}

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Output was written and records at least one counterexample.
    Falsified,
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Falsified => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Lib(e) => match e {
                Error::SearchSpaceTooLarge { .. }
                | Error::InsufficientTrust { .. }
                | Error::UndeterminedToPrecision
                | Error::TableExhausted(_) => 3,
                _ => 2,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Cf { common, xi, count } => commands::cf(&common, &xi, count),
        Command::Dirichlet { common, xi, count } => commands::dirichlet(&common, &xi, count),
        Command::Minkowski { common, xi, alpha, count } => commands::minkowski(&common, &xi, alpha.as_deref(), count),
        Command::Sharpness { common, qdeg, degrees } => commands::sharpness(&common, qdeg, &degrees),
        Command::Monic { common, xi, alpha, count } => commands::monic(&common, &xi, alpha.as_deref(), count),
        Command::Casselspair { common, steps, psi_table } => commands::cassels(&common, steps, psi_table.as_deref()),
        Command::Orbit { common, xi, target, hdeg, source } => commands::orbit(&common, &xi, &target, hdeg, source),
        Command::Lb { common, xi, k } => commands::lb(&common, &xi, k),
        Command::Gap { common, xi, slope, k } => commands::gap(&common, &xi, &slope, k),
        Command::Count { common, b1, b2, phi } => commands::count(&common, b1, b2, phi),
        Command::Exponent { common, xi, kind, theta, target, hdeg, source } => {
            commands::exponent(&common, &xi, kind, theta.as_deref(), &target, hdeg, source)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Falsified => eprintln!("fqdio: falsification recorded"),
                Failure::Usage(m) | Failure::Io(m) => eprintln!("fqdio: {m}"),
                Failure::Lib(e) => eprintln!("fqdio: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
