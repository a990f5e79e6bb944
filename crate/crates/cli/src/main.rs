//! `hardy-embed`: embeddability analysis for composition and analytic
//! Toeplitz operators on H².
//!
//! Exit status: 0 ok, 1 a verification check failed, 2 invalid input,
//! 3 no concrete construction, 4 numeric failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_embed::C64;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Parser, Debug)]
#[command(name = "hardy-embed", version, about = "Embeddability of operators on H² into C0-semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verdict, governing result and construction for a symbol file.
    Analyze(Common),
    /// Sample the embedding semigroup at --times and dump matrices.
    Semigroup(Common),
    /// Solve B(z) = beta for a finite Blaschke product.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Target value, e.g. `0.25` or `0.1+0.2i`; sampled from --seed when absent.
        #[arg(long, value_parser = parse_complex)]
        beta: Option<C64>,
    },
    /// Frostman transform tau_lambda ∘ B.
    Frostman {
        #[command(flatten)]
        common: Common,
        /// Shift parameter; sampled from --seed when absent.
        #[arg(long, value_parser = parse_complex)]
        lambda: Option<C64>,
    },
    /// Wold decomposition of C_psi in H²_N.
    Wold(Common),
    /// Run the numerical checks on a symbol file or a stored sample; with
    /// no --input, run the harness self-test.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Symbol file (JSON), or for `verify` a stored sample.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Truncation dimension N.
    #[arg(long, default_value_t = 32, value_parser = parse_n)]
    pub n: usize,
    /// Numerical tolerance for the decision engine.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated sample times.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1")]
    pub times: Vec<f64>,
    /// Output file; a directory for `semigroup`. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 4 {
        return Err(format!("N = {n} must be at least 4"));
    }
    Ok(n)
}

fn parse_complex(s: &str) -> Result<C64, String> {
    s.replace(' ', "").parse::<C64>().map_err(|e| format!("{s}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(c) => commands::analyze(&c),
        Command::Semigroup(c) => commands::semigroup(&c),
        Command::Solve { common, beta } => commands::solve(&common, beta),
        Command::Frostman { common, lambda } => commands::frostman(&common, lambda),
        Command::Wold(c) => commands::wold(&c),
        Command::Verify(c) => commands::verify(&c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
