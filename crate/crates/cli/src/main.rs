//! `quasifree` command-line tool.

mod commands;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "quasifree",
    version,
    about = "Quasi-free fermionic states and channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a symbol (MatrixDocument) or a channel (ChannelDocument).
    Validate { input: PathBuf },
    /// Von Neumann entropy of a symbol, or Renyi entropy with --p.
    Entropy {
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
    },
    /// Relative entropy S(first || second).
    Relent { first: PathBuf, second: PathBuf },
    /// Apply a channel to a symbol --steps times.
    Evolve {
        channel: PathBuf,
        state: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
    },
    /// Closed exponential form of the Choi matrix: {scale, argument}.
    Choi { channel: PathBuf },
    /// Symbol of the Jamiolkowski state.
    Jamiolkowski { channel: PathBuf },
    /// Spectrum of the exponential element of a square matrix.
    Spectrum { input: PathBuf },
    /// Cross-check symbol formulas against the dense Fock-space oracle.
    OracleCheck {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time entropy and channel application at large d.
    Bench {
        #[arg(long, value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(u64).range(1..))]
        dims: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(command: Command) -> Result<(String, bool), commands::CliError> {
    let ok = |s: String| (s, true);
    match command {
        Command::Validate { input } => commands::validate(&input).map(ok),
        Command::Entropy { input, p } => commands::entropy(&input, p).map(ok),
        Command::Relent { first, second } => commands::relent(&first, &second).map(ok),
        Command::Evolve {
            channel,
            state,
            steps,
        } => commands::evolve(&channel, &state, steps as usize).map(ok),
        Command::Choi { channel } => commands::choi(&channel).map(ok),
        Command::Jamiolkowski { channel } => commands::jamiolkowski(&channel).map(ok),
        Command::Spectrum { input } => commands::spectrum(&input).map(ok),
        Command::OracleCheck { d, trials, seed } => commands::oracle_check(d, trials, seed),
        Command::Bench { dims, seed } => {
            let dims: Vec<usize> = dims.into_iter().map(|d| d as usize).collect();
            commands::bench(&dims, seed).map(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((text, passed)) => {
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
