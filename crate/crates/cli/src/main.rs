use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use esl_core::arena::{self, Arena};
use esl_core::SolveError;

mod check;
mod solve;
mod sweep;

/// Energy and mean-payoff games: exact energy values, the `MP <= 0`
/// threshold and optimal strategies.
///
/// Exit codes: 0 success, 2 invalid input (including non-simple arenas),
/// 3 internal inconsistency, 4 disagreement with an oracle.
#[derive(Parser, Debug)]
#[command(name = "esl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an arena file.
    Solve(solve::SolveArgs),
    /// Print a random arena.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Largest absolute weight.
        #[arg(long)]
        w: i64,
        #[arg(long)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check every solver on an arena file against the oracles.
    Check {
        file: PathBuf,
    },
    /// Solve a family of random arenas with every variant and compare.
    Sweep(sweep::SweepArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Ndjson,
}

/// A failed command, mapped to the exit code ladder.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
    Disagreement(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
            Failure::Disagreement(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) | Failure::Disagreement(m) => m,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NotSimple { .. } => {
                Failure::Input(format!("{e}; rerun with --auto-lift for the threshold only"))
            }
            e if e.is_internal() => Failure::Internal(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub fn read_arena(path: &Path) -> Result<Arena, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    arena::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => solve::run(&args, out),
        Command::Gen { n, m, w, seed, output } => {
            let a = arena::generate_random(n, m, w, seed).map_err(|e| Failure::Input(e.to_string()))?;
            let text = arena::serialize(&a);
            match output {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Check { file } => check::run(&read_arena(&file)?, out),
        Command::Sweep(args) => sweep::run(&args, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
