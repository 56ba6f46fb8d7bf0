//! `fcat`: load presentation files, run the checkers, decide equivalences
//! and manage certificates.
//!
//! Exit codes: 0 all pass, 1 at least one failing finding, 2 usage or parse
//! error, 3 budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(
    name = "fcat",
    version,
    about = "Checks finite presentations of weak folded categories"
)]
struct Cli {
    /// Write the report as canonical JSON to this file (`-` for stdout)
    /// instead of the text rendering on stdout.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,

    /// State budget for enumerations; FCAT_BUDGET_STATES overrides the
    /// default, this flag overrides both.
    #[arg(long, global = true, value_name = "N")]
    budget_states: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural validation of a presentation file.
    Validate { file: PathBuf },
    /// Validation, globularity, horizontal composition and coherence.
    Check(CheckArgs),
    /// Decide whether two objects are equivalent.
    Equiv {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Mode::Optimistic)]
        mode: Mode,
        /// Write the certificate here when the objects are equivalent.
        #[arg(long, value_name = "OUT")]
        emit_cert: Option<PathBuf>,
    },
    /// Check a certificate against a presentation.
    CertVerify { file: PathBuf, cert: PathBuf },
    /// Cell levels, discreteness and shape.
    Cells {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
    },
    /// Export a derived structure as a presentation file.
    Derive {
        #[command(subcommand)]
        what: DeriveWhat,
    },
    /// Build a presentation from a category, strict 2-category or graph.
    Import {
        kind: ImportKind,
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Longest generating path kept (graphs only need more than 1).
        #[arg(long, default_value_t = 1)]
        path_budget: usize,
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
    },
    /// Read the underlying category out of a category-shaped presentation.
    Extract {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    file: PathBuf,
    /// Comma-separated subset of a1,a2,b.
    #[arg(long, value_delimiter = ',', default_value = "a1,a2,b")]
    axioms: Vec<String>,
    #[arg(long, default_value_t = 4)]
    max_path_len: usize,
    #[arg(long, value_enum, default_value_t = Mode::Optimistic)]
    mode: Mode,
    /// Largest arity for the horizontal composition checks.
    #[arg(long, default_value_t = 3)]
    max_arity: usize,
}

#[derive(Subcommand, Debug)]
enum DeriveWhat {
    /// The arrow category.
    ArrowCat {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
    },
    /// The power structure of arity N.
    Power {
        n: usize,
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ImportKind {
    Category,
    TwoCategory,
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Optimistic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fcat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
