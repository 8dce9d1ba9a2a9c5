//! `metab`: command-line front end for the exact metabelian toolkit.
//!
//! Exit codes: 0 on success, 1 for invalid input (including setup
//! violations), 2 for an internal consistency failure.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invalid setup")]
    InvalidSetup(Vec<String>),
    #[error("{0}")]
    Consistency(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::InvalidSetup(_) => 1,
            CliError::Consistency(_) => 2,
        }
    }
}

impl From<metab_core::Error> for CliError {
    fn from(e: metab_core::Error) -> Self {
        match e {
            metab_core::Error::Consistency(m) => CliError::Consistency(m),
            metab_core::Error::InvalidSetup(v) => CliError::InvalidSetup(v.iter().map(|x| x.to_string()).collect()),
            other => CliError::Input(other.to_string()),
        }
    }
}

const CHAR_HELP: &str = "Character coordinates are listed in the order q-1, q0, ..., qn of the \
first block, then the generators of later blocks; entries are integers or rationals p/q.";

#[derive(Parser, Debug)]
#[command(name = "metab", version, about = "Exact computations for split metabelian groups", after_help = CHAR_HELP)]
pub struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SetupArgs {
    /// Setup file (JSON with ascending coefficient lists).
    #[arg(long)]
    pub setup: Option<PathBuf>,
    /// Alternative to --setup: the integer k.
    #[arg(long, requires = "polys", conflicts_with = "setup")]
    pub k: Option<u64>,
    /// Alternative to --setup: comma-separated polynomials, e.g. "x, x+1, x+2".
    #[arg(long, requires = "k", conflicts_with = "setup")]
    pub polys: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// The complement family of the n = 2 example.
    Theoremb,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a setup and print its invariants.
    Validate(SetupArgs),
    /// Evaluate valuations on an element such as "2x+1 / x(x+1)".
    Val {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long)]
        elem: String,
        /// Valuation names (w, v0, v1, ..., p3); defaults to every member of V.
        #[arg(long, value_delimiter = ',')]
        valuation: Vec<String>,
    },
    /// List the characters of V, or run the open-halfspace test on --char.
    Chars {
        #[command(flatten)]
        setup: SetupArgs,
        /// Characters separated by ';'.
        #[arg(long = "char", allow_hyphen_values = true)]
        chars: Option<String>,
    },
    /// Search for a centralizer witness for a character class.
    Witness {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long = "char", allow_hyphen_values = true)]
        chars: String,
        /// "support,exp_box,degree".
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Check m-tameness of a complement family.
    Tame {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "theoremb")]
        family: Family,
    },
    /// Compare witness search with the complement family on a grid of classes.
    #[command(name = "verify-theoremb")]
    VerifyTheoremb {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        /// Cap on the number of classes; 0 for no cap.
        #[arg(long, default_value_t = 200)]
        max_classes: usize,
    },
    /// Build the union of seed lines in a character tree.
    #[command(name = "tree-ball")]
    TreeBall {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long, default_value = "v0")]
        valuation: String,
        /// Comma-separated seed labels.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        seeds: String,
        /// "lo,hi" height window.
        #[arg(long, default_value = "0,6", allow_hyphen_values = true)]
        window: String,
    },
    /// Orbit representatives of [[W]], or the reduction of a point of W.
    Orbits {
        #[command(flatten)]
        setup: SetupArgs,
        /// A rational point (w, v0, ..., vn).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Find a common label for vertices of the trees of V.
    Crt {
        #[command(flatten)]
        setup: SetupArgs,
        /// Comma-separated labels for w, v0, ..., vn.
        #[arg(long, allow_hyphen_values = true)]
        labels: String,
        /// Comma-separated heights for w, v0, ..., vn.
        #[arg(long, allow_hyphen_values = true)]
        heights: String,
    },
    /// Stabilizer data of a vertex of the complex.
    Stabilizer {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long, default_value_t = 0)]
        sw: i64,
    },
    /// Check that every m-subset of V lies in an open halfspace.
    Connectivity {
        #[command(flatten)]
        setup: SetupArgs,
        #[arg(long)]
        m: usize,
    },
    /// Order of the second cohomology group, by both computations.
    H2 {
        #[command(flatten)]
        setup: SetupArgs,
    },
    /// Fixed-point order for k and values f_j(1).
    Fixedpoints {
        #[arg(long)]
        setup: Option<PathBuf>,
        #[arg(long, conflicts_with = "setup", requires = "values")]
        k: Option<u64>,
        /// Comma-separated values; defaults to f_j(1) of the setup.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
    },
}

fn main() -> ExitCode {
    // usage errors are invalid input; clap's own exit code 2 is reserved here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{}", report.to_text());
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            match &e {
                CliError::InvalidSetup(v) => {
                    eprintln!("error: invalid setup");
                    for x in v {
                        eprintln!("  - {}", x);
                    }
                }
                other => eprintln!("error: {}", other),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
