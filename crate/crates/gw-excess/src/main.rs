//! Thin command-line front end over the library's batch runners.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use gw_excess::report::{self, exit_code, FieldSpec, RunConfig, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "gw-excess", version, about = "Exact Grothendieck-Witt-valued intersection counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Field: "rationals", a prime p, or p^m for an extension field.
    #[arg(short, long)]
    field: String,
    /// Input file (JSON), or "-" for stdin.
    #[arg(short, long)]
    input: Option<String>,
    /// Output format.
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the excess-bundle Euler number for a matrix of linear forms
    /// or a list of quadrics.
    Excess {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the isolated zeros and compare against the predicted class.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest residue degree to scan.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Evaluation budget (points scanned across all degrees).
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Seed for the quadric lift when the input is a matrix.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Saturation split, conormal freeness, modified Koszul homology, and
    /// the multiplication form of a homogeneous ideal.
    Residual {
        #[command(flatten)]
        common: Common,
        /// Degree bound for all per-degree computations.
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
    },
    /// Diagonalize a symmetric Gram matrix and report its GW invariants.
    Gw {
        #[command(flatten)]
        common: Common,
    },
    /// Search seeds for instances with completely enumerable zero loci and
    /// verify the first one found.
    RandomSearch {
        #[command(flatten)]
        common: Common,
        /// Number of quadrics (projective dimension).
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// First seed.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of seeds to try.
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
}

fn read_input(path: &Option<String>) -> Result<Value, String> {
    let Some(path) = path else {
        return Ok(Value::Null);
    };
    let raw = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    };
    serde_json::from_str(&raw).map_err(|e| format!("{path}: {e}"))
}

fn build_config(command: &Command) -> Result<RunConfig, String> {
    let (name, common) = match command {
        Command::Excess { common } => ("excess", common),
        Command::Verify { common, .. } => ("verify", common),
        Command::Residual { common, .. } => ("residual", common),
        Command::Gw { common } => ("gw", common),
        Command::RandomSearch { common, .. } => ("random-search", common),
    };
    let field = FieldSpec::parse(&common.field).map_err(|e| e.to_string())?;
    let input = read_input(&common.input)?;
    let mut config = RunConfig {
        schema_version: SCHEMA_VERSION,
        subcommand: name.into(),
        field,
        n: None,
        input,
        seed: None,
        max_degree: None,
        budget: None,
        count: None,
        format: common.format.clone(),
    };
    match command {
        Command::Excess { .. } | Command::Gw { .. } => {}
        Command::Verify { max_degree, budget, seed, .. } => {
            config.max_degree = Some(*max_degree);
            config.budget = Some(*budget);
            config.seed = Some(*seed);
        }
        Command::Residual { max_degree, .. } => {
            config.max_degree = Some(*max_degree);
        }
        Command::RandomSearch { n, seed, count, max_degree, budget, .. } => {
            config.n = Some(*n);
            config.seed = Some(*seed);
            config.count = Some(*count);
            config.max_degree = Some(*max_degree);
            config.budget = Some(*budget);
        }
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli.command) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(exit_code::INADMISSIBLE as u8);
        }
    };
    let common = match &cli.command {
        Command::Excess { common }
        | Command::Verify { common, .. }
        | Command::Residual { common, .. }
        | Command::Gw { common }
        | Command::RandomSearch { common, .. } => common.clone(),
    };
    match report::run(&config) {
        Ok(outcome) => {
            let rendered = if config.format == "json" {
                outcome
                    .documents
                    .iter()
                    .map(|d| serde_json::to_string(d).expect("serializable"))
                    .collect::<Vec<_>>()
                    .join("\n")
                    + "\n"
            } else {
                outcome.text.clone()
            };
            match &common.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: {path}: {e}");
                        return ExitCode::from(exit_code::USAGE as u8);
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::error_exit_code(&e) as u8)
        }
    }
}
