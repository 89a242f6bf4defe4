//! `perfiso` command-line front end.
//!
//! Exit codes: 0 on success or a perfect verdict, 1 on a negative verdict
//! or a failed check, 2 on usage, parse and feasibility errors.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use perfiso::pigroup::{self, Mode};
use perfiso::{CharTable, Error, Prime, SignedIsometry};

use crate::output::Output;

#[derive(Parser, Debug)]
#[command(name = "perfiso", version, about = "Perfect self-isometries of the block of C_p")]
struct Cli {
    /// Prime order of the cyclic group.
    #[arg(short = 'p', global = true)]
    p: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Enumeration strategy for `enumerate` and `verify`.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::PositiveThenNegate)]
    mode: ModeArg,

    /// Seed for the randomized checks run by `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the character table.
    Chartab,
    /// Print the generalized character μ_I of an isometry.
    Mu {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Decide whether an isometry is perfect.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// List every perfect isometry.
    Enumerate,
    /// Affine coordinates (eps, a, u) of a perfect isometry.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Enumerate and verify the full group structure.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "exhaustive")]
    Exhaustive,
    #[value(name = "positive_then_negate")]
    PositiveThenNegate,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::PositiveThenNegate => Mode::PositiveThenNegate,
        }
    }
}

enum Failure {
    Usage(String),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let raw_p = cli
        .p
        .ok_or_else(|| Failure::Usage("missing -p <prime>".into()))?;
    let p = Prime::new(raw_p)?;
    let out = Output::new(cli.format, p);
    let parse = |lit: &str| SignedIsometry::parse(p, lit).map_err(Failure::from);

    match cli.command {
        Command::Chartab => out.chartab(&CharTable::new(p)),
        Command::Mu { map } => out.mu(&parse(&map)?),
        Command::Check { map } => {
            let iso = parse(&map)?;
            let verdict = perfiso::is_perfect(&iso);
            let spaces = perfiso::check_perfect_via_spaces(&iso);
            assert_eq!(
                verdict.kind(),
                spaces.kind(),
                "perfectness checkers disagree on {iso}"
            );
            out.check(&iso, &verdict, &spaces);
            if !verdict.is_perfect() {
                return Err(Failure::Negative);
            }
        }
        Command::Enumerate => {
            let report = pigroup::enumerate_pi(p, cli.mode.into())?;
            out.report(&report);
            if !report.all_pass() {
                return Err(Failure::Negative);
            }
        }
        Command::Decompose { map } => {
            let iso = parse(&map)?;
            let verdict = perfiso::is_perfect(&iso);
            if !verdict.is_perfect() {
                out.not_perfect(&iso, &verdict.to_string());
                return Err(Failure::Negative);
            }
            match pigroup::decompose(&iso) {
                Ok(coords) => out.decompose(&iso, &coords),
                Err(Error::NotPerfect(why)) => {
                    out.not_perfect(&iso, &why);
                    return Err(Failure::Negative);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify => {
            let report = pigroup::verify_structure(p, cli.mode.into(), cli.seed)?;
            out.report(&report);
            if !report.all_pass() {
                return Err(Failure::Negative);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
