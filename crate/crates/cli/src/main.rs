//! `condprob`: coherence, conjunction tables, bounds and p-entailment from the command line.

mod commands;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use condprob_core::logic::Universe;

use problem::Op;
use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "condprob",
    version,
    about = "Exact coherence checking for conditional events"
)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Largest number of atoms a problem may declare.
    #[arg(long, global = true, default_value_t = Universe::DEFAULT_MAX_ATOMS)]
    max_atoms: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coherence of an assessment and its extensions.
    Coherence {
        #[command(subcommand)]
        action: CoherenceAction,
    },
    /// Constituent table of a conjunction, disjunction or quasi conjunction.
    Table {
        file: PathBuf,
        #[arg(long)]
        op: Option<Op>,
        /// Comma-separated conditional names; defaults to the query or the whole family.
        #[arg(long, value_delimiter = ',')]
        on: Vec<String>,
        /// Replace symbols by the values assessed in the file.
        #[arg(long)]
        numeric: bool,
    },
    /// p-consistency and p-entailment of a catalog rule or a problem file.
    Entail {
        /// Rule name or path to a problem file.
        target: Option<String>,
        /// Run every catalog rule against its known verdict.
        #[arg(long, conflicts_with = "target")]
        all: bool,
    },
    /// The built-in catalog of inference rules.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Closed-form bounds and regions.
    Bounds {
        #[arg(value_enum)]
        kind: commands::BoundsKind,
        /// Probabilities as fractions or decimals.
        numbers: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum CoherenceAction {
    /// Decide coherence of the assessment in a problem file.
    Check { file: PathBuf },
    /// Interval of coherent values for a further quantity.
    Extend {
        file: PathBuf,
        /// Comma-separated conditional names of the target; defaults to the file's query.
        #[arg(long, value_delimiter = ',')]
        on: Vec<String>,
        #[arg(long)]
        op: Option<Op>,
    },
}

#[derive(Debug, Subcommand)]
enum RulesAction {
    /// Names, premises and conclusions.
    List,
    /// Decide the named rules, or all of them, with every procedure.
    Run { names: Vec<String> },
}

/// Outcome of a command: positive verdicts exit 0, negative ones exit 1.
pub struct Outcome {
    pub report: report::Report,
    pub positive: bool,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let max_atoms = cli.max_atoms;
    match &cli.command {
        Command::Coherence { action } => match action {
            CoherenceAction::Check { file } => {
                commands::coherence_check(&problem::load(file, max_atoms)?)
            }
            CoherenceAction::Extend { file, on, op } => {
                commands::extend(&problem::load(file, max_atoms)?, on, *op)
            }
        },
        Command::Table {
            file,
            op,
            on,
            numeric,
        } => commands::table(&problem::load(file, max_atoms)?, on, *op, *numeric),
        Command::Entail { target, all } => {
            if *all {
                commands::run_rules(&[], false)
            } else {
                let target = target
                    .as_deref()
                    .ok_or_else(|| anyhow::anyhow!("give a rule name, a problem file or --all"))?;
                commands::entail(target, max_atoms)
            }
        }
        Command::Rules { action } => match action {
            RulesAction::List => Ok(commands::list_rules()),
            RulesAction::Run { names } => commands::run_rules(names, true),
        },
        Command::Bounds { kind, numbers } => commands::bounds(*kind, numbers),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report.render(cli.format));
            if outcome.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
