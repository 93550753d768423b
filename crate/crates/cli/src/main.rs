//! `lawmine`: encode series, mine rules, forecast and backtest.

mod commands;
mod config;
mod failure;

use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};
use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "lawmine", version, about = "Typed relational rule mining for numeric time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the encoded fact store (facts.tsv) and examples (examples.tsv).
    Encode,
    /// Learn rules; writes rules.txt, trace.tsv and counters.txt.
    Mine,
    /// Forecast next-day intervals and signs; writes forecast.tsv.
    Forecast {
        /// First day to forecast; rules are fit on outcomes known by its close.
        /// Defaults to the last row, fit on everything.
        #[arg(long)]
        from: Option<NaiveDate>,
        /// Forecast with the declared hypotheses as given, without fitting.
        #[arg(long)]
        use_hypotheses: bool,
    },
    /// Walk-forward evaluation; writes backtest.csv.
    Backtest {
        #[arg(long)]
        train_len: Option<usize>,
        #[arg(long)]
        test_len: Option<usize>,
        #[arg(long)]
        step: Option<usize>,
    },
    /// Print a summary of the declared knowledge.
    Inspect,
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = RunConfig::resolve(cli.flags)?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::config(format!("cannot start {jobs} workers: {e}")))?;
    }
    match cli.command {
        Command::Encode => commands::encode_cmd(&cfg),
        Command::Mine => commands::mine(&cfg),
        Command::Forecast { from, use_hypotheses } => commands::forecast(&cfg, from, use_hypotheses),
        Command::Backtest {
            train_len,
            test_len,
            step,
        } => {
            let mut walk = cfg.walk.clone();
            walk.train_len = train_len.unwrap_or(walk.train_len);
            walk.test_len = test_len.unwrap_or(walk.test_len);
            walk.step = step.or(walk.step);
            commands::backtest(&cfg, &walk)
        }
        Command::Inspect => commands::inspect(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{}", summary.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("lawmine: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
