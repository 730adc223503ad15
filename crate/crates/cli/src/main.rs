//! `ijshatter`: shattering, dimensions, bounds, branching, constructions,
//! configuration containment and exact forb search from the command line.
//!
//! Exit status: 0 on success, 1 when the queried property does not hold,
//! 2 on usage, input or envelope errors.

mod commands;
mod input;
mod report;

use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "ijshatter", version, about = "(i,j)-shattering toolkit for k-ary codes")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All six dimensions of a code, with witnesses.
    Dims(commands::dims::Args),
    /// Test a coordinate set for shattering, or list s-vector violations.
    Shatter(commands::shatter::Args),
    /// Evaluate a bound.
    Bound(commands::bound::Args),
    /// Run the branching process on a code.
    Branch(commands::branch::Args),
    /// Build a structured code.
    Construct(commands::construct::Args),
    /// Configuration queries.
    Config(commands::config::Args),
    /// Exact forb value by exhaustive search.
    Forb(commands::forb::Args),
}

pub struct Context {
    pub threads: usize,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context {
        threads: cli
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1),
    };
    let start = Instant::now();
    let result: anyhow::Result<Outcome> = match &cli.command {
        Command::Dims(args) => commands::dims::run(args, &ctx),
        Command::Shatter(args) => commands::shatter::run(args, &ctx),
        Command::Bound(args) => commands::bound::run(args, &ctx),
        Command::Branch(args) => commands::branch::run(args, &ctx),
        Command::Construct(args) => commands::construct::run(args, &ctx),
        Command::Config(args) => commands::config::run(args, &ctx),
        Command::Forb(args) => commands::forb::run(args, &ctx),
    };
    match result {
        Ok(outcome) => {
            let status = if outcome.holds { 0 } else { 1 };
            let report = Report::new(argv[1..].to_vec(), outcome, start.elapsed());
            let body = if cli.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
