use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vdwe::io::commands::{self, Command, CommandFailure};
use vdwe::io::config;

#[derive(Parser)]
#[command(name = "vdwe", version, about = "Van der Waals Euler flows near vacuum: simulations and checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Integrate the configured problem; check decay, envelope, positivity and conservation.
    Simulate(Options),
    /// Finite-speed check: discrepancy inside the shrinking cone under refinement.
    ConeTest(Options),
    /// Equation-of-state round trip, thermodynamic identities and symmetrizability.
    EosCheck(Options),
    /// Burgers background against closed forms, a shooting oracle and decay rates.
    BackgroundCheck(Options),
    /// Interpolation and product inequalities on random bumps and along a run.
    InequalitySuite(Options),
    /// Manufactured-solution convergence, plus refits of a stored run in the output directory.
    Diagnose(Options),
}

#[derive(Args)]
struct Options {
    /// Configuration file of `section.key = value` lines.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "vdwe-out")]
    out: PathBuf,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Sub::Simulate(o) => (Command::Simulate, o),
        Sub::ConeTest(o) => (Command::ConeTest, o),
        Sub::EosCheck(o) => (Command::EosCheck, o),
        Sub::BackgroundCheck(o) => (Command::BackgroundCheck, o),
        Sub::InequalitySuite(o) => (Command::InequalitySuite, o),
        Sub::Diagnose(o) => (Command::Diagnose, o),
    };
    ExitCode::from(dispatch(command, &opts) as u8)
}

fn dispatch(command: Command, opts: &Options) -> i32 {
    if let Some(n) = opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("vdwe: cannot start {n} threads: {e}");
            return commands::EXIT_OTHER;
        }
    }
    let mut config = match config::load(&opts.config) {
        Ok(c) => c,
        Err(e) => {
            report_error(&e);
            return commands::exit_code(&e);
        }
    };
    if let Some(seed) = opts.seed {
        config.run.seed = seed;
    }
    match commands::execute(command, &config, &opts.out) {
        Ok(record) => {
            print!("{}", record.summary());
            commands::record_status(&record)
        }
        Err(CommandFailure { error, record }) => {
            if let Some(r) = record {
                print!("{}", r.summary());
            }
            report_error(&error);
            commands::exit_code(&error)
        }
    }
}

fn report_error(error: &vdwe::Error) {
    match error {
        vdwe::Error::Config(issues) => {
            eprintln!("vdwe: invalid configuration");
            for issue in issues {
                eprintln!("  {issue}");
            }
        }
        other => eprintln!("vdwe: {other}"),
    }
}
