use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use credal_cli::{execute, load_config, output, Group, Overrides};

#[derive(Parser)]
#[command(
    name = "credal",
    version,
    about = "Credal-set verification suites and strong-law experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Check tolerance; overrides the configuration.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Capacity and expectation axioms, the expectation chain, inequalities and truncation.
    Verify,
    /// Negative association, vertical independence and forward factorization.
    CheckDeps,
    /// Strong-law and transform experiments.
    Simulate,
    /// Every configured check.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let group = match cli.command {
        Command::Verify => Group::Verify,
        Command::CheckDeps => Group::Dependence,
        Command::Simulate => Group::Simulate,
        Command::All => Group::All,
    };
    let Some(path) = &cli.config else {
        eprintln!("error: --config is required");
        return ExitCode::from(2);
    };
    let overrides = Overrides {
        seed: cli.seed,
        tolerance: cli.tolerance,
    };
    let config = match load_config(path, overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("credal-out"));

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("config error: --jobs must be positive");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match pool.install(|| execute(&config, group)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::write_all(&out_dir, &config, &outcome) {
        eprintln!("error writing {}: {e}", out_dir.display());
        return ExitCode::from(1);
    }
    print!("{}", output::summary_text(&outcome));
    match outcome.first_failure() {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("check failed: {}", e.check);
            ExitCode::from(1)
        }
    }
}
