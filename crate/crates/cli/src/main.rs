//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 config/validation error,
//! 3 numerical invariant failure (with `--check`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vibron::Tolerances;
use vibron_cli::config::load_config;
use vibron_cli::error::{CliError, CliResult};
use vibron_cli::{compare, run};

#[derive(Parser)]
#[command(
    name = "vibron",
    about = "Pseudomode dynamics for open quantum systems",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario from a JSON config and write CSV/JSON outputs.
    Run(RunArgs),
    /// Compare two trajectory CSV files on the same grid.
    Compare(CompareArgs),
    /// Derive the FMO-dimer parameter report from a JSON config.
    FmoReport(FmoArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the scenario config (flat JSON, one scenario per file).
    config: PathBuf,
    /// Validate every emitted state and scenario invariant; fail with exit
    /// code 3 on violation.
    #[arg(long)]
    check: bool,
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Tolerance override as key=value; keys: herm, tr, psd. Repeatable.
    #[arg(long = "tolerance", value_name = "K=V")]
    tolerances: Vec<String>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct FmoArgs {
    config: PathBuf,
    /// Directory for the report file.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn parse_tolerances(specs: &[String]) -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    for spec in specs {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance must be key=value, got {spec}")))?;
        let v: f64 = value
            .parse()
            .map_err(|e| CliError::Usage(format!("bad tolerance value {value}: {e}")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {v}")));
        }
        match key {
            "herm" => tol.herm = v,
            "tr" => tol.tr = v,
            "psd" => tol.psd = v,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown tolerance key {other} (expected herm, tr, psd)"
                )))
            }
        }
    }
    Ok(tol)
}

fn execute() -> CliResult<()> {
    let cli = Cli::try_parse().map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Run(args) => {
            let (config, raw) = load_config(&args.config)?;
            let opts = run::RunOptions {
                out_dir: args.out_dir,
                check: args.check,
                tolerances: parse_tolerances(&args.tolerances)?,
            };
            let outcome = run::run(&config, &raw, &opts)?;
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if args.check && !outcome.failures.is_empty() {
                for f in &outcome.failures {
                    eprintln!("check failed: {f}");
                }
                return Err(CliError::Numerical(format!(
                    "{} invariant violation(s)",
                    outcome.failures.len()
                )));
            }
            Ok(())
        }
        Command::Compare(args) => {
            let a = compare::load_csv(&args.a)?;
            let b = compare::load_csv(&args.b)?;
            let report = compare::compare(&a, &b)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::FmoReport(args) => {
            let (config, raw) = load_config(&args.config)?;
            if !matches!(config, vibron_cli::config::RunConfig::Fmo(_)) {
                return Err(CliError::Config(
                    "fmo-report expects a config with scenario = \"fmo\"".into(),
                ));
            }
            let opts = run::RunOptions {
                out_dir: args.out_dir,
                check: false,
                tolerances: Tolerances::default(),
            };
            let outcome = run::run(&config, &raw, &opts)?;
            for f in &outcome.files {
                let text = std::fs::read_to_string(f).map_err(|e| CliError::Io {
                    path: f.display().to_string(),
                    source: e,
                })?;
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
