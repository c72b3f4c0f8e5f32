#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::Outcome;
use config::{Common, RunConfig};
use petal::Error;

#[derive(Parser)]
#[command(name = "petal", version, about = "Parabolic implosion numerics: fixed points, Fatou coordinates, rays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the bifurcating fixed pair and check the fixed-point sum
    FixedPoints(Common),
    /// Certify the Fatou or Douady-Fatou charts and their horn normalization
    Fatou(Common),
    /// Compute the phase B and the multiplier check
    PhaseB(Common),
    /// Trace a fixed dynamic ray
    Ray(Common),
    /// Trace the parameter curve of the fixed ray
    ParamRay(Common),
    /// Run a verification suite or replay an emitted CSV
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    MultiplierPhase,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "replay", required_unless_present = "replay")]
    suite: Option<Suite>,
    /// CSV written by `ray` or `param-ray`; its JSON sidecar must sit beside it
    #[arg(long, value_name = "CSV")]
    replay: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

fn set_threads() -> petal::Result<()> {
    let Ok(text) = std::env::var("PETAL_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("PETAL_THREADS must be a positive integer, got '{text}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
}

fn run(cmd: Command) -> petal::Result<Outcome> {
    set_threads()?;
    match cmd {
        Command::FixedPoints(c) => commands::fixed_points(&RunConfig::resolve(&c, "normalized")?),
        Command::Fatou(c) => commands::fatou(&RunConfig::resolve(&c, "normalized")?),
        Command::PhaseB(c) => commands::phase(&RunConfig::resolve(&c, "normalized")?),
        Command::Ray(c) => commands::ray(&RunConfig::resolve(&c, "quadratic")?),
        Command::ParamRay(c) => commands::param_ray(&RunConfig::resolve(&c, "quadratic")?),
        Command::Verify(v) => {
            let rc = RunConfig::resolve(&v.common, "normalized")?;
            match (v.suite, v.replay) {
                (_, Some(path)) => verify::replay(&path, &rc),
                (Some(Suite::MultiplierPhase), None) => verify::suite_multiplier_phase(&rc),
                (None, None) => Err(Error::InvalidInput("verify needs --suite or --replay".into())),
            }
        }
    }
}

fn diagnostic(kind: &str, message: &str) {
    eprintln!("{}", json!({ "kind": kind, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnostic("UsageError", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(out) if out.violations.is_empty() => ExitCode::SUCCESS,
        Ok(out) => {
            for v in &out.violations {
                diagnostic("ContractViolation", v);
            }
            ExitCode::from(1)
        }
        Err(e @ (Error::InvalidInput(_) | Error::CombNotFixed(_))) => {
            diagnostic(e.kind(), &e.to_string());
            ExitCode::from(2)
        }
        Err(e) => {
            diagnostic(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
    }
}
