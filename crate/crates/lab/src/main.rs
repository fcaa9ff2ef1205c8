use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ocs_lab::commands;
use ocs_lab::{ExperimentConfig, LabError};

/// Experiments on the overlapping cycles shuffle.
///
/// Exit codes: 0 success, 1 violation found, 2 invalid arguments,
/// 3 infeasible hypotheses.
#[derive(Parser)]
#[command(name = "ocs", version = env!("OCS_BUILD_ID"))]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: ExperimentConfig,
}

#[derive(Subcommand)]
enum Cmd {
    /// Position weights, norms, l_max, gamma, N_ell, spread triples, time selectors.
    Metric(Common),
    /// Exact single-card TV profile and mixing time.
    SingleCard(Common),
    /// Exact full-deck mixing for n <= 7 (8 with --allow-large).
    MixExact(Common),
    /// Monte-Carlo collision, spreading, targeting and occupancy estimates.
    Collide(Common),
    /// Coupled runs, or the scripted replay with --replay-worked-example.
    Couple(Common),
    /// Three-distance report for N <= nmax and the golden l_max check.
    Golden(Common),
    /// Quasi-uniform and random-walk bound validators.
    Appendix(Common),
}

fn resolve(c: Common) -> Result<ExperimentConfig, LabError> {
    Ok(match c.config {
        Some(path) => c.flags.over(ExperimentConfig::load(&path)?),
        None => c.flags,
    })
}

fn run(cli: Cli) -> Result<(), LabError> {
    match cli.cmd {
        Cmd::Metric(c) => commands::cmd_metric(resolve(c)?),
        Cmd::SingleCard(c) => commands::cmd_single_card(resolve(c)?),
        Cmd::MixExact(c) => commands::cmd_mix_exact(resolve(c)?),
        Cmd::Collide(c) => commands::cmd_collide(resolve(c)?),
        Cmd::Couple(c) => commands::cmd_couple(resolve(c)?),
        Cmd::Golden(c) => commands::cmd_golden(resolve(c)?),
        Cmd::Appendix(c) => commands::cmd_appendix(resolve(c)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
