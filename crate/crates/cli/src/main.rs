mod args;
mod commands;
mod error;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use ncps_core::FockLabel;

use args::{Cli, Command, Format, RunConfig};
use commands::{mode_note, thetas, SweepConfig};
use error::CliError;
use output::emit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncps: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let env_cutoff = std::env::var("NCPS_DEFAULT_CUTOFF").ok();
    let resolve = |c, format| RunConfig::resolve(c, format, env_cutoff.as_deref());
    match cli.command {
        Command::Distance(a) => {
            let cfg = resolve(&a.common, Format::Text)?;
            let report = commands::distance_table(&cfg, a.from, a.to, a.verify)?;
            let note = mode_note(&[cfg.theta.unwrap_or(0.0)]);
            emit(&report.render(cfg.format, note)?, &cfg)
        }
        Command::Verify(a) => {
            let cfg = resolve(&a.common, Format::Text)?;
            let report = verify::run(&cfg)?;
            emit(&report.render(cfg.format, mode_note(&thetas(&cfg)))?, &cfg)?;
            if cfg.format == Format::Csv {
                for c in &report.checks {
                    eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                }
            }
            let failed = report.failed_checks();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed(failed))
            }
        }
        Command::Sweep(a) => {
            let run = resolve(&a.common, Format::Text)?;
            if run.theta.is_some() {
                return Err(CliError::Usage(
                    "sweep takes --theta-min/--theta-max instead of --theta, --mu or --nu".into(),
                ));
            }
            let pairs = if a.pairs.is_empty() {
                vec![(FockLabel::new(0, 0), FockLabel::new(1, 0))]
            } else {
                a.pairs
            };
            let cfg = SweepConfig {
                run: run.clone(),
                theta_min: a.theta_min,
                theta_max: a.theta_max,
                steps: a.steps,
                pairs: pairs.iter().map(|(x, y)| format!("{x}:{y}")).collect(),
            };
            let report = commands::sweep_table(cfg, &pairs, a.verify)?;
            let note = (a.theta_max == 0.0).then_some("Moyal limit (theta = 0): commutative phase space");
            emit(&report.render(run.format, note)?, &run)?;
            let failed = report.failed_checks();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed(failed))
            }
        }
        Command::Export(a) => {
            let cfg = resolve(&a.common, Format::Csv)?;
            let report = commands::export_table(&cfg, a.verify)?;
            emit(&report.render(cfg.format, mode_note(&thetas(&cfg)))?, &cfg)
        }
    }
}
