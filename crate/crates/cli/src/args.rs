use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncps_core::FockLabel;
use serde::Serialize;

use crate::error::CliError;

pub const DEFAULT_CUTOFF: usize = 24;
pub const DEFAULT_BUFFER: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "ncps",
    version,
    about = "Spectral distances between Fock states on noncommutative phase space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two Fock states.
    Distance(DistanceArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Tabulate distances over a range of theta.
    Sweep(SweepArgs),
    /// Write the distance table for all pairs from (0,0) to labels up to 3,3.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Deformation parameter; mutually exclusive with --mu/--nu.
    #[arg(long, conflicts_with_all = ["mu", "nu"])]
    pub theta: Option<f64>,
    /// Position-position deformation; theta = sqrt(mu * nu).
    #[arg(long, requires = "nu")]
    pub mu: Option<f64>,
    /// Momentum-momentum deformation.
    #[arg(long, requires = "mu")]
    pub nu: Option<f64>,
    /// Fock cutoff per mode [default: $NCPS_DEFAULT_CUTOFF or 24].
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Levels kept free below the cutoff [default: min(8, cutoff - 1)].
    #[arg(long)]
    pub buffer: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allowed |numeric - closed form| in the oracle sandwich.
    #[arg(long, default_value_t = 1e-4)]
    pub sandwich_tol: f64,
    /// Allowed |norm - 1| for closed-form optimal elements.
    #[arg(long, default_value_t = 1e-6)]
    pub saturation_tol: f64,
    /// Newton step budget of the numeric solver.
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_label)]
    pub from: FockLabel,
    #[arg(long, value_parser = parse_label)]
    pub to: FockLabel,
    /// Also run the numeric supremum and the ball check.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Pair as "m,n:k,l"; repeatable [default: 0,0:1,0].
    #[arg(long = "pair", value_parser = parse_pair)]
    pub pairs: Vec<(FockLabel, FockLabel)>,
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub verify: bool,
}

fn parse_label(s: &str) -> Result<FockLabel, String> {
    FockLabel::from_str(s).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<(FockLabel, FockLabel), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("pair {s:?} must look like m,n:k,l"))?;
    Ok((parse_label(a)?, parse_label(b)?))
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub cutoff: usize,
    pub buffer: usize,
    pub seed: u64,
    pub format: Format,
    pub sandwich_tol: f64,
    pub saturation_tol: f64,
    pub max_iters: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(c: &Common, default_format: Format, env_cutoff: Option<&str>) -> Result<Self, CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if !(c.hbar.is_finite() && c.hbar > 0.0) {
            return usage(format!("--hbar must be positive, got {}", c.hbar));
        }
        let theta = match (c.theta, c.mu, c.nu) {
            (Some(t), _, _) => Some(t),
            (None, Some(mu), Some(nu)) => {
                if !(mu.is_finite() && mu > 0.0 && nu.is_finite() && nu > 0.0) {
                    return usage(format!("--mu and --nu must be positive, got {mu} and {nu}"));
                }
                Some((mu * nu).sqrt())
            }
            _ => None,
        };
        if let Some(t) = theta {
            if !(t.is_finite() && t >= 0.0) {
                return usage(format!("--theta must be non-negative, got {t}"));
            }
        }
        let cutoff = match (c.cutoff, env_cutoff) {
            (Some(n), _) => n,
            (None, Some(v)) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("NCPS_DEFAULT_CUTOFF={v:?} is not an integer")))?,
            (None, None) => DEFAULT_CUTOFF,
        };
        if cutoff < 2 {
            return usage(format!("--cutoff must be at least 2, got {cutoff}"));
        }
        let buffer = c.buffer.unwrap_or(DEFAULT_BUFFER.min(cutoff - 1));
        if buffer >= cutoff {
            return usage(format!("--buffer {buffer} must be below --cutoff {cutoff}"));
        }
        if c.max_iters == 0 {
            return usage("--max-iters must be positive".into());
        }
        for (name, tol) in [
            ("--sandwich-tol", c.sandwich_tol),
            ("--saturation-tol", c.saturation_tol),
        ] {
            if !(tol.is_finite() && tol > 0.0) {
                return usage(format!("{name} must be positive, got {tol}"));
            }
        }
        Ok(Self {
            hbar: c.hbar,
            theta,
            mu: c.mu,
            nu: c.nu,
            cutoff,
            buffer,
            seed: c.seed,
            format: c.format.unwrap_or(default_format),
            sandwich_tol: c.sandwich_tol,
            saturation_tol: c.saturation_tol,
            max_iters: c.max_iters,
            out: c.out.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(args: &[&str]) -> Common {
        let mut full = vec!["ncps", "verify"];
        full.extend_from_slice(args);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Verify(v) => v.common,
            _ => unreachable!(),
        }
    }

    #[test]
    fn buffer_default_follows_cutoff() {
        let c = RunConfig::resolve(&common(&["--cutoff", "4"]), Format::Text, None).unwrap();
        assert_eq!((c.cutoff, c.buffer), (4, 3));
        let c = RunConfig::resolve(&common(&[]), Format::Text, None).unwrap();
        assert_eq!((c.cutoff, c.buffer), (24, 8));
    }

    #[test]
    fn environment_cutoff() {
        let c = RunConfig::resolve(&common(&[]), Format::Text, Some("30")).unwrap();
        assert_eq!(c.cutoff, 30);
        let c = RunConfig::resolve(&common(&["--cutoff", "12"]), Format::Text, Some("30")).unwrap();
        assert_eq!(c.cutoff, 12);
        assert!(RunConfig::resolve(&common(&[]), Format::Text, Some("many")).is_err());
    }

    #[test]
    fn mu_nu_reduce_to_theta() {
        let c = RunConfig::resolve(&common(&["--mu", "0.2", "--nu", "0.8"]), Format::Text, None).unwrap();
        assert!((c.theta.unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn theta_excludes_mu() {
        let r = Cli::try_parse_from(["ncps", "verify", "--theta", "0.1", "--mu", "0.1", "--nu", "0.1"]);
        assert!(r.is_err());
    }

    #[test]
    fn pair_syntax() {
        let (a, b) = parse_pair("0,0:2,1").unwrap();
        assert_eq!((a, b), (FockLabel::new(0, 0), FockLabel::new(2, 1)));
        assert!(parse_pair("0,0-2,1").is_err());
        assert!(parse_label("1, 2").is_err());
    }
}
