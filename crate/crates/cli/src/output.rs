use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::args::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Residuals {
    /// `numeric_sup - closed_form`.
    pub sandwich: Option<f64>,
    /// Largest relation residual of the closed-form optimal element.
    pub relations: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceTableRow {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub theta: f64,
    pub closed_form: f64,
    pub numeric_sup: Option<f64>,
    pub ball_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Residuals>,
}

#[derive(Serialize)]
struct CsvRow {
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    theta: f64,
    closed_form: f64,
    numeric_sup: Option<f64>,
    ball_norm: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual over all cases.
    pub residual: f64,
    pub tolerance: f64,
    /// Failing cases or the reason the check could not run.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Report<C: Serialize> {
    pub config: C,
    pub rows: Vec<DistanceTableRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl<C: Serialize> Report<C> {
    pub fn failed_checks(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.to_string())
            .collect()
    }

    pub fn render(&self, format: Format, mode_note: Option<&str>) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &self.rows {
                    w.serialize(CsvRow {
                        m: r.m,
                        n: r.n,
                        k: r.k,
                        l: r.l,
                        theta: r.theta,
                        closed_form: r.closed_form,
                        numeric_sup: r.numeric_sup,
                        ball_norm: r.ball_norm,
                    })?;
                }
                if self.rows.is_empty() {
                    w.write_record(["m", "n", "k", "l", "theta", "closed_form", "numeric_sup", "ball_norm"])?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
            }
            Format::Text => Ok(self.text(mode_note)),
        }
    }

    fn text(&self, mode_note: Option<&str>) -> String {
        let mut s = String::new();
        if let Some(note) = mode_note {
            let _ = writeln!(s, "# {note}");
        }
        if !self.rows.is_empty() {
            let _ = writeln!(
                s,
                "{:>9} {:>9} {:>10} {:>12} {:>12} {:>12}",
                "from", "to", "theta", "closed_form", "numeric_sup", "ball_norm"
            );
            for r in &self.rows {
                let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), sig8);
                let _ = writeln!(
                    s,
                    "{:>9} {:>9} {:>10} {:>12} {:>12} {:>12}",
                    format!("({},{})", r.m, r.n),
                    format!("({},{})", r.k, r.l),
                    sig8(r.theta),
                    sig8(r.closed_form),
                    opt(r.numeric_sup),
                    opt(r.ball_norm)
                );
            }
        }
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{status} {:<22} residual {:>12}  tol {}",
                c.name,
                sig8(c.residual),
                sig8(c.tolerance)
            );
            for f in &c.failures {
                let _ = writeln!(s, "     {f}");
            }
        }
        s
    }
}

/// Rounds to 8 significant digits.
pub fn sig8(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..8).contains(&exp) {
        return format!("{x:.7e}");
    }
    let decimals = (7 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn emit(text: &str, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
