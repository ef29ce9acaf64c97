use ncps_core::{
    constraint_relations, diagonal_commutator_norm, distance, optimal_element_general, sup_distance, FockLabel,
    PhaseSpaceParams, SupSolverConfig, Truncation,
};
use serde::Serialize;

use crate::args::RunConfig;
use crate::error::CliError;
use crate::output::{Check, DistanceTableRow, Report, Residuals};

pub const DEFAULT_THETAS: [f64; 4] = [0.0, 0.3, 0.6, 0.9];

/// Labels with both components at most 3, in row-major order.
pub fn small_labels() -> Vec<FockLabel> {
    (0..=3)
        .flat_map(|m| (0..=3).map(move |n| FockLabel::new(m, n)))
        .collect()
}

pub fn thetas(cfg: &RunConfig) -> Vec<f64> {
    cfg.theta.map_or_else(|| DEFAULT_THETAS.to_vec(), |t| vec![t])
}

pub fn params(cfg: &RunConfig, theta: f64) -> Result<PhaseSpaceParams, CliError> {
    Ok(PhaseSpaceParams::new(cfg.hbar, theta)?)
}

pub fn solver_config(cfg: &RunConfig) -> SupSolverConfig {
    SupSolverConfig {
        cutoff: cfg.cutoff,
        buffer: cfg.buffer,
        seed: cfg.seed,
        max_iters: cfg.max_iters,
        ..Default::default()
    }
}

pub fn mode_note(thetas: &[f64]) -> Option<&'static str> {
    thetas
        .iter()
        .all(|&t| t == 0.0)
        .then_some("Moyal limit (theta = 0): commutative phase space")
}

/// Closed form, and with `verify` the numeric supremum and the norm of the
/// closed-form optimal element.
pub fn table_row(
    cfg: &RunConfig,
    p: &PhaseSpaceParams,
    a: FockLabel,
    b: FockLabel,
    verify: bool,
) -> Result<DistanceTableRow, CliError> {
    let closed = distance(p, a, b).closed_form;
    let mut row = DistanceTableRow {
        m: a.m,
        n: a.n,
        k: b.m,
        l: b.n,
        theta: p.theta(),
        closed_form: closed,
        numeric_sup: None,
        ball_norm: None,
        residuals: None,
    };
    if verify {
        let sup = sup_distance(p, a, b, &solver_config(cfg))?;
        row.numeric_sup = Some(sup.value);
        let mut residuals = Residuals {
            sandwich: Some(sup.value - closed),
            relations: None,
        };
        if a != b {
            let trunc = Truncation::new(cfg.cutoff, cfg.buffer)?;
            let e = optimal_element_general(p, a, b, trunc)?;
            row.ball_norm = Some(diagonal_commutator_norm(&e, p, cfg.cutoff)?);
            residuals.relations = Some(constraint_relations(&e, p).max_residual);
        }
        row.residuals = Some(residuals);
    }
    Ok(row)
}

pub fn distance_table(
    cfg: &RunConfig,
    from: FockLabel,
    to: FockLabel,
    verify: bool,
) -> Result<Report<RunConfig>, CliError> {
    let p = params(cfg, cfg.theta.unwrap_or(0.0))?;
    let row = table_row(cfg, &p, from, to, verify)?;
    Ok(Report {
        config: cfg.clone(),
        rows: vec![row],
        checks: Vec::new(),
    })
}

pub fn export_table(cfg: &RunConfig, verify: bool) -> Result<Report<RunConfig>, CliError> {
    let origin = FockLabel::new(0, 0);
    let mut rows = Vec::new();
    for theta in thetas(cfg) {
        let p = params(cfg, theta)?;
        for b in small_labels() {
            rows.push(table_row(cfg, &p, origin, b, verify)?);
        }
    }
    Ok(Report {
        config: cfg.clone(),
        rows,
        checks: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub run: RunConfig,
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
    pub pairs: Vec<String>,
}

pub fn sweep_thetas(cfg: &RunConfig, min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite() && min >= 0.0 && min <= max) {
        return Err(CliError::Usage(format!(
            "need 0 <= --theta-min <= --theta-max, got {min} and {max}"
        )));
    }
    // Rejects theta_max >= hbar before any row is computed.
    params(cfg, max)?;
    match steps {
        0 => Err(CliError::Usage("--steps must be positive".into())),
        1 if min == max => Ok(vec![min]),
        1 => Err(CliError::Usage("--steps must be at least 2 for a proper range".into())),
        _ => Ok((0..steps)
            .map(|i| {
                if i + 1 == steps {
                    max
                } else {
                    min + (max - min) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

pub fn sweep_table(
    cfg: SweepConfig,
    pairs: &[(FockLabel, FockLabel)],
    verify: bool,
) -> Result<Report<SweepConfig>, CliError> {
    let thetas = sweep_thetas(&cfg.run, cfg.theta_min, cfg.theta_max, cfg.steps)?;
    let mut rows = Vec::new();
    for &theta in &thetas {
        let p = params(&cfg.run, theta)?;
        for &(a, b) in pairs {
            rows.push(table_row(&cfg.run, &p, a, b, verify)?);
        }
    }

    let mut check = Check {
        name: "shortening",
        passed: true,
        residual: 0.0,
        tolerance: 1e-9,
        failures: Vec::new(),
    };
    let hbar = cfg.run.hbar;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let series = || rows.iter().skip(i).step_by(pairs.len());
        let Some(base) = series().find(|r| r.theta == 0.0).map(|r| r.closed_form) else {
            continue;
        };
        for r in series() {
            let expected = base * (1.0 - (r.theta / hbar).powi(2)).sqrt();
            let err = (r.closed_form - expected).abs();
            check.residual = check.residual.max(err);
            if err > check.tolerance {
                check.passed = false;
                check
                    .failures
                    .push(format!("({a})->({b}) theta={}: ratio off by {err:e}", r.theta));
            }
        }
    }
    Ok(Report {
        config: cfg,
        rows,
        checks: vec![check],
    })
}
