use ncps_core::fock::ladder_interior_defect;
use ncps_core::numeric::{brute_force_oracle, OracleConfig};
use ncps_core::{
    check_additivity, check_pythagoras, constraint_relations, diagonal_commutator_norm, dirac_commutator,
    dirac_operator, distance, gamma_matrices, gh_grid, optimal_element_general, scale_to_ball, sup_distance,
    DiagonalElement, Error, Extension, FockLabel, PhaseSpaceParams, Truncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::RunConfig;
use crate::commands::{params, small_labels, solver_config, thetas};
use crate::error::CliError;
use crate::output::{Check, DistanceTableRow, Report, Residuals};

const ALGEBRA_TOL: f64 = 1e-12;
const GH_TOL: f64 = 1e-10;
const RELATION_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-12;
const ORACLE_SAMPLES: usize = 50;

struct Tally {
    check: Check,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            check: Check {
                name,
                passed: true,
                residual: 0.0,
                tolerance,
                failures: Vec::new(),
            },
        }
    }

    /// Records `residual`; fails the check if it exceeds the tolerance.
    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.check.residual = self.check.residual.max(residual);
        if residual.is_nan() || residual > self.check.tolerance {
            self.fail(format!("{}: residual {residual:e}", case()));
        }
    }

    fn fail(&mut self, why: String) {
        self.check.passed = false;
        self.check.failures.push(why);
    }

    fn done(self) -> Check {
        self.check
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report<RunConfig>, CliError> {
    let grid: Vec<PhaseSpaceParams> = thetas(cfg)
        .into_iter()
        .map(|t| params(cfg, t))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = vec![gamma_check(), dirac_check(cfg, &grid)?, ladder_check(cfg)?];
    checks.push(gh_check(cfg, &grid, &mut rng)?);
    checks.push(consistency_check(cfg, &grid, &mut rng)?);
    let (saturation, sandwich, rows) = ball_and_sandwich(cfg, &grid)?;
    checks.push(saturation);
    checks.push(sandwich);
    checks.extend(identity_checks(&grid));
    Ok(Report {
        config: cfg.clone(),
        rows,
        checks,
    })
}

fn gamma_check() -> Check {
    let mut t = Tally::new("gamma-anticommutation", 0.0);
    t.record(gamma_matrices().anticommutator_defect(), || "gamma set".into());
    t.done()
}

fn dirac_check(cfg: &RunConfig, grid: &[PhaseSpaceParams]) -> Result<Check, CliError> {
    let mut t = Tally::new("dirac-hermitian", ALGEBRA_TOL);
    for p in grid {
        let defect = dirac_operator(p, cfg.cutoff)?.hermiticity_defect();
        t.record(defect, || format!("theta={}", p.theta()));
    }
    Ok(t.done())
}

fn ladder_check(cfg: &RunConfig) -> Result<Check, CliError> {
    let mut t = Tally::new("ladder-interior", ALGEBRA_TOL);
    t.record(ladder_interior_defect(cfg.cutoff)?, || format!("cutoff={}", cfg.cutoff));
    Ok(t.done())
}

/// Diagonals of `UU^+`, `U^+U`, `VV^+`, `V^+V` against the G/H formulas on
/// the interior, for a random diagonal element on the full grid.
fn gh_check(cfg: &RunConfig, grid: &[PhaseSpaceParams], rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut t = Tally::new("gh-diagonal-formulas", GH_TOL);
    let n = cfg.cutoff;
    for p in grid {
        let e = DiagonalElement::from_fn(n, n, Extension::Fill(0.0), |_, _| rng.random_range(-1.0..1.0))?;
        let comm = dirac_commutator(&dirac_operator(p, n)?, &e.to_operator(n)?)?;
        let [u_rows, u_cols, v_rows, v_cols] = comm.gram_diagonals();
        let gh = gh_grid(&e);
        let t2 = p.t() * p.t();
        let mut worst = 0.0f64;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let k = FockLabel::new(i, j).index(n);
                let expected = [
                    gh.g(i + 1, j) + t2 * gh.h(i, j + 1),
                    gh.g(i, j) + t2 * gh.h(i, j),
                    gh.h(i, j + 1) + t2 * gh.g(i + 1, j),
                    gh.h(i, j) + t2 * gh.g(i, j),
                ];
                for (got, want) in [u_rows[k], u_cols[k], v_rows[k], v_cols[k]].into_iter().zip(expected) {
                    worst = worst.max((got - want).abs());
                }
            }
        }
        t.record(worst, || format!("theta={}", p.theta()));
    }
    Ok(t.done())
}

/// Every element on the ball satisfies the four relations.
fn consistency_check(cfg: &RunConfig, grid: &[PhaseSpaceParams], rng: &mut ChaCha8Rng) -> Result<Check, CliError> {
    let mut t = Tally::new("constraint-consistency", RELATION_TOL);
    let size = 4.min(cfg.cutoff);
    for p in grid {
        for sample in 0..20 {
            let e = DiagonalElement::from_fn(size, size, Extension::Clamp, |_, _| rng.random_range(-1.0..1.0))?;
            let on_ball = match scale_to_ball(&e, p, cfg.cutoff) {
                Ok(x) => x,
                Err(Error::ZeroElement) => continue,
                Err(other) => return Err(other.into()),
            };
            let worst = constraint_relations(&on_ball, p).max_residual;
            t.record(worst, || format!("theta={} sample {sample}", p.theta()));
        }
    }
    Ok(t.done())
}

/// Saturation of the closed-form optimal elements and the sandwich
/// `oracle <= numeric sup ~ closed form`, for pairs from `(0,0)`.
fn ball_and_sandwich(
    cfg: &RunConfig,
    grid: &[PhaseSpaceParams],
) -> Result<(Check, Check, Vec<DistanceTableRow>), CliError> {
    let mut saturation = Tally::new("ball-saturation", cfg.saturation_tol);
    let mut sandwich = Tally::new("oracle-sandwich", cfg.sandwich_tol);
    let mut rows = Vec::new();
    let origin = FockLabel::new(0, 0);
    let trunc = Truncation::new(cfg.cutoff, cfg.buffer)?;
    let solver = solver_config(cfg);
    let oracle_cfg = OracleConfig {
        cutoff: cfg.cutoff,
        buffer: cfg.buffer,
        samples: ORACLE_SAMPLES,
        seed: cfg.seed,
        include_closed_form: true,
    };
    for p in grid {
        let theta = p.theta();
        for b in small_labels().into_iter().skip(1) {
            let case = || format!("theta={theta} (0,0)->({b})");
            let closed = distance(p, origin, b).closed_form;
            let mut row = DistanceTableRow {
                m: 0,
                n: 0,
                k: b.m,
                l: b.n,
                theta,
                closed_form: closed,
                numeric_sup: None,
                ball_norm: None,
                residuals: None,
            };
            let mut residuals = Residuals::default();

            match optimal_element_general(p, origin, b, trunc) {
                Ok(e) => {
                    let norm = diagonal_commutator_norm(&e, p, cfg.cutoff)?;
                    let relations = constraint_relations(&e, p).max_residual;
                    saturation.record((norm - 1.0).abs(), || format!("{} norm {norm:.9}", case()));
                    if relations.abs() > RELATION_TOL {
                        saturation.fail(format!("{}: relation residual {relations:e}", case()));
                    }
                    row.ball_norm = Some(norm);
                    residuals.relations = Some(relations);
                }
                Err(err) => saturation.fail(format!("{}: {err}", case())),
            }

            match sup_distance(p, origin, b, &solver) {
                Ok(sup) => {
                    sandwich.record((sup.value - closed).abs(), || {
                        format!("{} numeric {:.9} closed form {closed:.9}", case(), sup.value)
                    });
                    let oracle = brute_force_oracle(p, origin, b, &oracle_cfg)?;
                    if oracle > sup.value + 1e-7 {
                        sandwich.fail(format!("{}: oracle {oracle:.9} above numeric {:.9}", case(), sup.value));
                    }
                    row.numeric_sup = Some(sup.value);
                    residuals.sandwich = Some(sup.value - closed);
                }
                Err(err) => sandwich.fail(format!("{}: {err}", case())),
            }
            row.residuals = Some(residuals);
            rows.push(row);
        }
    }
    Ok((saturation.done(), sandwich.done(), rows))
}

fn identity_checks(grid: &[PhaseSpaceParams]) -> [Check; 3] {
    let mut additivity = Tally::new("additivity", IDENTITY_TOL);
    let mut pythagoras = Tally::new("pythagoras", IDENTITY_TOL);
    let mut shortening = Tally::new("shortening", IDENTITY_TOL);
    for p in grid {
        let theta = p.theta();
        for m in 0..=6 {
            for n in 0..=6 {
                for k in 0..=6 {
                    for l in 0..=6 {
                        let case = || format!("theta={theta} (m,n,k,l)=({m},{n},{k},{l})");
                        additivity.record(check_additivity(p, m, n, k, l), case);
                        pythagoras.record(check_pythagoras(p, m, n, k, l), case);
                    }
                }
            }
        }
        let flat = PhaseSpaceParams::new(p.hbar(), 0.0).expect("theta = 0 is regular");
        let labels = small_labels();
        for &a in &labels {
            for &b in &labels {
                let d = distance(p, a, b).closed_form;
                let d0 = distance(&flat, a, b).closed_form;
                shortening.record((d - d0 * p.shortening_factor()).abs(), || {
                    format!("theta={theta} ({a})->({b})")
                });
            }
        }
    }
    [additivity.done(), pythagoras.done(), shortening.done()]
}
