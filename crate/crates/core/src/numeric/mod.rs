//! Numerical supremum of `c_b - c_a` over diagonal elements in the unit ball.
//!
//! Elements live on the window `0 <= i, j < W` with `W = cutoff - buffer`
//! and continue constantly beyond it. For such an element every nonzero
//! entry of `[A_i, e]` sits inside `(W + 1) x (W + 1)`, so the ball condition
//! is evaluated exactly on that smaller grid and re-certified at the full
//! cutoff afterwards.

mod barrier;
mod oracle;
mod probe;

pub use oracle::{brute_force_oracle, OracleConfig};
pub use probe::{probe_off_diagonal, ProbeConfig, ProbeReport};

use num_complex::Complex64;
use serde::Serialize;

use crate::ball::{DiagonalElement, Extension, DEFAULT_TOL};
use crate::closed_form::Truncation;
use crate::error::{Error, Result};
use crate::fock::FockLabel;
use crate::params::PhaseSpaceParams;
use crate::sector::LevelStencils;
use crate::spectral::diagonal_commutator_norm;
use barrier::{Lmi, LmiEntry, Problem, Quadratic, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// The operator-norm ball itself.
    OperatorNorm,
    /// Only the four finite-difference relations. This is a relaxation, so
    /// its optimum can exceed the true distance.
    ConstraintRelations,
    Both,
}

/// Barrier weight schedule: start at `initial_weight`, multiply by `growth`
/// after each centering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierSchedule {
    pub initial_weight: f64,
    pub growth: f64,
}

impl Default for BarrierSchedule {
    fn default() -> Self {
        Self {
            initial_weight: 1.0,
            growth: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupSolverConfig {
    pub cutoff: usize,
    pub buffer: usize,
    /// Cap on the total number of Newton steps.
    pub max_iters: usize,
    pub schedule: BarrierSchedule,
    /// Target bound on the gap between the returned value and the optimum.
    pub tol_obj: f64,
    pub constraint_mode: ConstraintMode,
    /// Used by the randomized helpers; the solver itself is deterministic.
    pub seed: u64,
}

impl Default for SupSolverConfig {
    fn default() -> Self {
        Self {
            cutoff: 24,
            buffer: 8,
            max_iters: 5000,
            schedule: BarrierSchedule::default(),
            tol_obj: 1e-7,
            constraint_mode: ConstraintMode::OperatorNorm,
            seed: 42,
        }
    }
}

impl SupSolverConfig {
    pub fn truncation(&self) -> Result<Truncation> {
        Truncation::new(self.cutoff, self.buffer)
    }

    pub fn validate(&self) -> Result<()> {
        self.truncation()?;
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.tol_obj) || !positive(self.schedule.initial_weight) {
            return Err(Error::InvalidParameter(
                "tolerance and initial barrier weight must be positive".into(),
            ));
        }
        if !(self.schedule.growth.is_finite() && self.schedule.growth > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "barrier growth must exceed 1, got {}",
                self.schedule.growth
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupResult {
    /// `c_b - c_a` on the returned element.
    pub value: f64,
    pub element: DiagonalElement,
    /// `||[D, pi(element)]||` at the configured cutoff.
    pub norm_at_solution: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Bound on `optimum - value` for the barrier problem before rescaling.
    pub gap: f64,
}

/// Maximizes `c_b - c_a` over the ball selected by `cfg.constraint_mode`.
pub fn sup_distance(params: &PhaseSpaceParams, a: FockLabel, b: FockLabel, cfg: &SupSolverConfig) -> Result<SupResult> {
    cfg.validate()?;
    let trunc = cfg.truncation()?;
    let w = trunc.window();
    a.check(w)?;
    b.check(w)?;
    if a == b {
        return Ok(SupResult {
            value: 0.0,
            element: DiagonalElement::zeros(w, w),
            norm_at_solution: 0.0,
            iterations: 0,
            converged: true,
            gap: 0.0,
        });
    }

    let layout = WindowLayout::new(w, a);
    let n_eff = (w + 1).min(cfg.cutoff);
    let mut lmis = Vec::new();
    let mut quads = Vec::new();
    if cfg.constraint_mode != ConstraintMode::ConstraintRelations {
        lmis = layout.ball_lmis(params, n_eff);
    }
    if cfg.constraint_mode != ConstraintMode::OperatorNorm {
        quads = layout.relation_quadratics(params);
    }
    let problem = Problem {
        nvars: layout.nvars(),
        target: layout.var(b.m, b.n).expect("b differs from the pinned label"),
        lmis,
        quads,
    };
    let schedule = Schedule {
        initial_weight: cfg.schedule.initial_weight,
        growth: cfg.schedule.growth,
        gap_tol: cfg.tol_obj,
        max_iters: cfg.max_iters,
    };
    let sol = problem.solve(vec![0.0; layout.nvars()], schedule)?;

    let mut element = layout.element(&sol.x)?;
    let mut norm = diagonal_commutator_norm(&element, params, cfg.cutoff)?;
    if cfg.constraint_mode != ConstraintMode::ConstraintRelations && norm > 1.0 {
        element = element.scaled(1.0 / norm);
        norm = diagonal_commutator_norm(&element, params, cfg.cutoff)?;
    }
    Ok(SupResult {
        value: element.objective(a, b),
        element,
        norm_at_solution: norm,
        iterations: sol.iterations,
        converged: true,
        gap: sol.gap,
    })
}

/// `e / ||[D, pi(e)]||`, which lies on the boundary of the ball.
pub fn scale_to_ball(e: &DiagonalElement, params: &PhaseSpaceParams, cutoff: usize) -> Result<DiagonalElement> {
    let norm = diagonal_commutator_norm(e, params, cutoff)?;
    if norm == 0.0 {
        return Err(Error::ZeroElement);
    }
    Ok(e.scaled(1.0 / norm))
}

/// Checks the feasibility certificate of a result at the default tolerance.
pub fn is_certified(result: &SupResult) -> bool {
    result.norm_at_solution <= 1.0 + DEFAULT_TOL
}

/// Maps window sites to optimization variables; the site of `a` is pinned
/// to zero, which fixes the additive gauge.
struct WindowLayout {
    w: usize,
    pinned: usize,
}

impl WindowLayout {
    fn new(w: usize, a: FockLabel) -> Self {
        Self {
            w,
            pinned: a.m * w + a.n,
        }
    }

    fn nvars(&self) -> usize {
        self.w * self.w - 1
    }

    /// Variable of the coefficient at `(i, j)`, clamped into the window.
    fn var(&self, i: usize, j: usize) -> Option<usize> {
        let site = i.min(self.w - 1) * self.w + j.min(self.w - 1);
        match site.cmp(&self.pinned) {
            std::cmp::Ordering::Less => Some(site),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(site - 1),
        }
    }

    fn element(&self, x: &[f64]) -> Result<DiagonalElement> {
        DiagonalElement::from_fn(self.w, self.w, Extension::Clamp, |i, j| {
            self.var(i, j).map_or(0.0, |v| x[v])
        })
    }

    /// `[[I, beta B_s], [beta B_s^+, I]] >= 0` for every level block `B_s`.
    fn ball_lmis(&self, params: &PhaseSpaceParams, n: usize) -> Vec<Lmi> {
        let stencils = LevelStencils::new(n, params.t());
        let beta = Complex64::new(params.beta(), 0.0);
        stencils
            .sectors()
            .iter()
            .map(|sec| {
                let mut entries = Vec::with_capacity(2 * sec.terms.len());
                for t in &sec.terms {
                    let Some(var) = self.var(t.site / n, t.site % n) else {
                        continue;
                    };
                    let coef = beta * t.weight;
                    entries.push(LmiEntry {
                        var,
                        row: t.row,
                        col: sec.rows + t.col,
                        coef,
                    });
                    entries.push(LmiEntry {
                        var,
                        row: sec.rows + t.col,
                        col: t.row,
                        coef: coef.conj(),
                    });
                }
                Lmi::new(sec.rows + sec.cols, entries)
            })
            .collect()
    }

    /// The four relations at every window site. Beyond the window all
    /// differences vanish, so these are all the relations there are.
    fn relation_quadratics(&self, params: &PhaseSpaceParams) -> Vec<Quadratic> {
        let bound = 1.0 / (params.beta() * params.beta());
        let t2 = params.t() * params.t();
        // sqrt(i) E_{i,j} and sqrt(j) F_{i,j} as linear forms
        let e_form = |i: usize, j: usize| -> Vec<(usize, f64)> {
            if i == 0 {
                return Vec::new();
            }
            self.difference(i, j, i - 1, j, (i as f64).sqrt())
        };
        let f_form = |i: usize, j: usize| -> Vec<(usize, f64)> {
            if j == 0 {
                return Vec::new();
            }
            self.difference(i, j, i, j - 1, (j as f64).sqrt())
        };
        let mut out = Vec::new();
        for i in 0..self.w {
            for j in 0..self.w {
                let g0 = e_form(i, j);
                let g1 = e_form(i + 1, j);
                let h0 = f_form(i, j);
                let h1 = f_form(i, j + 1);
                let relations = [
                    [(1.0, &g1), (1.0, &h0), (t2, &g0), (t2, &h1)],
                    [(1.0 + t2, &g1), (1.0 + t2, &h1), (0.0, &g0), (0.0, &h0)],
                    [(1.0, &g0), (1.0, &h1), (t2, &g1), (t2, &h0)],
                    [(1.0 + t2, &g0), (1.0 + t2, &h0), (0.0, &g1), (0.0, &h1)],
                ];
                for rel in relations {
                    let forms: Vec<_> = rel
                        .iter()
                        .filter(|(wt, f)| *wt > 0.0 && !f.is_empty())
                        .map(|(wt, f)| (*wt, (*f).clone()))
                        .collect();
                    if !forms.is_empty() {
                        out.push(Quadratic { bound, forms });
                    }
                }
            }
        }
        out
    }

    /// `scale * (c_{i,j} - c_{k,l})` with the pinned site dropped.
    fn difference(&self, i: usize, j: usize, k: usize, l: usize, scale: f64) -> Vec<(usize, f64)> {
        let mut form = Vec::with_capacity(2);
        let (p, q) = (self.var(i, j), self.var(k, l));
        if p == q {
            return form;
        }
        if let Some(p) = p {
            form.push((p, scale));
        }
        if let Some(q) = q {
            form.push((q, -scale));
        }
        form
    }
}
