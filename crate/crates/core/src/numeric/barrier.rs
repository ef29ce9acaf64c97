//! Log-barrier interior-point method for
//!
//! ```text
//! maximize x[target]  subject to  F_s(x) >= 0 (Hermitian, affine in x)
//!                                 q_r(x) <= bound_r (convex quadratic)
//! ```
//!
//! Each outer round minimizes `-tau x[target] - sum log det F_s - sum log(bound_r - q_r)`
//! with damped Newton steps, then multiplies `tau` by the growth factor. A
//! centered point is within `m / tau` of the optimum, `m` being the total
//! barrier parameter (sum of the LMI dimensions plus the number of quadratic
//! constraints).

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficient of variable `var` at entry `(row, col)` of an LMI.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LmiEntry {
    pub var: usize,
    pub row: usize,
    pub col: usize,
    pub coef: Complex64,
}

/// `F(x) = I + sum_k coef_k x[var_k] E_{row_k, col_k}`.
#[derive(Debug, Clone)]
pub(crate) struct Lmi {
    pub dim: usize,
    /// Sorted by variable.
    pub entries: Vec<LmiEntry>,
}

impl Lmi {
    /// Merges duplicate `(var, row, col)` contributions and drops exact zeros.
    pub fn new(dim: usize, mut entries: Vec<LmiEntry>) -> Self {
        entries.sort_by_key(|e| (e.var, e.row, e.col));
        let mut merged: Vec<LmiEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if (last.var, last.row, last.col) == (e.var, e.row, e.col) => last.coef += e.coef,
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.coef.norm() > 0.0);
        Self { dim, entries: merged }
    }

    fn assemble(&self, x: &[f64]) -> DMatrix<Complex64> {
        let mut f = DMatrix::identity(self.dim, self.dim);
        for e in &self.entries {
            f[(e.row, e.col)] += e.coef * x[e.var];
        }
        f
    }

    /// `(start, end)` ranges of `entries` sharing a variable.
    fn groups(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.entries.len() {
            if k == self.entries.len() || self.entries[k].var != self.entries[start].var {
                out.push((self.entries[start].var, start, k));
                start = k;
            }
        }
        out
    }
}

/// `sum_k weight_k (form_k . x)^2 <= bound`.
#[derive(Debug, Clone)]
pub(crate) struct Quadratic {
    pub bound: f64,
    pub forms: Vec<(f64, Vec<(usize, f64)>)>,
}

impl Quadratic {
    fn eval(&self, x: &[f64]) -> (f64, Vec<(usize, f64)>) {
        let mut q = 0.0;
        let mut grad: Vec<(usize, f64)> = Vec::new();
        for (w, form) in &self.forms {
            let lin: f64 = form.iter().map(|&(v, a)| a * x[v]).sum();
            q += w * lin * lin;
            for &(v, a) in form {
                grad.push((v, 2.0 * w * lin * a));
            }
        }
        (q, grad)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub nvars: usize,
    pub target: usize,
    pub lmis: Vec<Lmi>,
    pub quads: Vec<Quadratic>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    pub initial_weight: f64,
    pub growth: f64,
    pub gap_tol: f64,
    pub max_iters: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `m / tau` at the last centered point.
    pub gap: f64,
}

const NEWTON_TOL: f64 = 1e-10;
const ARMIJO: f64 = 0.25;
const MIN_STEP: f64 = 1e-12;

struct Factored {
    inverses: Vec<DMatrix<Complex64>>,
    slacks: Vec<f64>,
    value: f64,
}

impl Problem {
    fn barrier_parameter(&self) -> f64 {
        (self.lmis.iter().map(|l| l.dim).sum::<usize>() + self.quads.len()) as f64
    }

    /// Barrier value plus whatever the caller needs for derivatives, or
    /// `None` outside the interior.
    fn factor(&self, x: &[f64], tau: f64, want_inverse: bool) -> Option<Factored> {
        let mut value = -tau * x[self.target];
        let mut inverses = Vec::with_capacity(if want_inverse { self.lmis.len() } else { 0 });
        for lmi in &self.lmis {
            let (chol, logdet) = hermitian_cholesky(lmi.assemble(x))?;
            value -= logdet;
            if want_inverse {
                inverses.push(chol.inverse());
            }
        }
        let mut slacks = Vec::with_capacity(self.quads.len());
        for quad in &self.quads {
            let slack = quad.bound - quad.eval(x).0;
            if slack.is_nan() || slack <= 0.0 {
                return None;
            }
            value -= slack.ln();
            slacks.push(slack);
        }
        value.is_finite().then_some(Factored {
            inverses,
            slacks,
            value,
        })
    }

    fn derivatives(&self, x: &[f64], tau: f64, fac: &Factored) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.nvars;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        grad[self.target] -= tau;
        for (lmi, g) in self.lmis.iter().zip(&fac.inverses) {
            let groups = lmi.groups();
            let ent = &lmi.entries;
            for &(v, s, e) in &groups {
                let mut tr = Complex64::new(0.0, 0.0);
                for k in &ent[s..e] {
                    tr += k.coef * g[(k.col, k.row)];
                }
                grad[v] -= tr.re;
            }
            for (gi, &(v, sv, ev)) in groups.iter().enumerate() {
                for &(w, sw, ew) in &groups[gi..] {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in &ent[sv..ev] {
                        for l in &ent[sw..ew] {
                            acc += k.coef * l.coef * g[(l.col, k.row)] * g[(k.col, l.row)];
                        }
                    }
                    hess[(v, w)] += acc.re;
                    if v != w {
                        hess[(w, v)] += acc.re;
                    }
                }
            }
        }
        for (quad, &slack) in self.quads.iter().zip(&fac.slacks) {
            let (_, qgrad) = quad.eval(x);
            for &(v, gv) in &qgrad {
                grad[v] += gv / slack;
                for &(w, gw) in &qgrad {
                    hess[(v, w)] += gv * gw / (slack * slack);
                }
            }
            for (wt, form) in &quad.forms {
                for &(v, a) in form {
                    for &(w, b) in form {
                        hess[(v, w)] += 2.0 * wt * a * b / slack;
                    }
                }
            }
        }
        (grad, hess)
    }

    #[cfg(test)]
    pub fn is_interior(&self, x: &[f64]) -> bool {
        self.factor(x, 0.0, false).is_some()
    }

    /// Starts from the strictly feasible point `x0`.
    pub fn solve(&self, x0: Vec<f64>, schedule: Schedule) -> Result<Solution> {
        let m = self.barrier_parameter();
        let mut x = x0;
        let mut tau = schedule.initial_weight;
        let mut iterations = 0;
        if self.factor(&x, tau, false).is_none() {
            return Err(Error::NumericalFailure(
                "starting point is not strictly feasible".into(),
            ));
        }
        loop {
            // Newton centering
            loop {
                if iterations >= schedule.max_iters {
                    return Err(Error::NotConverged {
                        iterations,
                        gap: m / tau,
                    });
                }
                iterations += 1;
                let fac = self
                    .factor(&x, tau, true)
                    .ok_or_else(|| Error::NumericalFailure("iterate left the interior".into()))?;
                let (grad, hess) = self.derivatives(&x, tau, &fac);
                let step = newton_direction(&hess, &grad)?;
                let slope = grad.dot(&step);
                // Below the rounding level of the barrier value a line search
                // can no longer tell steps apart.
                let floor = NEWTON_TOL.max(64.0 * f64::EPSILON * fac.value.abs());
                if -slope / 2.0 <= floor {
                    break;
                }
                let mut alpha = 1.0;
                let mut trial = vec![0.0; x.len()];
                loop {
                    for (i, t) in trial.iter_mut().enumerate() {
                        *t = x[i] + alpha * step[i];
                    }
                    if let Some(f) = self.factor(&trial, tau, false) {
                        if f.value <= fac.value + ARMIJO * alpha * slope {
                            break;
                        }
                    }
                    alpha *= 0.5;
                    if alpha < MIN_STEP {
                        break;
                    }
                }
                if alpha < MIN_STEP {
                    // No measurable progress at this weight; the point is as
                    // centered as floating point allows.
                    break;
                }
                x.copy_from_slice(&trial);
            }
            let gap = m / tau;
            if gap <= schedule.gap_tol {
                return Ok(Solution { x, iterations, gap });
            }
            tau *= schedule.growth;
        }
    }
}

/// Cholesky factor of a Hermitian matrix together with `ln det`, or `None`
/// unless the matrix is positive definite. Pivots are tested as reals before
/// the square root, which a generic complex factorization does not do.
fn hermitian_cholesky(mut m: DMatrix<Complex64>) -> Option<(Cholesky<Complex64, Dyn>, f64)> {
    let n = m.nrows();
    let mut logdet = 0.0;
    for j in 0..n {
        let mut pivot = m[(j, j)].re;
        for k in 0..j {
            pivot -= m[(j, k)].norm_sqr();
        }
        if pivot.is_nan() || pivot <= 0.0 {
            return None;
        }
        let d = pivot.sqrt();
        logdet += 2.0 * d.ln();
        m[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut z = m[(i, j)];
            for k in 0..j {
                z -= m[(i, k)] * m[(j, k)].conj();
            }
            m[(i, j)] = z / d;
        }
    }
    Some((Cholesky::pack_dirty(m), logdet))
}

fn newton_direction(hess: &DMatrix<f64>, grad: &DVector<f64>) -> Result<DVector<f64>> {
    let rhs = -grad;
    if let Some(ch) = Cholesky::<f64, Dyn>::new(hess.clone()) {
        return Ok(ch.solve(&rhs));
    }
    let scale = hess.diagonal().amax().max(1.0);
    let mut shift = 1e-14 * scale;
    while shift < 1e-4 * scale {
        let mut h = hess.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += shift;
        }
        if let Some(ch) = Cholesky::new(h) {
            return Ok(ch.solve(&rhs));
        }
        shift *= 100.0;
    }
    Err(Error::NumericalFailure(
        "barrier Hessian is not positive definite".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schedule() -> Schedule {
        Schedule {
            initial_weight: 1.0,
            growth: 10.0,
            gap_tol: 1e-9,
            max_iters: 500,
        }
    }

    #[test]
    fn disk_by_quadratic() {
        // maximize x0 subject to x0^2 + x1^2 <= 4
        let p = Problem {
            nvars: 2,
            target: 0,
            lmis: vec![],
            quads: vec![Quadratic {
                bound: 4.0,
                forms: vec![(1.0, vec![(0, 1.0)]), (1.0, vec![(1, 1.0)])],
            }],
        };
        let sol = p.solve(vec![0.0, 0.0], schedule()).unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-8, "{:?}", sol.x);
    }

    #[test]
    fn disk_by_lmi() {
        // [[1 + x0/2, x1/2], [x1/2, 1 - x0/2]] >= 0  <=>  x0^2 + x1^2 <= 4
        let c = |v: f64| Complex64::new(v, 0.0);
        let lmi = Lmi::new(
            2,
            vec![
                LmiEntry {
                    var: 0,
                    row: 0,
                    col: 0,
                    coef: c(0.5),
                },
                LmiEntry {
                    var: 0,
                    row: 1,
                    col: 1,
                    coef: c(-0.5),
                },
                LmiEntry {
                    var: 1,
                    row: 0,
                    col: 1,
                    coef: c(0.5),
                },
                LmiEntry {
                    var: 1,
                    row: 1,
                    col: 0,
                    coef: c(0.5),
                },
            ],
        );
        let p = Problem {
            nvars: 2,
            target: 0,
            lmis: vec![lmi],
            quads: vec![],
        };
        let sol = p.solve(vec![0.0, 0.0], schedule()).unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-8, "{:?}", sol.x);
        assert!(sol.gap <= 1e-9);
    }

    #[test]
    fn iteration_cap() {
        let p = Problem {
            nvars: 1,
            target: 0,
            lmis: vec![],
            quads: vec![Quadratic {
                bound: 1.0,
                forms: vec![(1.0, vec![(0, 1.0)])],
            }],
        };
        let s = Schedule {
            max_iters: 2,
            ..schedule()
        };
        assert!(matches!(p.solve(vec![0.0], s), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn duplicate_entries_merge() {
        let c = |v: f64| Complex64::new(v, 0.0);
        let lmi = Lmi::new(
            1,
            vec![
                LmiEntry {
                    var: 0,
                    row: 0,
                    col: 0,
                    coef: c(1.0),
                },
                LmiEntry {
                    var: 0,
                    row: 0,
                    col: 0,
                    coef: c(-1.0),
                },
                LmiEntry {
                    var: 1,
                    row: 0,
                    col: 0,
                    coef: c(2.0),
                },
            ],
        );
        assert_eq!(lmi.entries.len(), 1);
        assert_eq!(lmi.entries[0].var, 1);
    }
}
