//! Dirac operator, diagonal representation and the commutator `[D, pi(e)]`.
//!
//! `D` acts on `C^4 (x) H_q` and is stored as a 4x4 grid of `N^2 x N^2` blocks:
//!
//! ```text
//!          [  0     0    -A2^+  -A1^+ ]
//! D = beta [  0     0     A1    -A2   ]
//!          [ -A2    A1^+  0      0    ]
//!          [ -A1   -A2^+  0      0    ]
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::ball::DiagonalElement;
use crate::error::{Error, Result};
use crate::fock::{check_cutoff, deformed_ladder, max_modulus, Mode, TruncatedOperator, HERMITIAN_TOL};
use crate::norm::operator_norm;
use crate::params::PhaseSpaceParams;
use crate::sector::LevelStencils;

#[derive(Debug, Clone)]
pub struct DiracOperator {
    params: PhaseSpaceParams,
    cutoff: usize,
    a1: TruncatedOperator,
    a2: TruncatedOperator,
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    Zero,
    A1,
    A1Dag,
    A2,
    A2Dag,
}

/// `(sign, operator)` for each block of `D / beta`.
const PATTERN: [[(f64, Entry); 4]; 4] = {
    use Entry::*;
    [
        [(0.0, Zero), (0.0, Zero), (-1.0, A2Dag), (-1.0, A1Dag)],
        [(0.0, Zero), (0.0, Zero), (1.0, A1), (-1.0, A2)],
        [(-1.0, A2), (1.0, A1Dag), (0.0, Zero), (0.0, Zero)],
        [(-1.0, A1), (-1.0, A2Dag), (0.0, Zero), (0.0, Zero)],
    ]
};

pub fn dirac_operator(params: &PhaseSpaceParams, cutoff: usize) -> Result<DiracOperator> {
    check_cutoff(cutoff)?;
    Ok(DiracOperator {
        params: *params,
        cutoff,
        a1: deformed_ladder(Mode::One, params, cutoff)?,
        a2: deformed_ladder(Mode::Two, params, cutoff)?,
    })
}

impl DiracOperator {
    pub fn params(&self) -> &PhaseSpaceParams {
        &self.params
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn beta(&self) -> f64 {
        self.params.beta()
    }

    /// Total dimension `4 N^2`.
    pub fn dim(&self) -> usize {
        4 * self.cutoff * self.cutoff
    }

    pub fn deformed_ladders(&self) -> (&TruncatedOperator, &TruncatedOperator) {
        (&self.a1, &self.a2)
    }

    /// Block `(row, col)`, both in `0..4`.
    pub fn block(&self, row: usize, col: usize) -> TruncatedOperator {
        let (sign, entry) = PATTERN[row][col];
        let base = match entry {
            Entry::Zero => return TruncatedOperator::zeros(self.cutoff),
            Entry::A1 => self.a1.clone(),
            Entry::A1Dag => self.a1.adjoint(),
            Entry::A2 => self.a2.clone(),
            Entry::A2Dag => self.a2.adjoint(),
        };
        base.scale(Complex64::new(sign * self.beta(), 0.0))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.cutoff * self.cutoff;
        let mut out = DMatrix::zeros(4 * d, 4 * d);
        for r in 0..4 {
            for c in 0..4 {
                out.view_mut((r * d, c * d), (d, d))
                    .copy_from(self.block(r, c).matrix());
            }
        }
        out
    }

    /// `max |D_{rc} - D_{cr}^+|` over all blocks.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in r..4 {
                let diff = self.block(r, c).into_matrix() - self.block(c, r).adjoint().into_matrix();
                worst = worst.max(max_modulus(diff.iter()));
            }
        }
        worst
    }

    pub fn represent(&self, e: &TruncatedOperator) -> Result<DMatrix<Complex64>> {
        if e.cutoff() != self.cutoff {
            return Err(Error::DimensionMismatch {
                expected: self.cutoff * self.cutoff,
                found: e.dim(),
            });
        }
        Ok(represent(e))
    }
}

/// `pi(e) = diag(e, e, e, e)`.
pub fn represent(e: &TruncatedOperator) -> DMatrix<Complex64> {
    let d = e.dim();
    let mut out = DMatrix::zeros(4 * d, 4 * d);
    for k in 0..4 {
        out.view_mut((k * d, k * d), (d, d)).copy_from(e.matrix());
    }
    out
}

/// `[D, pi(e)] = beta [[0, D1], [-D1^+, 0]]` with
/// `D1 = [[V^+, U^+], [U, -V]]`, `U = [A1, e]`, `V = [A2, e]`.
#[derive(Debug, Clone)]
pub struct DiracCommutator {
    beta: f64,
    cutoff: usize,
    u: DMatrix<Complex64>,
    v: DMatrix<Complex64>,
}

/// Computes the commutator block by block and checks it against the `D1` form.
pub fn dirac_commutator(d: &DiracOperator, e: &TruncatedOperator) -> Result<DiracCommutator> {
    if e.cutoff() != d.cutoff {
        return Err(Error::DimensionMismatch {
            expected: d.cutoff * d.cutoff,
            found: e.dim(),
        });
    }
    let defect = e.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let u = d.a1.commutator(e)?.into_matrix();
    let v = d.a2.commutator(e)?.into_matrix();
    let out = DiracCommutator {
        beta: d.beta(),
        cutoff: d.cutoff,
        u,
        v,
    };
    let scale = 1.0 + max_modulus(e.matrix().iter());
    let mismatch = out.block_mismatch(d, e)?;
    if mismatch > HERMITIAN_TOL * scale * d.cutoff as f64 {
        return Err(Error::NumericalFailure(format!(
            "commutator deviates from its block form by {mismatch:e}"
        )));
    }
    Ok(out)
}

impl DiracCommutator {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `[A1, e]`.
    pub fn u(&self) -> &DMatrix<Complex64> {
        &self.u
    }

    /// `[A2, e]`.
    pub fn v(&self) -> &DMatrix<Complex64> {
        &self.v
    }

    /// Block `(row, col)` of `[D, pi(e)]` in the `D1` arrangement.
    pub fn block(&self, row: usize, col: usize) -> DMatrix<Complex64> {
        let b = Complex64::new(self.beta, 0.0);
        let d = self.u.nrows();
        match (row, col) {
            (0, 2) => self.v.adjoint() * b,
            (0, 3) => self.u.adjoint() * b,
            (1, 2) => &self.u * b,
            (1, 3) => &self.v * -b,
            (2, 0) => &self.v * -b,
            (2, 1) => self.u.adjoint() * -b,
            (3, 0) => &self.u * -b,
            (3, 1) => self.v.adjoint() * b,
            _ => DMatrix::zeros(d, d),
        }
    }

    fn block_mismatch(&self, d: &DiracOperator, e: &TruncatedOperator) -> Result<f64> {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let direct = d.block(r, c).commutator(e)?.into_matrix();
                let diff = direct - self.block(r, c);
                worst = worst.max(max_modulus(diff.iter()));
            }
        }
        Ok(worst)
    }

    /// `D1` as a `2 N^2 x 2 N^2` matrix.
    pub fn d1(&self) -> DMatrix<Complex64> {
        let d = self.u.nrows();
        let mut out = DMatrix::zeros(2 * d, 2 * d);
        out.view_mut((0, 0), (d, d)).copy_from(&self.v.adjoint());
        out.view_mut((0, d), (d, d)).copy_from(&self.u.adjoint());
        out.view_mut((d, 0), (d, d)).copy_from(&self.u);
        out.view_mut((d, d), (d, d)).copy_from(&(-&self.v));
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.u.nrows();
        let mut out = DMatrix::zeros(4 * d, 4 * d);
        for r in 0..4 {
            for c in 0..4 {
                out.view_mut((r * d, c * d), (d, d)).copy_from(&self.block(r, c));
            }
        }
        out
    }

    /// `||[D, pi(e)]|| = beta ||D1||`.
    pub fn norm(&self) -> Result<f64> {
        Ok(self.beta * operator_norm(&self.d1())?)
    }

    /// Diagonals of `U U^+`, `U^+ U`, `V V^+`, `V^+ V`, in that order.
    pub fn gram_diagonals(&self) -> [Vec<f64>; 4] {
        let row_sq = |m: &DMatrix<Complex64>| -> Vec<f64> {
            m.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect()
        };
        let col_sq = |m: &DMatrix<Complex64>| -> Vec<f64> {
            m.column_iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect()
        };
        [row_sq(&self.u), col_sq(&self.u), row_sq(&self.v), col_sq(&self.v)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallReport {
    pub norm: f64,
    pub feasible: bool,
    pub tol: f64,
}

impl BallReport {
    fn new(norm: f64, tol: f64) -> Self {
        Self {
            norm,
            feasible: norm <= 1.0 + tol,
            tol,
        }
    }
}

/// `||[D, pi(e)]||` against the unit ball. Diagonal operators take the
/// level-block route; anything else is evaluated densely.
pub fn ball_condition(e: &TruncatedOperator, params: &PhaseSpaceParams, tol: f64) -> Result<BallReport> {
    check_tol(tol)?;
    let defect = e.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let norm = if e.off_diagonal_magnitude() == 0.0 {
        let n = e.cutoff();
        let grid: Vec<f64> = (0..n * n).map(|k| e.matrix()[(k, k)].re).collect();
        diagonal_norm_on_grid(params, n, &grid)?
    } else {
        dirac_commutator(&dirac_operator(params, e.cutoff())?, e)?.norm()?
    };
    Ok(BallReport::new(norm, tol))
}

pub fn ball_condition_diagonal(
    e: &DiagonalElement,
    params: &PhaseSpaceParams,
    cutoff: usize,
    tol: f64,
) -> Result<BallReport> {
    check_tol(tol)?;
    Ok(BallReport::new(diagonal_commutator_norm(e, params, cutoff)?, tol))
}

/// `||[D, pi(e)]||` for a diagonal element truncated at `cutoff`.
pub fn diagonal_commutator_norm(e: &DiagonalElement, params: &PhaseSpaceParams, cutoff: usize) -> Result<f64> {
    check_cutoff(cutoff)?;
    if e.extent() > cutoff {
        return Err(Error::LabelOutOfRange {
            m: e.rows() - 1,
            n: e.cols() - 1,
            limit: cutoff,
        });
    }
    diagonal_norm_on_grid(params, cutoff, &e.grid(cutoff))
}

pub(crate) fn diagonal_norm_on_grid(params: &PhaseSpaceParams, n: usize, grid: &[f64]) -> Result<f64> {
    check_cutoff(n)?;
    Ok(params.beta() * LevelStencils::new(n, params.t()).d1_norm(grid)?)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{Extension, DEFAULT_TOL};
    use crate::fock::annihilation_mode;
    use approx::assert_abs_diff_eq;

    fn params(theta: f64) -> PhaseSpaceParams {
        PhaseSpaceParams::new(1.0, theta).unwrap()
    }

    #[test]
    fn dirac_is_hermitian() {
        let d = dirac_operator(&params(0.6), 8).unwrap();
        assert!(d.hermiticity_defect() <= 1e-12);
        let dense = d.to_dense();
        assert!(crate::fock::hermiticity_defect(&dense) <= 1e-12);
    }

    #[test]
    fn commutative_blocks_use_plain_ladders() {
        let d = dirac_operator(&params(0.0), 4).unwrap();
        let a1 = annihilation_mode(Mode::One, 4).unwrap();
        let expected = a1.scale(Complex64::new(2f64.sqrt(), 0.0));
        assert_eq!(d.block(1, 2).matrix(), expected.matrix());
    }

    #[test]
    fn represent_is_block_diagonal() {
        let e = TruncatedOperator::identity(3);
        let p = represent(&e);
        assert_eq!(p, DMatrix::identity(36, 36));
        let f = DiagonalElement::from_fn(3, 3, Extension::Clamp, |i, j| (i + 2 * j) as f64)
            .unwrap()
            .to_operator(3)
            .unwrap();
        assert_abs_diff_eq!(represent(&f).trace().re, 4.0 * f.trace().re, epsilon = 1e-12);
    }

    #[test]
    fn identity_commutes() {
        let d = dirac_operator(&params(0.3), 5).unwrap();
        for c in [1.0, -2.5] {
            let e = TruncatedOperator::identity(5).scale(Complex64::new(c, 0.0));
            let comm = dirac_commutator(&d, &TruncatedOperator::hermitian(5, e.into_matrix()).unwrap()).unwrap();
            assert_eq!(comm.norm().unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let d = dirac_operator(&params(0.3), 3).unwrap();
        let a = annihilation_mode(Mode::One, 3).unwrap();
        assert!(matches!(dirac_commutator(&d, &a), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            dirac_commutator(&d, &TruncatedOperator::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn level_blocks_match_dense_norm() {
        for theta in [0.0, 0.45, 0.9] {
            let p = params(theta);
            let n = 6;
            let e = DiagonalElement::from_fn(n, n, Extension::Clamp, |i, j| {
                ((i * 7 + j * 3) % 5) as f64 * 0.1 - (j as f64).sqrt() * 0.2
            })
            .unwrap();
            let dense = dirac_commutator(&dirac_operator(&p, n).unwrap(), &e.to_operator(n).unwrap())
                .unwrap()
                .norm()
                .unwrap();
            let fast = diagonal_commutator_norm(&e, &p, n).unwrap();
            assert_abs_diff_eq!(dense, fast, epsilon = 1e-11);
        }
    }

    #[test]
    fn sparse_level_blocks_stay_finite() {
        // A small clamped element leaves most level blocks nearly empty,
        // which used to break the complex eigensolver at large cutoffs.
        let p = params(0.3);
        let e = DiagonalElement::from_fn(3, 2, Extension::Clamp, |i, j| 0.4 * i as f64 + 0.3 * j as f64).unwrap();
        let small = diagonal_commutator_norm(&e, &p, 6).unwrap();
        let dense = dirac_commutator(&dirac_operator(&p, 6).unwrap(), &e.to_operator(6).unwrap())
            .unwrap()
            .norm()
            .unwrap();
        assert_abs_diff_eq!(small, dense, epsilon = 1e-11);
        for n in [12, 16, 24] {
            assert_abs_diff_eq!(diagonal_commutator_norm(&e, &p, n).unwrap(), small, epsilon = 1e-12);
        }
    }

    #[test]
    fn dense_commutator_has_zero_diagonal_superblocks() {
        let p = params(0.6);
        let n = 4;
        let e = DiagonalElement::from_fn(n, n, Extension::Clamp, |i, j| (i * j) as f64 * 0.3)
            .unwrap()
            .to_operator(n)
            .unwrap();
        let comm = dirac_commutator(&dirac_operator(&p, n).unwrap(), &e).unwrap();
        let d = n * n;
        let dense = comm.to_dense();
        let direct = {
            let dd = dirac_operator(&p, n).unwrap().to_dense();
            let pe = represent(&e);
            &dd * &pe - &pe * &dd
        };
        assert!(max_modulus((&dense - &direct).iter()) < 1e-12);
        assert!(max_modulus(dense.view((0, 0), (2 * d, 2 * d)).iter()) < 1e-12);
        assert!(max_modulus(dense.view((2 * d, 2 * d), (2 * d, 2 * d)).iter()) < 1e-12);
    }

    #[test]
    fn zero_element_is_feasible() {
        let r = ball_condition(&TruncatedOperator::zeros(4), &params(0.6), DEFAULT_TOL).unwrap();
        assert_eq!(r.norm, 0.0);
        assert!(r.feasible);
    }

    #[test]
    fn homogeneity_of_single_site() {
        let p = params(0.0);
        let base = ball_condition_diagonal(&DiagonalElement::single_site(1, 0, 1.0).unwrap(), &p, 6, DEFAULT_TOL)
            .unwrap()
            .norm;
        for k in [0.01, 0.5, 3.0] {
            let r =
                ball_condition_diagonal(&DiagonalElement::single_site(1, 0, k).unwrap(), &p, 6, DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(r.norm, k * base, epsilon = 1e-12 * k.max(1.0));
        }
    }
}
