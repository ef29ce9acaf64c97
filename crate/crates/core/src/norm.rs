//! Operator norms of dense complex matrices.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{hermiticity_defect, max_modulus, I};

const MAX_SWEEPS_PER_DIM: usize = 200;

/// Largest singular value. Hermitian and anti-Hermitian inputs go through
/// the eigenvalue route and return the spectral radius.
pub fn operator_norm(op: &DMatrix<Complex64>) -> Result<f64> {
    if op.is_empty() {
        return Ok(0.0);
    }
    let scale = max_modulus(op.iter());
    if scale == 0.0 {
        return Ok(0.0);
    }
    if !op.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NumericalFailure("matrix has non-finite entries".into()));
    }
    let tol = 1e-14 * scale;
    if op.is_square() {
        if hermiticity_defect(op) <= tol {
            return spectral_radius(op.clone());
        }
        // i * (anti-Hermitian) is Hermitian
        let rotated = op * I;
        if hermiticity_defect(&rotated) <= tol {
            return spectral_radius(rotated);
        }
    }
    let max_niter = MAX_SWEEPS_PER_DIM * op.nrows().max(op.ncols());
    let svd = SVD::try_new(op.clone(), false, false, f64::EPSILON, max_niter)
        .ok_or_else(|| Error::NumericalFailure("singular value iteration did not converge".into()))?;
    Ok(svd.singular_values.max())
}

/// Spectral radius of a Hermitian matrix (only the lower triangle is read).
pub fn spectral_radius(h: DMatrix<Complex64>) -> Result<f64> {
    let max_niter = MAX_SWEEPS_PER_DIM * h.nrows();
    let radius = SymmetricEigen::try_new(h.clone(), f64::EPSILON, max_niter)
        .map(|eig| eig.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs())));
    match radius {
        Some(r) if r.is_finite() => Ok(r),
        // The complex eigensolver occasionally breaks down on sparse
        // matrices; singular values of a Hermitian matrix are |eigenvalues|.
        _ => {
            let h = h.hermitian_part();
            let svd = SVD::try_new(h, false, false, f64::EPSILON, max_niter)
                .ok_or_else(|| Error::NumericalFailure("eigenvalue iteration did not converge".into()))?;
            let r = svd.singular_values.max();
            if r.is_finite() {
                Ok(r)
            } else {
                Err(Error::NumericalFailure("non-finite spectral radius".into()))
            }
        }
    }
}

/// Largest singular value of a small block via its Gram matrix. Zero rows
/// and columns are dropped first.
pub(crate) fn block_norm(b: &DMatrix<Complex64>) -> Result<f64> {
    let zero = |z: &Complex64| z.re == 0.0 && z.im == 0.0;
    let rows: Vec<usize> = (0..b.nrows()).filter(|&i| !b.row(i).iter().all(zero)).collect();
    let cols: Vec<usize> = (0..b.ncols()).filter(|&j| !b.column(j).iter().all(zero)).collect();
    if rows.is_empty() || cols.is_empty() {
        return Ok(0.0);
    }
    let b = b.select_rows(&rows).select_columns(&cols);
    let gram = if b.ncols() <= b.nrows() {
        b.ad_mul(&b)
    } else {
        &b * b.adjoint()
    };
    Ok(spectral_radius(gram)?.max(0.0).sqrt())
}
