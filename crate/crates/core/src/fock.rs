//! Truncated two-mode boson Fock space.
//!
//! Basis states `|m,n>` with `m, n < N` are ordered lexicographically, mode 1
//! outer: the flat index of `|m,n>` is `m * N + n`. Operators are dense
//! `N^2 x N^2` complex matrices.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PhaseSpaceParams;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entrywise tolerance for the Hermitian flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockLabel {
    pub m: usize,
    pub n: usize,
}

impl FockLabel {
    pub const fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn index(&self, cutoff: usize) -> usize {
        self.m * cutoff + self.n
    }

    pub fn fits(&self, limit: usize) -> bool {
        self.m < limit && self.n < limit
    }

    pub(crate) fn check(&self, limit: usize) -> Result<()> {
        if self.fits(limit) {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange {
                m: self.m,
                n: self.n,
                limit,
            })
        }
    }
}

impl fmt::Display for FockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m, self.n)
    }
}

/// Parses `"m,n"`: two non-negative integers, no whitespace.
impl FromStr for FockLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("label must look like \"m,n\", got {s:?}"));
        let (m, n) = s.split_once(',').ok_or_else(bad)?;
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        if !digits(m) || !digits(n) {
            return Err(bad());
        }
        Ok(Self {
            m: m.parse().map_err(|_| bad())?,
            n: n.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

impl TryFrom<u8> for Mode {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            _ => Err(Error::InvalidParameter(format!("mode must be 1 or 2, got {value}"))),
        }
    }
}

pub(crate) fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff {
            cutoff,
            reason: "at least two levels per mode are required".into(),
        });
    }
    Ok(())
}

/// Dense operator on the truncated two-mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    cutoff: usize,
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

impl TruncatedOperator {
    pub fn new(cutoff: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = cutoff * cutoff;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self {
            cutoff,
            matrix,
            hermitian: false,
        })
    }

    /// Like [`TruncatedOperator::new`], but sets the Hermitian flag and fails
    /// if the matrix is not Hermitian within [`HERMITIAN_TOL`].
    pub fn hermitian(cutoff: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let mut op = Self::new(cutoff, matrix)?;
        let defect = hermiticity_defect(&op.matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn zeros(cutoff: usize) -> Self {
        let dim = cutoff * cutoff;
        Self {
            cutoff,
            matrix: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn identity(cutoff: usize) -> Self {
        let dim = cutoff * cutoff;
        Self {
            cutoff,
            matrix: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    /// Real diagonal operator; `diag` is indexed by flat basis index.
    pub fn from_real_diagonal(cutoff: usize, diag: &[f64]) -> Result<Self> {
        let dim = cutoff * cutoff;
        if diag.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: diag.len(),
            });
        }
        let mut matrix = DMatrix::zeros(dim, dim);
        for (i, &c) in diag.iter().enumerate() {
            matrix[(i, i)] = Complex64::new(c, 0.0);
        }
        Ok(Self {
            cutoff,
            matrix,
            hermitian: true,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            cutoff: self.cutoff,
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            cutoff: self.cutoff,
            matrix: &self.matrix * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            matrix: &self.matrix + &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            matrix: &self.matrix - &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            matrix: sparse_aware_product(&self.matrix, &other.matrix),
            hermitian: false,
        })
    }

    /// `[self, other] = self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let ab = sparse_aware_product(&self.matrix, &other.matrix);
        let ba = sparse_aware_product(&other.matrix, &self.matrix);
        Ok(Self {
            cutoff: self.cutoff,
            matrix: ab - ba,
            hermitian: false,
        })
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(&self.matrix * v)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `<label| self |label>`.
    pub fn expectation(&self, label: FockLabel) -> Result<Complex64> {
        label.check(self.cutoff)?;
        let i = label.index(self.cutoff);
        Ok(self.matrix[(i, i)])
    }

    /// Largest off-diagonal modulus; zero for diagonal operators.
    pub fn off_diagonal_magnitude(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, col) in self.matrix.column_iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                if i != j {
                    worst = worst.max(z.norm());
                }
            }
        }
        worst
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// Largest entry modulus.
pub fn max_modulus<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    entries.into_iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Product that skips zero entries of the right factor and exploits a sparse
/// left factor. Ladder operators have at most one entry per column, so their
/// products with dense operators cost `O(N^4)` instead of `O(N^6)`.
pub(crate) fn sparse_aware_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert_eq!(a.ncols(), b.nrows());
    let (rows, inner, cols) = (a.nrows(), a.ncols(), b.ncols());
    let sparse_cols: Vec<Vec<(usize, Complex64)>> = (0..inner)
        .map(|k| {
            a.column(k)
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, z)| (i, *z))
                .collect()
        })
        .collect();
    let mut out = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        let mut col = out.column_mut(j);
        for k in 0..inner {
            let bkj = b[(k, j)];
            if bkj == ZERO {
                continue;
            }
            for &(i, aik) in &sparse_cols[k] {
                col[i] += aik * bkj;
            }
        }
    }
    out
}

/// Standard `N x N` lowering matrix, `a|n> = sqrt(n)|n-1>`.
fn single_mode_lowering(cutoff: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `a (x) I` for mode 1, `I (x) a` for mode 2.
pub fn annihilation_mode(mode: Mode, cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let a = single_mode_lowering(cutoff);
    let id = DMatrix::<Complex64>::identity(cutoff, cutoff);
    let matrix = match mode {
        Mode::One => a.kronecker(&id),
        Mode::Two => id.kronecker(&a),
    };
    TruncatedOperator::new(cutoff, matrix)
}

/// Adjoint of [`annihilation_mode`]; the top level `N-1` is sent to zero.
pub fn creation_mode(mode: Mode, cutoff: usize) -> Result<TruncatedOperator> {
    Ok(annihilation_mode(mode, cutoff)?.adjoint())
}

/// `A_1 = a_1 - i t a_2`, `A_2 = a_2 + i t a_1`.
pub fn deformed_ladder(mode: Mode, params: &PhaseSpaceParams, cutoff: usize) -> Result<TruncatedOperator> {
    let a1 = annihilation_mode(Mode::One, cutoff)?;
    let a2 = annihilation_mode(Mode::Two, cutoff)?;
    let it = I * params.t();
    match mode {
        Mode::One => a1.sub(&a2.scale(it)),
        Mode::Two => a2.add(&a1.scale(it)),
    }
}

pub fn basis_vector(label: FockLabel, cutoff: usize) -> Result<DVector<Complex64>> {
    label.check(cutoff)?;
    let mut v = DVector::zeros(cutoff * cutoff);
    v[label.index(cutoff)] = ONE;
    Ok(v)
}

/// Pure Fock state `|m,n><m,n|` as a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateDensity {
    pub label: FockLabel,
    pub operator: TruncatedOperator,
}

impl FockStateDensity {
    /// `tr(rho e)`; for a Fock state this is the diagonal entry of `e`.
    pub fn evaluate(&self, e: &TruncatedOperator) -> Result<Complex64> {
        e.expectation(self.label)
    }
}

pub fn fock_density(label: FockLabel, cutoff: usize) -> Result<FockStateDensity> {
    check_cutoff(cutoff)?;
    label.check(cutoff)?;
    let mut diag = vec![0.0; cutoff * cutoff];
    diag[label.index(cutoff)] = 1.0;
    Ok(FockStateDensity {
        label,
        operator: TruncatedOperator::from_real_diagonal(cutoff, &diag)?,
    })
}

/// Largest deviation of `[a_i, a_j^dag] - delta_ij` acting on basis states
/// whose indices are both at most `N - 2`. The top level is excluded since
/// the truncated raising operator kills it.
pub fn ladder_interior_defect(cutoff: usize) -> Result<f64> {
    check_cutoff(cutoff)?;
    let lower = [
        annihilation_mode(Mode::One, cutoff)?,
        annihilation_mode(Mode::Two, cutoff)?,
    ];
    let raise = [lower[0].adjoint(), lower[1].adjoint()];
    let mut worst = 0.0f64;
    for (i, low) in lower.iter().enumerate() {
        for (j, up) in raise.iter().enumerate() {
            let c = low.commutator(up)?;
            for m in 0..cutoff - 1 {
                for n in 0..cutoff - 1 {
                    let label = FockLabel::new(m, n);
                    let v = basis_vector(label, cutoff)?;
                    let mut w = c.apply(&v)?;
                    if i == j {
                        w -= &v;
                    }
                    worst = worst.max(max_modulus(w.iter()));
                }
            }
        }
    }
    Ok(worst)
}
