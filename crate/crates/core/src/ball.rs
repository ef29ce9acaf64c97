//! Diagonal algebra elements and the finite-difference form of the ball
//! condition.
//!
//! A diagonal element `e = sum c_{i,j} |i,j><i,j|` is stored on a rectangle
//! `0 <= i < rows`, `0 <= j < cols` together with a rule for coefficients
//! outside it. With `E_{i,j} = c_{i,j} - c_{i-1,j}` and
//! `F_{i,j} = c_{i,j} - c_{i,j-1}`, the weighted squares `G = i E^2` and
//! `H = j F^2` control the diagonal of `D1^+ D1` and `D1 D1^+`, which gives
//! four necessary conditions for `||[D, pi(e)]|| <= 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockLabel, TruncatedOperator};
use crate::params::PhaseSpaceParams;

/// Default absolute tolerance on ball and constraint residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// How coefficients continue outside the stored rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Extension {
    /// Every coefficient outside the rectangle takes this value.
    Fill(f64),
    /// Repeat the nearest boundary value along each axis.
    Clamp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalElement {
    rows: usize,
    cols: usize,
    /// Row-major, `coeffs[i * cols + j] = c_{i,j}`.
    coeffs: Vec<f64>,
    extension: Extension,
}

impl DiagonalElement {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<f64>, extension: Extension) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("empty coefficient rectangle".into()));
        }
        if coeffs.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: coeffs.len(),
            });
        }
        let fill_ok = match extension {
            Extension::Fill(v) => v.is_finite(),
            Extension::Clamp => true,
        };
        if !fill_ok || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        Ok(Self {
            rows,
            cols,
            coeffs,
            extension,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        extension: Extension,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                coeffs.push(f(i, j));
            }
        }
        Self::new(rows, cols, coeffs, extension)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: vec![0.0; rows * cols],
            extension: Extension::Fill(0.0),
        }
    }

    /// `value * |i,j><i,j|`.
    pub fn single_site(i: usize, j: usize, value: f64) -> Result<Self> {
        Self::from_fn(i + 1, j + 1, Extension::Fill(0.0), |p, q| {
            if (p, q) == (i, j) {
                value
            } else {
                0.0
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `c_{i,j}` for any non-negative indices.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i < self.rows && j < self.cols {
            return self.coeffs[i * self.cols + j];
        }
        match self.extension {
            Extension::Fill(v) => v,
            Extension::Clamp => self.coeffs[i.min(self.rows - 1) * self.cols + j.min(self.cols - 1)],
        }
    }

    /// Smallest `L` with the stored rectangle inside `[0, L) x [0, L)`.
    pub fn extent(&self) -> usize {
        self.rows.max(self.cols)
    }

    /// Coefficients on the full `cutoff x cutoff` grid, flat index `i * cutoff + j`.
    pub fn grid(&self, cutoff: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(cutoff * cutoff);
        for i in 0..cutoff {
            for j in 0..cutoff {
                out.push(self.coeff(i, j));
            }
        }
        out
    }

    pub fn to_operator(&self, cutoff: usize) -> Result<TruncatedOperator> {
        if self.extent() > cutoff {
            return Err(Error::LabelOutOfRange {
                m: self.rows - 1,
                n: self.cols - 1,
                limit: cutoff,
            });
        }
        TruncatedOperator::from_real_diagonal(cutoff, &self.grid(cutoff))
    }

    /// `tr(rho_b e) - tr(rho_a e) = c_b - c_a`.
    pub fn objective(&self, a: FockLabel, b: FockLabel) -> f64 {
        self.coeff(b.m, b.n) - self.coeff(a.m, a.n)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.map(|c| alpha * c)
    }

    /// Adds a constant to every coefficient, including the fill value.
    pub fn shifted(&self, delta: f64) -> Self {
        self.map(|c| c + delta)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
            extension: match self.extension {
                Extension::Fill(v) => Extension::Fill(f(v)),
                Extension::Clamp => Extension::Clamp,
            },
        }
    }

    /// True when every coefficient, inside and outside the rectangle, is equal.
    pub fn is_constant(&self) -> bool {
        let first = self.coeffs[0];
        let inside = self.coeffs.iter().all(|&c| c == first);
        match self.extension {
            Extension::Fill(v) => inside && v == first,
            Extension::Clamp => inside,
        }
    }
}

/// `E, F, G, H` on `0 <= i <= rows + 1`, `0 <= j <= cols + 1`. Beyond that
/// range every difference vanishes for both extension rules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GHGrid {
    rows: usize,
    cols: usize,
    e: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
}

impl GHGrid {
    /// Number of stored first indices, `rows + 2`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn at(&self, v: &[f64], i: usize, j: usize) -> f64 {
        if i < self.rows && j < self.cols {
            v[i * self.cols + j]
        } else {
            0.0
        }
    }

    pub fn e(&self, i: usize, j: usize) -> f64 {
        self.at(&self.e, i, j)
    }

    pub fn f(&self, i: usize, j: usize) -> f64 {
        self.at(&self.f, i, j)
    }

    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.at(&self.g, i, j)
    }

    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.at(&self.h, i, j)
    }
}

pub fn gh_grid(e: &DiagonalElement) -> GHGrid {
    let rows = e.rows + 2;
    let cols = e.cols + 2;
    let mut grid = GHGrid {
        rows,
        cols,
        e: vec![0.0; rows * cols],
        f: vec![0.0; rows * cols],
        g: vec![0.0; rows * cols],
        h: vec![0.0; rows * cols],
    };
    for i in 0..rows {
        for j in 0..cols {
            let k = i * cols + j;
            let c = e.coeff(i, j);
            if i > 0 {
                let d = c - e.coeff(i - 1, j);
                grid.e[k] = d;
                grid.g[k] = i as f64 * d * d;
            }
            if j > 0 {
                let d = c - e.coeff(i, j - 1);
                grid.f[k] = d;
                grid.h[k] = j as f64 * d * d;
            }
        }
    }
    grid
}

/// Left-hand sides of the four relations at `(i, j)`:
///
/// 1. `(G_{i+1,j} + H_{i,j}) + t^2 (G_{i,j} + H_{i,j+1})`
/// 2. `(1 + t^2) (G_{i+1,j} + H_{i,j+1})`
/// 3. `(G_{i,j} + H_{i,j+1}) + t^2 (G_{i+1,j} + H_{i,j})`
/// 4. `(1 + t^2) (G_{i,j} + H_{i,j})`
///
/// Each is a diagonal entry of `D1^+ D1` or `D1 D1^+`, so each is at most
/// `||D1||^2` and the ball requires it to be at most `1 / beta^2`.
pub fn relation_values(gh: &GHGrid, t: f64, i: usize, j: usize) -> [f64; 4] {
    let t2 = t * t;
    let (g0, g1) = (gh.g(i, j), gh.g(i + 1, j));
    let (h0, h1) = (gh.h(i, j), gh.h(i, j + 1));
    [
        (g1 + h0) + t2 * (g0 + h1),
        (1.0 + t2) * (g1 + h1),
        (g0 + h1) + t2 * (g1 + h0),
        (1.0 + t2) * (g0 + h0),
    ]
}

/// Residuals `LHS - 1/beta^2` on `0 <= i <= rows`, `0 <= j <= cols`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    rows: usize,
    cols: usize,
    residuals: Vec<[f64; 4]>,
    pub max_residual: f64,
    pub feasible: bool,
    pub tol: f64,
}

impl ConstraintReport {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Residuals of the four relations at `(i, j)`.
    pub fn residual(&self, i: usize, j: usize) -> [f64; 4] {
        self.residuals[i * self.cols + j]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), [f64; 4])> + '_ {
        let cols = self.cols;
        self.residuals
            .iter()
            .enumerate()
            .map(move |(k, r)| ((k / cols, k % cols), *r))
    }
}

pub fn constraint_relations(e: &DiagonalElement, params: &PhaseSpaceParams) -> ConstraintReport {
    constraint_relations_with_tol(e, params, DEFAULT_TOL)
}

pub fn constraint_relations_with_tol(e: &DiagonalElement, params: &PhaseSpaceParams, tol: f64) -> ConstraintReport {
    let gh = gh_grid(e);
    let bound = 1.0 / (params.beta() * params.beta());
    let rows = e.rows + 1;
    let cols = e.cols + 1;
    let mut residuals = Vec::with_capacity(rows * cols);
    let mut max_residual = f64::NEG_INFINITY;
    for i in 0..rows {
        for j in 0..cols {
            let r = relation_values(&gh, params.t(), i, j).map(|v| v - bound);
            max_residual = r.iter().fold(max_residual, |a, &b| a.max(b));
            residuals.push(r);
        }
    }
    ConstraintReport {
        rows,
        cols,
        residuals,
        max_residual,
        feasible: max_residual <= tol,
        tol,
    }
}

/// Fast necessary test for membership in the ball. The operator norm in
/// [`crate::spectral::ball_condition`] is authoritative.
pub fn feasible_diagonal(e: &DiagonalElement, params: &PhaseSpaceParams, tol: f64) -> bool {
    constraint_relations_with_tol(e, params, tol).feasible
}
