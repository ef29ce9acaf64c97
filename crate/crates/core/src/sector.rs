//! Block decomposition of `D1` for diagonal elements.
//!
//! For diagonal `e`, `[A1, e]` and `[A2, e]` lower the total excitation
//! number `p + q` by one. The block `D1 = [[V^+, U^+], [U, -V]]` therefore maps
//! an input pair living at level `s` to a first output component at level
//! `s + 1` and a second at level `s - 1`. Distinct `s` give disjoint outputs,
//! so `||D1||` is the largest norm among these small level blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{I, ONE};
use crate::norm::block_norm;

/// One linear contribution `weight * c[site]` to entry `(row, col)` of a block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term {
    pub row: usize,
    pub col: usize,
    pub site: usize,
    pub weight: Complex64,
}

#[derive(Debug, Clone)]
pub(crate) struct SectorStencil {
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<Term>,
}

impl SectorStencil {
    pub fn assemble(&self, coeffs: &[f64]) -> DMatrix<Complex64> {
        let mut b = DMatrix::zeros(self.rows, self.cols);
        for t in &self.terms {
            b[(t.row, t.col)] += t.weight * coeffs[t.site];
        }
        b
    }
}

/// Level blocks of `D1` (without the factor `beta`) as linear functions of
/// the coefficient grid `c[p * n + q]`, `0 <= p, q < n`.
#[derive(Debug, Clone)]
pub(crate) struct LevelStencils {
    n: usize,
    sectors: Vec<SectorStencil>,
}

fn level_range(n: usize, s: isize) -> Option<(usize, usize)> {
    if s < 0 || s as usize > 2 * (n - 1) {
        return None;
    }
    let s = s as usize;
    Some((s.saturating_sub(n - 1), s.min(n - 1)))
}

fn level_len(n: usize, s: isize) -> usize {
    level_range(n, s).map_or(0, |(lo, hi)| hi - lo + 1)
}

impl LevelStencils {
    pub fn new(n: usize, t: f64) -> Self {
        assert!(n >= 2);
        let it = I * t;
        let site = |p: usize, q: usize| p * n + q;
        let mut sectors = Vec::with_capacity(2 * n - 1);
        for s in 0..=(2 * (n - 1)) as isize {
            let (lo, hi) = level_range(n, s).unwrap();
            let len = hi - lo + 1;
            let up_len = level_len(n, s + 1);
            let down_len = level_len(n, s - 1);
            let up_lo = level_range(n, s + 1).map_or(0, |r| r.0);
            let down_lo = level_range(n, s - 1).map_or(0, |r| r.0);
            let mut terms = Vec::new();
            // x_{p,q} = sqrt(p+1) (c_{p+1,q} - c_{p,q})
            let mut push_x = |row: usize, col: usize, p: usize, q: usize, f: Complex64| {
                let w = f * ((p + 1) as f64).sqrt();
                terms.push(Term {
                    row,
                    col,
                    site: site(p + 1, q),
                    weight: w,
                });
                terms.push(Term {
                    row,
                    col,
                    site: site(p, q),
                    weight: -w,
                });
            };
            let mut ys = Vec::new();
            for p in lo..=hi {
                let q = s as usize - p;
                let j1 = p - lo;
                let j2 = len + j1;
                if q + 1 < n {
                    // chi1 at (p, q+1)
                    let r = p - up_lo;
                    ys.push((r, j1, p, q, ONE));
                    ys.push((r, j2, p, q, it));
                }
                if p + 1 < n {
                    // chi1 at (p+1, q)
                    let r = p + 1 - up_lo;
                    push_x(r, j1, p, q, -it);
                    push_x(r, j2, p, q, ONE);
                }
                if p >= 1 {
                    // chi2 at (p-1, q)
                    let r = up_len + (p - 1 - down_lo);
                    push_x(r, j1, p - 1, q, ONE);
                    push_x(r, j2, p - 1, q, -it);
                }
                if q >= 1 {
                    // chi2 at (p, q-1)
                    let r = up_len + (p - down_lo);
                    ys.push((r, j1, p, q - 1, -it));
                    ys.push((r, j2, p, q - 1, -ONE));
                }
            }
            // y_{p,q} = sqrt(q+1) (c_{p,q+1} - c_{p,q})
            for (r, c, p, q, f) in ys {
                let w = f * ((q + 1) as f64).sqrt();
                terms.push(Term {
                    row: r,
                    col: c,
                    site: site(p, q + 1),
                    weight: w,
                });
                terms.push(Term {
                    row: r,
                    col: c,
                    site: site(p, q),
                    weight: -w,
                });
            }
            sectors.push(SectorStencil {
                rows: up_len + down_len,
                cols: 2 * len,
                terms,
            });
        }
        Self { n, sectors }
    }

    pub fn sectors(&self) -> &[SectorStencil] {
        &self.sectors
    }

    /// `||D1||` for the diagonal element with coefficient grid `coeffs`.
    pub fn d1_norm(&self, coeffs: &[f64]) -> Result<f64> {
        debug_assert_eq!(coeffs.len(), self.n * self.n);
        let mut worst = 0.0f64;
        for sector in &self.sectors {
            worst = worst.max(block_norm(&sector.assemble(coeffs))?);
        }
        Ok(worst)
    }
}
