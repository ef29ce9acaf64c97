//! Euclidean Dirac matrices in four dimensions.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::fock::{I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    gammas: [Matrix4<Complex64>; 4],
}

impl GammaSet {
    /// `k` runs from 1 to 4.
    pub fn gamma(&self, k: usize) -> &Matrix4<Complex64> {
        assert!((1..=4).contains(&k), "gamma index {k} out of 1..=4");
        &self.gammas[k - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Matrix4<Complex64>> {
        self.gammas.iter()
    }

    /// Largest entry of `g^k g^l + g^l g^k - 2 delta_kl I` over all pairs.
    /// Entries are drawn from {0, +-1, +-i}, so this is exactly zero.
    pub fn anticommutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, gk) in self.gammas.iter().enumerate() {
            for (l, gl) in self.gammas.iter().enumerate() {
                let mut ac = gk * gl + gl * gk;
                if k == l {
                    ac -= Matrix4::identity() * Complex64::new(2.0, 0.0);
                }
                worst = worst.max(ac.iter().fold(0.0, |a, z| a.max(z.norm())));
            }
        }
        worst
    }

    /// Coefficients of the formal symbols `(Y1, Q1, Y2, Q2)` in each entry of
    /// `g^1 Y1 - g^2 Q1 + g^3 Y2 - g^4 Q2`.
    pub fn contraction_pattern(&self) -> [[[Complex64; 4]; 4]; 4] {
        let signed = [
            (0, ONE),  // Y1
            (1, -ONE), // Q1
            (2, ONE),  // Y2
            (3, -ONE), // Q2
        ];
        let mut out = [[[ZERO; 4]; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                for &(k, sign) in &signed {
                    cell[k] = sign * self.gammas[k][(r, c)];
                }
            }
        }
        out
    }
}

pub fn gamma_matrices() -> GammaSet {
    let (o, l, i) = (ZERO, ONE, I);
    #[rustfmt::skip]
    let gammas = [
        Matrix4::new(
            o,  o,  o,  i,
            o,  o,  i,  o,
            o, -i,  o,  o,
           -i,  o,  o,  o,
        ),
        Matrix4::new(
            o,  o,  o,  l,
            o,  o, -l,  o,
            o, -l,  o,  o,
            l,  o,  o,  o,
        ),
        Matrix4::new(
            o,  o,  i,  o,
            o,  o,  o, -i,
           -i,  o,  o,  o,
            o,  i,  o,  o,
        ),
        Matrix4::new(
            o,  o,  l,  o,
            o,  o,  o,  l,
            l,  o,  o,  o,
            o,  l,  o,  o,
        ),
    ];
    GammaSet { gammas }
}
