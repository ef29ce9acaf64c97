//! Exploratory check of whether off-diagonal terms can beat a diagonal element.
//!
//! The objective only reads diagonal entries, so a perturbation `e + P` with
//! zero-diagonal Hermitian `P` helps exactly when it lowers the commutator
//! norm. This uses dense norms and is meant for small cutoffs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ball::DiagonalElement;
use crate::error::{Error, Result};
use crate::fock::{FockLabel, TruncatedOperator};
use crate::params::PhaseSpaceParams;
use crate::spectral::{dirac_commutator, dirac_operator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub cutoff: usize,
    /// Off-diagonal entries are drawn among labels with both components
    /// below this window.
    pub window: usize,
    pub samples: usize,
    /// Largest entry modulus of the perturbation, relative to `max |c|`.
    pub amplitude: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    /// `(c_b - c_a) / ||[D, pi(e)]||` for the unperturbed element.
    pub base_value: f64,
    /// Best value reached by a random local search over perturbations,
    /// each rescaled onto the ball.
    pub best_value: f64,
    pub samples: usize,
}

impl ProbeReport {
    pub fn improved(&self, tol: f64) -> bool {
        self.best_value > self.base_value + tol
    }
}

pub fn probe_off_diagonal(
    params: &PhaseSpaceParams,
    a: FockLabel,
    b: FockLabel,
    base: &DiagonalElement,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    if cfg.window > cfg.cutoff || cfg.window < 2 {
        return Err(Error::InvalidParameter(format!(
            "probe window {} must lie in 2..={}",
            cfg.window, cfg.cutoff
        )));
    }
    a.check(cfg.window)?;
    b.check(cfg.window)?;
    let d = dirac_operator(params, cfg.cutoff)?;
    let e0 = base.to_operator(cfg.cutoff)?;
    let objective = base.objective(a, b);
    let value_of = |op: &TruncatedOperator| -> Result<f64> {
        let norm = dirac_commutator(&d, op)?.norm()?;
        if norm == 0.0 {
            return Err(Error::ZeroElement);
        }
        Ok(objective / norm)
    };
    let base_value = value_of(&e0)?;

    let scale = cfg.amplitude * base.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let sites: Vec<usize> = (0..cfg.window)
        .flat_map(|i| (0..cfg.window).map(move |j| FockLabel::new(i, j).index(cfg.cutoff)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best_value = base_value;
    let mut current: DMatrix<Complex64> = e0.matrix().clone();
    for _ in 0..cfg.samples {
        let mut m = current.clone();
        for (x, &r) in sites.iter().enumerate() {
            for &c in &sites[x + 1..] {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
                m[(r, c)] += z;
                m[(c, r)] += z.conj();
            }
        }
        let op = TruncatedOperator::hermitian(cfg.cutoff, m)?;
        let value = value_of(&op)?;
        if value > best_value {
            best_value = value;
            current = op.into_matrix();
        }
    }
    Ok(ProbeReport {
        base_value,
        best_value,
        samples: cfg.samples,
    })
}
