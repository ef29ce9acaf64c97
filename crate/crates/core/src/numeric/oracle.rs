//! Random-search lower bound on the distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{DiagonalElement, Extension};
use crate::closed_form::{optimal_element_general, Truncation};
use crate::error::{Error, Result};
use crate::fock::FockLabel;
use crate::params::PhaseSpaceParams;

use super::scale_to_ball;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub cutoff: usize,
    pub buffer: usize,
    pub samples: usize,
    pub seed: u64,
    /// Also try the closed-form optimal element and perturbations of it.
    pub include_closed_form: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cutoff: 24,
            buffer: 8,
            samples: 200,
            seed: 42,
            include_closed_form: true,
        }
    }
}

/// Best `|c_b - c_a|` over candidate directions, each scaled onto the
/// boundary of the ball. Always a lower bound on the true supremum.
///
/// Candidates: every single-site element on a box around both labels, the
/// closed-form element (if enabled), and `samples` random elements. Half of
/// the random elements perturb the closed-form one when it is enabled.
pub fn brute_force_oracle(params: &PhaseSpaceParams, a: FockLabel, b: FockLabel, cfg: &OracleConfig) -> Result<f64> {
    let trunc = Truncation::new(cfg.cutoff, cfg.buffer)?;
    a.check(trunc.window())?;
    b.check(trunc.window())?;
    if a == b {
        return Ok(0.0);
    }
    let rows = (a.m.max(b.m) + 2).min(trunc.window());
    let cols = (a.n.max(b.n) + 2).min(trunc.window());
    let mut best = 0.0f64;
    let mut consider = |e: &DiagonalElement| -> Result<()> {
        match scale_to_ball(e, params, cfg.cutoff) {
            Ok(s) => best = best.max(s.objective(a, b).abs()),
            Err(Error::ZeroElement) => {}
            Err(other) => return Err(other),
        }
        Ok(())
    };

    for i in 0..rows {
        for j in 0..cols {
            consider(&DiagonalElement::single_site(i, j, 1.0)?)?;
        }
    }

    let closed = if cfg.include_closed_form {
        let e = optimal_element_general(params, a, b, trunc)?;
        consider(&e)?;
        Some(e)
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..cfg.samples {
        let e = match &closed {
            Some(base) if k % 2 == 1 => {
                let amp = 0.2 * base.objective(a, b).abs() / (1 + k / 2) as f64;
                DiagonalElement::from_fn(rows, cols, Extension::Clamp, |i, j| {
                    base.coeff(i, j) + amp * rng.random_range(-1.0..1.0)
                })?
            }
            _ => DiagonalElement::from_fn(rows, cols, Extension::Clamp, |_, _| rng.random_range(-1.0..1.0))?,
        };
        consider(&e)?;
    }
    Ok(best)
}
