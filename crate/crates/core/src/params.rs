//! Deformation parameters of the generalized noncommutative phase space.
//!
//! Positions and momenta both fail to commute, with strengths `mu` and `nu`.
//! After the symplectic rescaling only `theta = sqrt(mu * nu)` survives, and
//! the Dirac operator depends on it through `beta` and `t`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceParams {
    hbar: f64,
    theta: f64,
    s: f64,
    beta: f64,
    t: f64,
}

impl PhaseSpaceParams {
    /// Requires `hbar > 0` and `0 <= theta < hbar`.
    pub fn new(hbar: f64, theta: f64) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "theta must be non-negative and finite, got {theta}"
            )));
        }
        if theta >= hbar {
            return Err(Error::SingularRegime { hbar, theta });
        }
        let s = (hbar * hbar - theta * theta).sqrt();
        let beta = (hbar + s).sqrt() / s;
        let t = theta / (hbar + s);
        Ok(Self {
            hbar,
            theta,
            s,
            beta,
            t,
        })
    }

    /// Builds the parameters from the two raw noncommutativity strengths.
    /// Only strictly positive `mu`, `nu` are accepted.
    pub fn from_mu_nu(hbar: f64, mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) || !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu and nu must be positive, got mu = {mu}, nu = {nu}"
            )));
        }
        Self::new(hbar, (mu * nu).sqrt())
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `sqrt(hbar^2 - theta^2)`.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Common scale of every Fock-state distance, `sqrt(hbar^2 - theta^2) / sqrt(2 hbar)`.
    ///
    /// Algebraically equal to `1 / (beta * sqrt(1 + t^2))`.
    pub fn prefactor(&self) -> f64 {
        self.s / (2.0 * self.hbar).sqrt()
    }

    /// Ratio of a distance at this `theta` to the same distance at `theta = 0`.
    pub fn shortening_factor(&self) -> f64 {
        (1.0 - (self.theta / self.hbar).powi(2)).sqrt()
    }

    pub fn is_commutative(&self) -> bool {
        self.theta == 0.0
    }
}
