//! Closed-form Fock-state distances and their explicit optimal elements.
//!
//! With `zeta_{p;q} = sum_{i=p+1}^{q} 1/sqrt(i)` (signed, `zeta_{p;q} = -zeta_{q;p}`)
//!
//! ```text
//! d(|m,n>, |k,l>) = sqrt(hbar^2 - theta^2) / sqrt(2 hbar) * sqrt(zeta_{m;k}^2 + zeta_{n;l}^2)
//! ```

use serde::Serialize;

use crate::ball::{DiagonalElement, Extension};
use crate::error::{Error, Result};
use crate::fock::FockLabel;
use crate::params::PhaseSpaceParams;

/// Signed partial sum `zeta_{p;q}`, summed in increasing index order.
pub fn zeta_partial(p: usize, q: usize) -> f64 {
    if q >= p {
        ((p + 1)..=q).map(|i| 1.0 / (i as f64).sqrt()).sum()
    } else {
        -zeta_partial(q, p)
    }
}

/// Cutoff and the number of top levels kept free of element support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub cutoff: usize,
    pub buffer: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { cutoff: 24, buffer: 8 }
    }
}

impl Truncation {
    pub fn new(cutoff: usize, buffer: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidCutoff {
                cutoff,
                reason: "at least two levels per mode are required".into(),
            });
        }
        if buffer >= cutoff {
            return Err(Error::InvalidCutoff {
                cutoff,
                reason: format!("buffer {buffer} leaves no room for element support"),
            });
        }
        Ok(Self { cutoff, buffer })
    }

    /// Labels below this limit (in both components) may carry support.
    pub fn window(&self) -> usize {
        self.cutoff - self.buffer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    pub from: FockLabel,
    pub to: FockLabel,
    pub closed_form: f64,
    pub prefactor: f64,
    /// `zeta_{min(m,k);max(m,k)}`.
    pub zeta_x: f64,
    /// `zeta_{min(n,l);max(n,l)}`.
    pub zeta_y: f64,
}

pub fn distance(params: &PhaseSpaceParams, a: FockLabel, b: FockLabel) -> DistanceReport {
    let zeta_x = zeta_partial(a.m.min(b.m), a.m.max(b.m));
    let zeta_y = zeta_partial(a.n.min(b.n), a.n.max(b.n));
    let prefactor = params.prefactor();
    DistanceReport {
        from: a,
        to: b,
        closed_form: prefactor * zeta_x.hypot(zeta_y),
        prefactor,
        zeta_x,
        zeta_y,
    }
}

/// Optimal element for `(|m,n>, |m+k,n>)`: stepped by `prefactor / sqrt(i)`
/// along the first index between `m` and `m + k`, constant along the second.
pub fn optimal_element_axis(
    params: &PhaseSpaceParams,
    m: usize,
    k: usize,
    n: usize,
    trunc: Truncation,
) -> Result<DiagonalElement> {
    let a = FockLabel::new(m, n);
    let b = FockLabel::new(m + k, n);
    b.check(trunc.window())?;
    if k == 0 {
        return Err(Error::DegeneratePair { m, n });
    }
    let scale = params.prefactor();
    DiagonalElement::from_fn(b.m + 1, 1, Extension::Clamp, |p, _| {
        scale * zeta_partial(0, p.clamp(a.m, b.m))
    })
}

/// Optimal element for an arbitrary pair:
///
/// ```text
/// c_{p,q} = (zeta_{0;p} zeta_{m;k} + zeta_{0;q} zeta_{n;l}) / (beta sqrt(1+t^2) sqrt(zeta_{m;k}^2 + zeta_{n;l}^2))
/// ```
///
/// with `p` clamped to the span of `m, k` and `q` to that of `n, l`. The signed
/// partial sums make `c_b - c_a` equal the closed form for either ordering.
pub fn optimal_element_general(
    params: &PhaseSpaceParams,
    a: FockLabel,
    b: FockLabel,
    trunc: Truncation,
) -> Result<DiagonalElement> {
    a.check(trunc.window())?;
    b.check(trunc.window())?;
    if a == b {
        return Err(Error::DegeneratePair { m: a.m, n: a.n });
    }
    let zx = zeta_partial(a.m, b.m);
    let zy = zeta_partial(a.n, b.n);
    let scale = params.prefactor() / zx.hypot(zy);
    let (p_lo, p_hi) = (a.m.min(b.m), a.m.max(b.m));
    let (q_lo, q_hi) = (a.n.min(b.n), a.n.max(b.n));
    DiagonalElement::from_fn(p_hi + 1, q_hi + 1, Extension::Clamp, |p, q| {
        let p = p.clamp(p_lo, p_hi);
        let q = q.clamp(q_lo, q_hi);
        scale * (zeta_partial(0, p) * zx + zeta_partial(0, q) * zy)
    })
}

/// `|d(m+k+l, m) - d(m+k, m) - d(m+k+l, m+k)|` along the first axis.
pub fn check_additivity(params: &PhaseSpaceParams, m: usize, n: usize, k: usize, l: usize) -> f64 {
    let d = |from: usize, to: usize| distance(params, FockLabel::new(from, n), FockLabel::new(to, n)).closed_form;
    (d(m, m + k + l) - d(m, m + k) - d(m + k, m + k + l)).abs()
}

/// `|d(m+k, n+l)^2 - d(m+k, n)^2 - d(m, n+l)^2|`, all measured from `|m,n>`.
pub fn check_pythagoras(params: &PhaseSpaceParams, m: usize, n: usize, k: usize, l: usize) -> f64 {
    let origin = FockLabel::new(m, n);
    let d = |to: FockLabel| distance(params, origin, to).closed_form;
    let hyp = d(FockLabel::new(m + k, n + l));
    let leg_x = d(FockLabel::new(m + k, n));
    let leg_y = d(FockLabel::new(m, n + l));
    (hyp * hyp - leg_x * leg_x - leg_y * leg_y).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(theta: f64) -> PhaseSpaceParams {
        PhaseSpaceParams::new(1.0, theta).unwrap()
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_partial(0, 1), 1.0);
        assert_eq!(zeta_partial(4, 4), 0.0);
        let z = 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(zeta_partial(1, 3), z, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_partial(1, 3), 1.284_457_1, epsilon = 1e-7);
        assert_eq!(zeta_partial(3, 1), -zeta_partial(1, 3));
    }

    #[test]
    fn distance_examples() {
        let d = distance(&params(0.0), FockLabel::new(0, 0), FockLabel::new(1, 0));
        assert_abs_diff_eq!(d.closed_form, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        let d = distance(&params(0.6), FockLabel::new(0, 0), FockLabel::new(1, 1));
        assert_abs_diff_eq!(d.closed_form, 0.8, epsilon = 1e-15);
        let d = distance(&params(0.6), FockLabel::new(0, 0), FockLabel::new(2, 0));
        assert_abs_diff_eq!(
            d.closed_form,
            0.8 / 2f64.sqrt() * (1.0 + 1.0 / 2f64.sqrt()),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(d.closed_form, 0.965_685_4, epsilon = 1e-7);
        let same = distance(&params(0.3), FockLabel::new(2, 5), FockLabel::new(2, 5));
        assert_eq!(same.closed_form, 0.0);
    }

    #[test]
    fn report_components() {
        let p = params(0.3);
        let d = distance(&p, FockLabel::new(3, 1), FockLabel::new(1, 4));
        assert_eq!(d.zeta_x, zeta_partial(1, 3));
        assert_eq!(d.zeta_y, zeta_partial(1, 4));
        assert_abs_diff_eq!(d.closed_form, d.prefactor * d.zeta_x.hypot(d.zeta_y), epsilon = 0.0);
        let back = distance(&p, FockLabel::new(1, 4), FockLabel::new(3, 1));
        assert_eq!(back.closed_form, d.closed_form);
    }

    #[test]
    fn axis_element_steps() {
        let e = optimal_element_axis(&params(0.0), 0, 1, 0, Truncation::default()).unwrap();
        assert_abs_diff_eq!(e.coeff(1, 3) - e.coeff(0, 3), 1.0 / 2f64.sqrt(), epsilon = 1e-15);

        let p = params(0.6);
        let e = optimal_element_axis(&p, 0, 2, 0, Truncation::default()).unwrap();
        assert_abs_diff_eq!(e.coeff(1, 0) - e.coeff(0, 0), 0.565_685_4, epsilon = 1e-7);
        assert_abs_diff_eq!(e.coeff(2, 5) - e.coeff(1, 5), 0.565_685_4 / 2f64.sqrt(), epsilon = 1e-7);
        assert_eq!(e.coeff(9, 0), e.coeff(2, 0));

        let a = FockLabel::new(0, 0);
        let b = FockLabel::new(2, 0);
        let d = distance(&p, a, b).closed_form;
        assert_abs_diff_eq!(e.objective(a, b), d, epsilon = 1e-15);
        assert_abs_diff_eq!(e.objective(b, a), -d, epsilon = 1e-15);
    }

    #[test]
    fn axis_element_range() {
        let t = Truncation::new(10, 8).unwrap();
        assert!(matches!(
            optimal_element_axis(&params(0.1), 1, 1, 0, t),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn general_element_diagonal_pair() {
        let e = optimal_element_general(
            &params(0.0),
            FockLabel::new(0, 0),
            FockLabel::new(1, 1),
            Truncation::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(e.coeff(1, 0) - e.coeff(0, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e.coeff(0, 1) - e.coeff(0, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e.coeff(1, 1) - e.coeff(0, 0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn general_reduces_to_axis() {
        let p = params(0.6);
        let t = Truncation::default();
        let axis = optimal_element_axis(&p, 1, 2, 2, t).unwrap();
        let gen = optimal_element_general(&p, FockLabel::new(1, 2), FockLabel::new(3, 2), t).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_abs_diff_eq!(axis.coeff(i, j), gen.coeff(i, j), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_pair() {
        let a = FockLabel::new(2, 2);
        assert!(matches!(
            optimal_element_general(&params(0.2), a, a, Truncation::default()),
            Err(Error::DegeneratePair { m: 2, n: 2 })
        ));
    }

    #[test]
    fn identities_on_trivial_legs() {
        let p = params(0.4);
        assert_eq!(check_additivity(&p, 1, 2, 0, 3), 0.0);
        assert_eq!(check_additivity(&p, 1, 2, 3, 0), 0.0);
        assert_eq!(check_pythagoras(&p, 1, 2, 0, 3), 0.0);
        assert!(check_pythagoras(&params(0.0), 0, 0, 1, 1) < 1e-12);
    }

    #[test]
    fn truncation_validation() {
        assert!(Truncation::new(24, 8).is_ok());
        assert!(Truncation::new(4, 4).is_err());
        assert!(Truncation::new(1, 0).is_err());
        assert_eq!(Truncation::default().window(), 16);
    }
}
