//! Connes spectral distances between two-mode Fock states on the
//! four-dimensional generalized noncommutative phase space.
//!
//! The closed forms in [`closed_form`] are cross-checked against a numerical
//! supremum over the unit ball of the Dirac commutator in [`numeric`].

pub mod ball;
pub mod closed_form;
pub mod error;
pub mod fock;
pub mod gamma;
pub mod norm;
pub mod numeric;
pub mod params;
mod sector;
pub mod spectral;
#[cfg(test)]
mod tests;

pub use ball::{
    constraint_relations, constraint_relations_with_tol, feasible_diagonal, gh_grid, ConstraintReport, DiagonalElement,
    Extension, GHGrid, DEFAULT_TOL,
};
pub use closed_form::{
    check_additivity, check_pythagoras, distance, optimal_element_axis, optimal_element_general, zeta_partial,
    DistanceReport, Truncation,
};
pub use error::{Error, Result};
pub use fock::{
    annihilation_mode, creation_mode, deformed_ladder, fock_density, FockLabel, FockStateDensity, Mode,
    TruncatedOperator,
};
pub use gamma::{gamma_matrices, GammaSet};
pub use norm::operator_norm;
pub use numeric::{scale_to_ball, sup_distance, ConstraintMode, SupResult, SupSolverConfig};
pub use params::PhaseSpaceParams;
pub use spectral::{
    ball_condition, ball_condition_diagonal, diagonal_commutator_norm, dirac_commutator, dirac_operator, represent,
    BallReport, DiracCommutator, DiracOperator,
};
