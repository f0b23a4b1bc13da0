//! Cohomology of small categories with coefficients in natural systems.
//!
//! Cochains are normalized: chains of positive degree never contain an
//! identity. A degree-`n` chain `(f1, .., fn)` is composable as
//! `f1 ∘ .. ∘ fn`, and the coboundary is
//!
//! `(δσ)(f1..fn+1) = f1_* σ(f2..) + Σ (-1)^i σ(.. fi fi+1 ..) + (-1)^(n+1) fn+1^* σ(f1..fn)`.
//!
//! Values are coordinate vectors of the coefficient groups; all linear
//! algebra is carried out on lifts to free abelian groups with the torsion
//! relations added explicitly.

mod complex;
mod extension;
mod group;

pub use complex::{Cochain, CochainComplex};
pub use extension::{
    canonical_section, check_section, class_of, class_vanishes, delta, dual_section, exhaustive_pseudosection, extension_cocycle,
    perturb, random_section, reverse_cochain, section_to_value, section_track, solve_pseudosection,
    verify_pseudofunctor_section, verify_section_preserves_sums, ExtensionClass, Pseudosection, Section,
};
pub use group::{BoundaryLattice, CohomologyGroup, GroupSummary};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::trackcat::TrackError;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("degree {degree} exceeds the truncation degree {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("malformed cochain: {0}")]
    Malformed(String),
    #[error("not a cocycle: coboundary is {value:?} at chain {chain:?}")]
    NotCocycle { chain: Vec<String>, value: Vec<i64> },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("ill-matched section at {morphism}: {reason}")]
    IllMatchedSection { morphism: String, reason: String },
}
