//! Weak nil₂ cogroups, interchange structures and the canonical
//! Γ-structure of a map.
//!
//! Everything lives in the split model over a coefficient group `M`. An
//! object is a rank `r`; its weak cogroup structure `F_X` sends `α: n → m`
//! to `α ⊗ id_r` with compositors coming from a twist family.
//!
//! For a map `f: X → Y` and `α: n → m` the interchange track is
//!
//! `Γ_α: f_m F_X(α) ⇒ F_Y(α) f_n`
//!
//! with `f_n = ∨_n f`. Its coordinate is an `(m r_Y) × (n r_X)` matrix.

mod cogroup;
mod equivalence;
mod interchange;
mod verify;

pub use cogroup::{sample_homs, tilde, verify_pseudofunctor, Reduction, Twist, WeakCogroup};
pub use equivalence::{
    check_homotopy_determination, unit_isomorphism, verify_unit_isomorphism, GammaFunctorPair, PseudoHomotopy,
    PseudoNatTrans, Theory,
};
pub use interchange::{
    boxbox, boxbox_typed, interchange_track, wedge_of, CanonicalGamma, InterchangeStructure, Perturbed,
};
pub use verify::{
    nonzero_coefficients, track_generators, verify_boxbox_associativity, verify_gamma_grid, verify_mu_algebra,
    verify_naturality, verify_negative_track, verify_property_gamma, verify_sum_formula, verify_track_naturality,
    verify_typed_boxbox, verify_uniqueness, words_up_to, Cached, Grid, GridStats,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::nilgroup::NilError;
use crate::report::Report;
use crate::trackcat::TrackError;

#[derive(Debug, Error)]
pub enum GammaError {
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("coefficient {0} too large for a multiplication track")]
    Overflow(String),
    #[error("the nil₁ theory needs coefficients without 2-torsion, got {0}")]
    TwoTorsion(String),
    #[error("structure rejected: {}", .0.title)]
    Rejected(Box<Report>),
}
