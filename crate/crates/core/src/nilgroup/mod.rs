//! Free groups and free class-2 nilpotent groups.
//!
//! Generators are numbered from 0 in the API and from 1 in the text form
//! (`x1`, `x2`, ...). The commutator convention is `[a, b] = a⁻¹ b⁻¹ a b`.
//! An element of the free class-2 nilpotent group of rank n is stored in the
//! collected normal form
//!
//! ```text
//! x1^a1 x2^a2 ... xn^an  ∏_{i<j} [xi, xj]^cij
//! ```
//!
//! and the product of two normal forms is
//! `(a, c)(b, d) = (a + b, c + d + κ(a, b))` with `κ(a, b)_ij = -a_j b_i` for
//! `i < j`, the price of moving `xi^bi` left past `xj^aj`.

mod element;
mod hom;
mod int;
mod word;

pub use element::{pair_index, Nil2Element};
pub use hom::{Nil2Hom, StructuralMap};
pub use int::Int;
pub use word::FreeWord;

pub use crate::linalg::IntMatrix;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NilError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator x{index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("malformed element text at token {position} ({token:?}): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("invalid parameters for {kind}: {reason}")]
    InvalidParameters { kind: String, reason: String },
    #[error("exponent {0} does not fit in 64 bits")]
    Overflow(String),
}
