//! Finite categories, abelian group coefficients and natural systems.

mod abgroup;
mod category;
mod coeff_matrix;
mod functor;
pub mod json;
mod natural;

pub use abgroup::AbGroupPresentation;
pub use category::{CategoryBuilder, Chain, FinCategory, MorId, Morphism, ObjId};
pub use coeff_matrix::CoeffMatrix;
pub use functor::FinFunctor;
pub use natural::NaturalSystem;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("{path}: {message}")]
    Structure { path: String, message: String },
    #[error("invalid group: {0}")]
    Group(String),
    #[error("not a functor: {0}")]
    Functor(String),
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl CatError {
    pub fn structure(path: &str, message: impl Into<String>) -> Self {
        let path = if path.is_empty() { "/" } else { path };
        CatError::Structure {
            path: path.to_string(),
            message: message.into(),
        }
    }
}
