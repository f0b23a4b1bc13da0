//! Exact integer linear algebra: dense matrices, Smith normal form and
//! sparse echelon lattices.

mod lattice;
mod matrix;
mod snf;

pub use lattice::{EchelonLattice, SparseVec};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Smith};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("vector of length {found} does not match lattice dimension {expected}")]
    Dimension { expected: usize, found: usize },
}

/// Extended gcd: returns `(g, s, t)` with `g = s a + t b >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64), LinalgError> {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    let cv = |x: i128| i64::try_from(x).map_err(|_| LinalgError::Overflow);
    Ok((cv(old_r)?, cv(old_s)?, cv(old_t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (-3, -9)] {
            let (g, s, t) = ext_gcd(a, b).unwrap();
            assert_eq!(g, num_integer::Integer::gcd(&a, &b));
            assert_eq!(s * a + t * b, g);
        }
    }
}
