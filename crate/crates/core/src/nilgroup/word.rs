use std::fmt;

use super::{Nil2Element, NilError};

/// A word in the free group, kept as (generator, exponent) letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<(usize, i64)>,
}

impl FreeWord {
    /// Builds a word without reducing it. Zero exponents are dropped.
    pub fn new(rank: usize, letters: Vec<(usize, i64)>) -> Result<Self, NilError> {
        for &(g, _) in &letters {
            if g >= rank {
                return Err(NilError::GeneratorOutOfRange { index: g + 1, rank });
            }
        }
        Ok(FreeWord {
            rank,
            letters: letters.into_iter().filter(|l| l.1 != 0).collect(),
        })
    }

    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    /// Total absolute exponent.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.1.unsigned_abs()).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].0 != w[1].0) && self.letters.iter().all(|l| l.1 != 0)
    }

    pub fn concat(&self, other: &FreeWord) -> Result<FreeWord, NilError> {
        if self.rank != other.rank {
            return Err(NilError::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FreeWord {
            rank: self.rank,
            letters,
        })
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// Free reduction: merges adjacent powers of the same generator and
    /// drops cancelled letters.
    pub fn fg_reduce(&self) -> FreeWord {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.letters.len());
        for &(g, e) in &self.letters {
            match out.last_mut() {
                Some(last) if last.0 == g => {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        FreeWord {
            rank: self.rank,
            letters: out,
        }
    }

    /// Image in the free class-2 nilpotent group.
    pub fn nil2_normalize(&self) -> Nil2Element {
        let mut acc = Nil2Element::identity(self.rank);
        for &(g, e) in &self.letters {
            let letter = Nil2Element::generator(self.rank, g)
                .expect("letters are range-checked on construction")
                .pow(&e.into());
            acc = acc.mul(&letter).expect("equal ranks");
        }
        acc
    }

    /// The commutator word `[x_i, x_j] = x_i⁻¹ x_j⁻¹ x_i x_j`.
    pub fn commutator(rank: usize, i: usize, j: usize) -> Result<FreeWord, NilError> {
        FreeWord::new(rank, vec![(i, -1), (j, -1), (i, 1), (j, 1)])
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    format!("x{}", g + 1)
                } else {
                    format!("x{}^{}", g + 1, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(usize, i64)]) -> FreeWord {
        FreeWord::new(3, letters.to_vec()).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w(&[(0, 1), (0, -1)]).fg_reduce(), FreeWord::identity(3));
        assert_eq!(
            w(&[(0, 2), (1, 1), (1, 3)]).fg_reduce(),
            w(&[(0, 2), (1, 4)])
        );
        assert_eq!(
            w(&[(0, 1), (1, 1), (1, -1), (0, 1)]).fg_reduce(),
            w(&[(0, 2)])
        );
    }

    #[test]
    fn reduction_is_idempotent() {
        let v = w(&[(2, 1), (0, 3), (0, -3), (2, -1), (1, 2)]);
        let r = v.fg_reduce();
        assert!(r.is_reduced());
        assert_eq!(r.fg_reduce(), r);
        assert_eq!(r, w(&[(1, 2)]));
    }

    #[test]
    fn out_of_range_generator_is_rejected() {
        assert!(matches!(
            FreeWord::new(2, vec![(2, 1)]),
            Err(NilError::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
    }
}
