use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CatError;
use crate::linalg::IntMatrix;

/// Finitely generated abelian group `Z^r ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with
/// `d1 | d2 | ... | dk`, every `di >= 2`.
///
/// Elements are coordinate vectors: free coordinates first, then one per
/// torsion factor, reduced to `0 <= x < di`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AbGroupPresentation {
    free_rank: usize,
    torsion: Vec<i64>,
}

impl AbGroupPresentation {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self, CatError> {
        for (k, &d) in torsion.iter().enumerate() {
            if d < 2 {
                return Err(CatError::Group(format!("torsion factor {d} must be >= 2")));
            }
            if k > 0 && d % torsion[k - 1] != 0 {
                return Err(CatError::Group(format!(
                    "torsion factors must divide each other in order, {} does not divide {d}",
                    torsion[k - 1]
                )));
            }
        }
        Ok(AbGroupPresentation { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(d: i64) -> Self {
        if d == 0 {
            Self::free(1)
        } else if d == 1 {
            Self::trivial()
        } else {
            AbGroupPresentation {
                free_rank: 0,
                torsion: vec![d],
            }
        }
    }

    pub fn free(rank: usize) -> Self {
        AbGroupPresentation {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    /// Modulus of coordinate `k`, 0 for free coordinates.
    pub fn modulus(&self, k: usize) -> i64 {
        if k < self.free_rank {
            0
        } else {
            self.torsion[k - self.free_rank]
        }
    }

    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn has_two_torsion(&self) -> bool {
        self.torsion.iter().any(|d| d % 2 == 0)
    }

    pub fn reduce_in_place(&self, v: &mut [i64]) {
        for (k, &d) in self.torsion.iter().enumerate() {
            let x = &mut v[self.free_rank + k];
            *x = x.rem_euclid(d);
        }
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&v)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = a.iter().map(|x| -x).collect();
        self.reduce(&v)
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&v)
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        self.reduce(a).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.dim() && self.reduce(a) == a
    }

    /// Unit vectors of the coordinates: a generating set.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|k| {
                let mut v = self.zero();
                v[k] = 1;
                v
            })
            .collect()
    }

    /// All elements of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        if self.free_rank > 0 {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Whether the integer matrix `m` (target × source coordinates)
    /// induces a well-defined homomorphism `self → target`.
    pub fn is_hom_to(&self, m: &IntMatrix, target: &AbGroupPresentation) -> bool {
        if m.rows() != target.dim() || m.cols() != self.dim() {
            return false;
        }
        for (k, &d) in self.torsion.iter().enumerate() {
            let col: Vec<i64> = m.column(self.free_rank + k).iter().map(|x| x * d).collect();
            if !target.is_zero(&col) {
                return false;
            }
        }
        true
    }

    /// Per-coordinate moduli of `self^n`, coordinate `(e, k)` at `e * dim + k`.
    pub fn power_moduli(&self, n: usize) -> Vec<i64> {
        (0..n)
            .flat_map(|_| (0..self.dim()).map(|k| self.modulus(k)))
            .collect()
    }

    /// Invariant-factor presentation of `self^n`.
    pub fn power(&self, n: usize) -> AbGroupPresentation {
        let mut torsion: Vec<i64> = Vec::new();
        for &d in &self.torsion {
            for _ in 0..n {
                torsion.push(d);
            }
        }
        torsion.sort_unstable();
        AbGroupPresentation {
            free_rank: self.free_rank * n,
            torsion,
        }
    }
}

impl fmt::Display for AbGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl fmt::Debug for AbGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AbGroupPresentation {
    type Err = CatError;

    /// Parses `0`, `Z`, `Z^2`, `Z/4`, `Z+Z/2`, `Z/2+Z/2`; `⊕` may replace `+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.replace('⊕', "+").replace('ℤ', "Z");
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::trivial());
        }
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for part in s.split('+') {
            let p = part.trim();
            let bad = || CatError::Group(format!("cannot parse group summand {p:?}"));
            if p == "Z" {
                free += 1;
            } else if let Some(e) = p.strip_prefix("Z^") {
                free += e.trim().parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = p.strip_prefix("Z/") {
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d < 1 {
                    return Err(bad());
                }
                if d > 1 {
                    torsion.push(d);
                }
            } else if p == "0" {
            } else {
                return Err(bad());
            }
        }
        Self::new(free, torsion)
    }
}

impl Serialize for AbGroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AbGroupPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["0", "Z", "Z^2", "Z/2", "Z+Z/2", "Z/2+Z/4"] {
            let g: AbGroupPresentation = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("Z/2+Z/3".parse::<AbGroupPresentation>().is_err());
        assert!("Q".parse::<AbGroupPresentation>().is_err());
        assert_eq!("ℤ⊕ℤ/2".parse::<AbGroupPresentation>().unwrap().to_string(), "Z+Z/2");
    }

    #[test]
    fn arithmetic_and_elements() {
        let g: AbGroupPresentation = "Z+Z/4".parse().unwrap();
        assert_eq!(g.add(&[1, 3], &[2, 3]), vec![3, 2]);
        assert_eq!(g.neg(&[1, 1]), vec![-1, 3]);
        assert!(g.elements().is_none());
        let h: AbGroupPresentation = "Z/2+Z/2".parse().unwrap();
        assert_eq!(h.elements().unwrap().len(), 4);
        assert_eq!(h.order(), Some(4));
    }

    #[test]
    fn hom_check() {
        let z2: AbGroupPresentation = "Z/2".parse().unwrap();
        let z4: AbGroupPresentation = "Z/4".parse().unwrap();
        assert!(z2.is_hom_to(&IntMatrix::diagonal(&[2]), &z4));
        assert!(!z2.is_hom_to(&IntMatrix::diagonal(&[1]), &z4));
        assert!(z4.is_hom_to(&IntMatrix::diagonal(&[1]), &z2));
    }
}
