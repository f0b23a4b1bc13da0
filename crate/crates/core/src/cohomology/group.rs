use serde::Serialize;

use super::{Cochain, CochainComplex, CohomologyError};
use crate::catcore::AbGroupPresentation;
use crate::linalg::{smith_normal_form, EchelonLattice, IntMatrix, SparseVec};

/// Subgroup `B^n + T^n` of coordinate lifts: coboundaries plus torsion
/// relations of `F^n`. Its canonical remainders identify classes modulo
/// coboundaries, and it solves `δc = z`.
pub struct BoundaryLattice {
    degree: usize,
    lower_dim: usize,
    lattice: EchelonLattice,
}

impl BoundaryLattice {
    pub fn new(cx: &CochainComplex<'_>, n: usize) -> Result<Self, CohomologyError> {
        let dim = cx.dim(n)?;
        let mut lattice = EchelonLattice::new(dim, true);
        let lower_dim = if n == 0 {
            0
        } else {
            let cols = cx.coboundary_columns(n - 1)?;
            for c in &cols {
                lattice.insert(c)?;
            }
            cols.len()
        };
        for (j, d) in cx.moduli(n)?.into_iter().enumerate() {
            if d != 0 {
                lattice.insert(&SparseVec::from_pairs([(j, d)])?)?;
            }
        }
        Ok(BoundaryLattice {
            degree: n,
            lower_dim,
            lattice,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Canonical representative of `z` modulo coboundaries; zero iff `z`
    /// is a coboundary.
    pub fn key(&self, cx: &CochainComplex<'_>, z: &Cochain) -> Result<Vec<i64>, CohomologyError> {
        Ok(self.lattice.remainder(&cx.to_flat(z)?)?)
    }

    pub fn is_coboundary(&self, cx: &CochainComplex<'_>, z: &Cochain) -> Result<bool, CohomologyError> {
        Ok(self.key(cx, z)?.iter().all(|&x| x == 0))
    }

    /// Some `c` with `δc = z`, if one exists.
    pub fn solve(&self, cx: &CochainComplex<'_>, z: &Cochain) -> Result<Option<Cochain>, CohomologyError> {
        if self.degree == 0 {
            return Err(CohomologyError::Malformed("no cochains below degree 0".into()));
        }
        let Some(sol) = self.lattice.solve(&cx.to_flat(z)?)? else {
            return Ok(None);
        };
        let mut flat = vec![0i64; self.lower_dim];
        for &(g, x) in sol.entries() {
            if g < self.lower_dim {
                flat[g] = x;
            }
        }
        Ok(Some(cx.from_flat(self.degree - 1, &flat)?))
    }
}

/// `H^n(C, D)` with a map from cocycles to coordinates in its
/// invariant-factor presentation.
pub struct CohomologyGroup {
    degree: usize,
    presentation: AbGroupPresentation,
    cocycles: EchelonLattice,
    p: IntMatrix,
    rank: usize,
    diag: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub group: String,
    pub cochain_dims: [usize; 3],
}

impl CohomologyGroup {
    /// Requires the complex to reach degree `n + 1`.
    pub fn compute(cx: &CochainComplex<'_>, n: usize) -> Result<Self, CohomologyError> {
        let dim_n = cx.dim(n)?;
        let dim_next = cx.dim(n + 1)?;
        // cocycle lifts: kernel of [δ | torsion of F^{n+1}]
        let mut k = EchelonLattice::new(dim_next, true);
        for c in cx.coboundary_columns(n)? {
            k.insert(&c)?;
        }
        for (j, d) in cx.moduli(n + 1)?.into_iter().enumerate() {
            if d != 0 {
                k.insert(&SparseVec::from_pairs([(j, d)])?)?;
            }
        }
        let mut cocycles = EchelonLattice::new(dim_n, false);
        for r in k.relations() {
            let proj = SparseVec::from_pairs(r.entries().iter().copied().filter(|e| e.0 < dim_n))?;
            cocycles.insert(&proj)?;
        }
        let rank_z = cocycles.rank();
        // boundary lifts expressed in the cocycle basis
        let mut gens: Vec<Vec<i64>> = Vec::new();
        if n > 0 {
            for c in cx.coboundary_columns(n - 1)? {
                gens.push(c.to_dense(dim_n));
            }
        }
        for (j, d) in cx.moduli(n)?.into_iter().enumerate() {
            if d != 0 {
                let mut v = vec![0; dim_n];
                v[j] = d;
                gens.push(v);
            }
        }
        let mut rel = IntMatrix::zeros(rank_z, gens.len());
        for (col, g) in gens.iter().enumerate() {
            let y = cocycles
                .coordinates(g)?
                .ok_or_else(|| CohomologyError::Internal("a boundary is not a cocycle".into()))?;
            for (i, v) in y.into_iter().enumerate() {
                rel.set(i, col, v);
            }
        }
        let snf = smith_normal_form(&rel)?;
        let mut diag = vec![0i64; rank_z];
        diag[..snf.diag.len().min(rank_z)].copy_from_slice(&snf.diag[..snf.diag.len().min(rank_z)]);
        let torsion: Vec<i64> = diag[..snf.rank].iter().copied().filter(|&d| d > 1).collect();
        let presentation = AbGroupPresentation::new(rank_z - snf.rank, torsion)
            .map_err(|e| CohomologyError::Internal(e.to_string()))?;
        Ok(CohomologyGroup {
            degree: n,
            presentation,
            cocycles,
            p: snf.p,
            rank: snf.rank,
            diag,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn presentation(&self) -> &AbGroupPresentation {
        &self.presentation
    }

    /// Coordinates of the class of a cocycle.
    pub fn class_coordinates(&self, cx: &CochainComplex<'_>, z: &Cochain) -> Result<Vec<i64>, CohomologyError> {
        if z.degree != self.degree {
            return Err(CohomologyError::Malformed("degree mismatch".into()));
        }
        let dz = cx.coboundary(z)?;
        if let Some((chain, value)) = cx.first_nonzero(&dz) {
            return Err(CohomologyError::NotCocycle { chain, value });
        }
        let y = self
            .cocycles
            .coordinates(&cx.to_flat(z)?)?
            .ok_or_else(|| CohomologyError::Internal("cocycle outside the cocycle lattice".into()))?;
        let u = self.p.mul_vec(&y)?;
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (i, &x) in u.iter().enumerate() {
            if i >= self.rank {
                free.push(x);
            } else if self.diag[i] > 1 {
                tors.push(x.rem_euclid(self.diag[i]));
            }
        }
        free.extend(tors);
        Ok(free)
    }

    pub fn summary(&self, cx: &CochainComplex<'_>) -> GroupSummary {
        let d = |k: usize| cx.dim(k).unwrap_or(0);
        GroupSummary {
            degree: self.degree,
            group: self.presentation.to_string(),
            cochain_dims: [
                if self.degree > 0 { d(self.degree - 1) } else { 0 },
                d(self.degree),
                d(self.degree + 1),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::{FinCategory, NaturalSystem};

    fn groups(c: &FinCategory, m: AbGroupPresentation, top: usize) -> Vec<String> {
        let d = NaturalSystem::constant(c, m);
        let cx = CochainComplex::new(c, &d, top + 1);
        (0..=top)
            .map(|n| CohomologyGroup::compute(&cx, n).unwrap().presentation().to_string())
            .collect()
    }

    #[test]
    fn cyclic_group_with_trivial_coefficients() {
        let c = FinCategory::cyclic_group(2);
        assert_eq!(groups(&c, AbGroupPresentation::cyclic(2), 3), ["Z/2"; 4]);
        let c = FinCategory::cyclic_group(3);
        assert_eq!(groups(&c, AbGroupPresentation::free(1), 3), ["Z", "0", "Z/3", "0"]);
    }

    #[test]
    fn arrow_category_is_contractible() {
        let c = FinCategory::arrow();
        assert_eq!(groups(&c, AbGroupPresentation::cyclic(4), 2), ["Z/4", "0", "0"]);
    }

    #[test]
    fn class_coordinates_detect_the_generator() {
        let c = FinCategory::cyclic_group(2);
        let d = NaturalSystem::constant(&c, AbGroupPresentation::cyclic(2));
        let cx = CochainComplex::new(&c, &d, 3);
        let h = CohomologyGroup::compute(&cx, 2).unwrap();
        // the only nondegenerate 2-chain is (g1, g1)
        let z = cx.from_flat(2, &[1]).unwrap();
        assert_eq!(h.class_coordinates(&cx, &z).unwrap(), vec![1]);
        let b = BoundaryLattice::new(&cx, 2).unwrap();
        assert!(!b.is_coboundary(&cx, &z).unwrap());
        assert!(b.is_coboundary(&cx, &cx.zero(2).unwrap()).unwrap());
    }

    #[test]
    fn solve_recovers_a_preimage() {
        let c = FinCategory::cyclic_group(3);
        let d = NaturalSystem::constant(&c, AbGroupPresentation::free(1));
        let cx = CochainComplex::new(&c, &d, 3);
        let x = cx.from_flat(1, &[2, -5]).unwrap();
        let z = cx.coboundary(&x).unwrap();
        let b = BoundaryLattice::new(&cx, 2).unwrap();
        let y = b.solve(&cx, &z).unwrap().unwrap();
        assert_eq!(cx.coboundary(&y).unwrap(), z);
    }

    #[test]
    fn order_four_with_integer_coefficients() {
        // used to overflow before the lattice kept its basis reduced
        let c = FinCategory::cyclic_group(4);
        assert_eq!(groups(&c, AbGroupPresentation::free(1), 3), ["Z", "0", "Z/4", "0"]);
    }
}
