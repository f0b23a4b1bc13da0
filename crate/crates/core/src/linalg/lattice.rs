use std::collections::{BTreeMap, HashMap};

use super::{ext_gcd, LinalgError};

/// Sparse integer vector with strictly increasing indices and nonzero values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, i64)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn from_dense(v: &[i64]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, x))
                .collect(),
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, i64)>) -> Result<Self, LinalgError> {
        let mut map: BTreeMap<usize, i64> = BTreeMap::new();
        for (i, x) in pairs {
            let e = map.entry(i).or_insert(0);
            *e = e.checked_add(x).ok_or(LinalgError::Overflow)?;
        }
        Ok(SparseVec {
            entries: map.into_iter().filter(|(_, x)| *x != 0).collect(),
        })
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, 1)],
        }
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<(usize, i64)> {
        self.entries.first().copied()
    }

    pub fn get(&self, i: usize) -> i64 {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<i64> {
        let mut v = vec![0; dim];
        for &(i, x) in &self.entries {
            v[i] = x;
        }
        v
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: i64, other: &SparseVec, b: i64) -> Result<SparseVec, LinalgError> {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let mul = |x: i64, k: i64| x.checked_mul(k).ok_or(LinalgError::Overflow);
        while i < self.entries.len() || j < other.entries.len() {
            let li = self.entries.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let lj = other.entries.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            let (idx, val) = if li < lj {
                i += 1;
                (li, mul(self.entries[i - 1].1, a)?)
            } else if lj < li {
                j += 1;
                (lj, mul(other.entries[j - 1].1, b)?)
            } else {
                i += 1;
                j += 1;
                let v = mul(self.entries[i - 1].1, a)?
                    .checked_add(mul(other.entries[j - 1].1, b)?)
                    .ok_or(LinalgError::Overflow)?;
                (li, v)
            };
            if val != 0 {
                out.push((idx, val));
            }
        }
        Ok(SparseVec { entries: out })
    }
}

/// Subgroup of `Z^dim` kept as an echelon basis built by gcd insertion.
///
/// Each inserted generator is numbered. When history tracking is on, every
/// basis vector carries its expression in the generators, and generators
/// that reduce to zero record a relation; the recorded relations form a
/// basis of the relation module.
#[derive(Debug, Clone)]
pub struct EchelonLattice {
    dim: usize,
    pivots: BTreeMap<usize, usize>,
    basis: Vec<SparseVec>,
    history: Option<Vec<SparseVec>>,
    relations: Vec<SparseVec>,
    generators: usize,
}

impl EchelonLattice {
    pub fn new(dim: usize, track_history: bool) -> Self {
        EchelonLattice {
            dim,
            pivots: BTreeMap::new(),
            basis: Vec::new(),
            history: track_history.then(Vec::new),
            relations: Vec::new(),
            generators: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Basis vectors in increasing pivot order.
    pub fn basis(&self) -> Vec<&SparseVec> {
        self.pivots.values().map(|&b| &self.basis[b]).collect()
    }

    /// Expressions of generator relations; empty unless history is tracked.
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    /// Inserts a generator and returns its number.
    pub fn insert(&mut self, v: &SparseVec) -> Result<usize, LinalgError> {
        if let Some(&(i, _)) = v.entries.last() {
            if i >= self.dim {
                return Err(LinalgError::Dimension {
                    expected: self.dim,
                    found: i + 1,
                });
            }
        }
        let g = self.generators;
        self.generators += 1;
        let track = self.history.is_some();
        let mut v = v.clone();
        let mut h = if track { SparseVec::unit(g) } else { SparseVec::new() };
        loop {
            let Some((p, e)) = v.lead() else {
                if track {
                    self.relations.push(h);
                }
                return Ok(g);
            };
            match self.pivots.get(&p).copied() {
                None => {
                    if e < 0 {
                        v = v.combine(-1, &SparseVec::new(), 0)?;
                        h = h.combine(-1, &SparseVec::new(), 0)?;
                    }
                    let idx = self.basis.len();
                    self.basis.push(v);
                    if let Some(hist) = self.history.as_mut() {
                        hist.push(h);
                    }
                    self.pivots.insert(p, idx);
                    self.reduce_above(idx)?;
                    return Ok(g);
                }
                Some(bi) => {
                    let b = &self.basis[bi];
                    let d = b.lead().map(|x| x.1).unwrap_or(1);
                    if e % d == 0 {
                        let q = e / d;
                        v = v.combine(1, b, -q)?;
                        if let Some(hist) = self.history.as_ref() {
                            h = h.combine(1, &hist[bi], -q)?;
                        }
                    } else {
                        let (gcd, s, t) = ext_gcd(d, e)?;
                        let (eg, dg) = (e / gcd, d / gcd);
                        let nb = b.combine(s, &v, t)?;
                        let nv = b.combine(eg, &v, -dg)?;
                        if let Some(hist) = self.history.as_mut() {
                            let hb = &hist[bi];
                            let nhb = hb.combine(s, &h, t)?;
                            let nh = hb.combine(eg, &h, -dg)?;
                            hist[bi] = nhb;
                            h = nh;
                        }
                        self.basis[bi] = nb;
                        self.reduce_above(bi)?;
                        v = nv;
                    }
                }
            }
        }
    }

    /// Reduces the entries of earlier basis vectors in the pivot column of
    /// `bi` into `[0, d)`; keeps coefficients from growing.
    fn reduce_above(&mut self, bi: usize) -> Result<(), LinalgError> {
        let Some((p, d)) = self.basis[bi].lead() else {
            return Ok(());
        };
        let earlier: Vec<usize> = self.pivots.range(..p).map(|(_, &o)| o).collect();
        for oi in earlier {
            let k = self.basis[oi].get(p).div_euclid(d);
            if k == 0 {
                continue;
            }
            self.basis[oi] = self.basis[oi].combine(1, &self.basis[bi], -k)?;
            if let Some(hist) = self.history.as_mut() {
                hist[oi] = hist[oi].combine(1, &hist[bi], -k)?;
            }
        }
        Ok(())
    }

    /// Canonical remainder of `v` modulo the lattice, and the basis
    /// coefficients (keyed by basis slot) subtracted to reach it.
    fn reduce_dense(&self, v: &mut [i64]) -> Result<Vec<(usize, i64)>, LinalgError> {
        let mut coeffs = Vec::new();
        for (&p, &bi) in &self.pivots {
            let b = &self.basis[bi];
            let d = b.entries[0].1;
            let q = v[p].div_euclid(d);
            if q != 0 {
                for &(i, x) in &b.entries {
                    v[i] = x
                        .checked_mul(q)
                        .and_then(|y| v[i].checked_sub(y))
                        .ok_or(LinalgError::Overflow)?;
                }
                coeffs.push((bi, q));
            }
        }
        Ok(coeffs)
    }

    /// Canonical representative of `v + L`: equal for `v`, `w` iff `v - w ∈ L`.
    pub fn remainder(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut w = v.to_vec();
        self.reduce_dense(&mut w)?;
        Ok(w)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, LinalgError> {
        Ok(self.remainder(v)?.iter().all(|&x| x == 0))
    }

    /// Expresses `v` in the inserted generators, if `v` lies in the lattice.
    /// Requires history tracking.
    pub fn solve(&self, v: &[i64]) -> Result<Option<SparseVec>, LinalgError> {
        let hist = self
            .history
            .as_ref()
            .expect("solve requires a lattice built with history tracking");
        if v.len() != self.dim {
            return Err(LinalgError::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut w = v.to_vec();
        let coeffs = self.reduce_dense(&mut w)?;
        if w.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (bi, q) in coeffs {
            for &(g, x) in &hist[bi].entries {
                let e = acc.entry(g).or_insert(0);
                *e = x
                    .checked_mul(q)
                    .and_then(|y| e.checked_add(y))
                    .ok_or(LinalgError::Overflow)?;
            }
        }
        Ok(Some(SparseVec::from_pairs(acc)?))
    }

    /// Coordinates of `v` in the echelon basis (ordered by pivot), if
    /// `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Result<Option<Vec<i64>>, LinalgError> {
        let mut w = v.to_vec();
        let coeffs: HashMap<usize, i64> = self.reduce_dense(&mut w)?.into_iter().collect();
        if w.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(
            self.pivots
                .values()
                .map(|bi| coeffs.get(bi).copied().unwrap_or(0))
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_combo(gens: &[Vec<i64>], coeffs: &SparseVec, dim: usize) -> Vec<i64> {
        let mut out = vec![0; dim];
        for &(g, c) in coeffs.entries() {
            for i in 0..dim {
                out[i] += c * gens[g][i];
            }
        }
        out
    }

    #[test]
    fn gcd_insertion_and_remainders() {
        let mut l = EchelonLattice::new(2, true);
        l.insert(&SparseVec::from_dense(&[4, 0])).unwrap();
        l.insert(&SparseVec::from_dense(&[6, 0])).unwrap();
        l.insert(&SparseVec::from_dense(&[0, 3])).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.remainder(&[5, 7]).unwrap(), vec![1, 1]);
        assert_eq!(l.remainder(&[-1, -1]).unwrap(), vec![1, 2]);
        assert_eq!(l.relations().len(), 1);
    }

    proptest! {
        #[test]
        fn solve_and_relations(gens in proptest::collection::vec(proptest::collection::vec(-5i64..6, 4), 1..7),
                               target in proptest::collection::vec(-3i64..4, 7)) {
            let dim = 4;
            let mut l = EchelonLattice::new(dim, true);
            for g in &gens {
                l.insert(&SparseVec::from_dense(g)).unwrap();
            }
            for r in l.relations() {
                prop_assert!(dense_combo(&gens, r, dim).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(l.rank() + l.relations().len(), gens.len());
            // a vector known to be in the lattice
            let mut v = vec![0; dim];
            for (k, g) in gens.iter().enumerate() {
                for i in 0..dim { v[i] += target[k] * g[i]; }
            }
            let sol = l.solve(&v).unwrap().expect("member must be solvable");
            prop_assert_eq!(dense_combo(&gens, &sol, dim), v.clone());
            prop_assert!(l.contains(&v).unwrap());
            // remainders are canonical modulo the lattice
            let shifted: Vec<i64> = v.iter().zip(&target).map(|(a, b)| a + b).collect();
            prop_assert_eq!(l.remainder(&shifted).unwrap(), l.remainder(&target[..dim]).unwrap());
        }
    }
}
