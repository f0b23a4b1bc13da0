//! Weak nil₂ cogroups in the split model.
//!
//! The object `X` of rank `r` carries the strict inclusion pseudofunctor
//! `α ↦ α ⊗ id_r` (generator `(e, j)` of `∨_n X` at index `e r + j`),
//! possibly reduced by a track family `ξ`. Reduction keeps the maps and
//! changes the compositors to
//!
//! `φ_{β,α} = ξ_{βα} - ξ_β Ã - B̃ ξ_α`
//!
//! where `Ã = ab(α) ⊗ I_r`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::GammaError;
use crate::catcore::{AbGroupPresentation, CoeffMatrix};
use crate::linalg::IntMatrix;
use crate::nilgroup::{Int, Nil2Element, Nil2Hom};
use crate::report::Report;
use crate::trackcat::SplitTrack;

/// `ab(α) ⊗ I_r`.
pub fn tilde(alpha: &Nil2Hom, r: usize) -> Result<IntMatrix, GammaError> {
    Ok(alpha.abelianize()?.kron(&IntMatrix::identity(r))?)
}

/// A coproduct-compatible track family `ξ_α: α ⊗ id ⇒ α ⊗ id`, seeded.
///
/// Column block `e` of `ξ_α` depends only on the image `w_e`: it is zero
/// when `w_e` is trivial or a generator, and otherwise a pseudo-random
/// matrix drawn from the seed and `w_e` with its unused generators
/// deleted, placed in the row blocks of the generators `w_e` uses. Hence
/// `ξ_{α ∨ β} = ξ_α ∨ ξ_β` and `ξ_{(α, β)} = (ξ_α, ξ_β)`.
#[derive(Debug, Clone)]
pub struct Twist {
    coeff: Arc<AbGroupPresentation>,
    rank: usize,
    /// Summands; the family is the sum of the seeded families.
    seeds: Vec<u64>,
    cache: Arc<Mutex<HashMap<Nil2Element, CoeffMatrix>>>,
}

impl PartialEq for Twist {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff && self.rank == other.rank && self.seeds == other.seeds
    }
}

impl Twist {
    pub fn none(coeff: Arc<AbGroupPresentation>, rank: usize) -> Self {
        Self::from_seeds(coeff, rank, Vec::new())
    }

    pub fn seeded(coeff: Arc<AbGroupPresentation>, rank: usize, seed: u64) -> Self {
        Self::from_seeds(coeff, rank, vec![seed])
    }

    fn from_seeds(coeff: Arc<AbGroupPresentation>, rank: usize, mut seeds: Vec<u64>) -> Self {
        seeds.sort_unstable();
        Twist {
            coeff,
            rank,
            seeds,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn is_trivial(&self) -> bool {
        self.seeds.is_empty() || self.coeff.is_trivial()
    }

    /// `(ξ' * ξ)_α = ξ'_α □ ξ_α`.
    pub fn star(&self, other: &Twist) -> Twist {
        let mut seeds = self.seeds.clone();
        seeds.extend_from_slice(&other.seeds);
        Self::from_seeds(self.coeff.clone(), self.rank, seeds)
    }

    /// Column block for the image `w`: a `(rank(w) r) × r` matrix.
    pub fn image_block(&self, w: &Nil2Element) -> CoeffMatrix {
        let r = self.rank;
        let m = w.rank();
        let zero = || CoeffMatrix::zeros(m * r, r, self.coeff.clone());
        if self.is_trivial() || is_letter(w) {
            return zero();
        }
        let (support, compressed) = compress(w);
        let key = compressed.clone();
        let block = {
            let cache = self.cache.lock().expect("twist cache");
            cache.get(&key).cloned()
        };
        let block = block.unwrap_or_else(|| {
            let b = self.draw(&compressed);
            self.cache.lock().expect("twist cache").insert(key, b.clone());
            b
        });
        let mut out = zero();
        for (k, &g) in support.iter().enumerate() {
            out.write_block(g * r, 0, &block.block(k * r, 0, r, r));
        }
        out
    }

    fn draw(&self, compressed: &Nil2Element) -> CoeffMatrix {
        let r = self.rank;
        let rows = compressed.rank() * r;
        let mut acc = CoeffMatrix::zeros(rows, r, self.coeff.clone());
        for &seed in &self.seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, compressed));
            let data: Vec<i64> = (0..self.coeff.dim())
                .flat_map(|k| {
                    let d = self.coeff.modulus(k);
                    (0..rows * r).map(move |_| d)
                })
                .map(|d| if d == 0 { rng.gen_range(-2..=2) } else { rng.gen_range(0..d) })
                .collect();
            let b = CoeffMatrix::from_coords(rows, r, self.coeff.clone(), data).expect("length");
            acc = acc.add(&b).expect("shape");
        }
        acc
    }

    /// `ξ_α`, an `(m r) × (n r)` matrix.
    pub fn family(&self, alpha: &Nil2Hom) -> CoeffMatrix {
        let r = self.rank;
        let mut out = CoeffMatrix::zeros(alpha.target() * r, alpha.source() * r, self.coeff.clone());
        if self.is_trivial() {
            return out;
        }
        for (e, w) in alpha.images().iter().enumerate() {
            out.write_block(0, e * r, &self.image_block(w));
        }
        out
    }
}

fn is_letter(w: &Nil2Element) -> bool {
    if w.comm_exp().iter().any(|c| !c.is_zero()) {
        return false;
    }
    let nz: Vec<&Int> = w.gen_exp().iter().filter(|a| !a.is_zero()).collect();
    nz.is_empty() || (nz.len() == 1 && *nz[0] == Int::ONE)
}

/// Generators used by `w`, and `w` rewritten over them in order.
fn compress(w: &Nil2Element) -> (Vec<usize>, Nil2Element) {
    let m = w.rank();
    let support: Vec<usize> = (0..m)
        .filter(|&i| !w.gen_exp()[i].is_zero() || (0..m).any(|j| j != i && !w.comm_at(i.min(j), i.max(j)).is_zero()))
        .collect();
    let k = support.len();
    let gen: Vec<Int> = support.iter().map(|&i| w.gen_exp()[i].clone()).collect();
    let mut comm = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            comm.push(w.comm_at(support[a], support[b]).clone());
        }
    }
    (support, Nil2Element::from_parts(k, gen, comm).expect("sizes"))
}

/// Stable 64-bit digest of a seed and an element (splitmix64 rounds).
fn mix(seed: u64, w: &Nil2Element) -> u64 {
    fn step(h: u64, x: u64) -> u64 {
        let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let mut h = step(seed, w.rank() as u64);
    for x in w.gen_exp().iter().chain(w.comm_exp()) {
        h = match x.to_i64() {
            Some(v) => step(h, v as u64),
            None => x.to_string().bytes().fold(step(h, u64::MAX), |h, b| step(h, b as u64)),
        };
    }
    h
}

/// A weak nil₂ cogroup `(X, F_X)` on the split-model object of rank `r`.
#[derive(Debug, Clone)]
pub struct WeakCogroup {
    rank: usize,
    twist: Twist,
    corrupted: Option<Arc<(Nil2Hom, Nil2Hom, CoeffMatrix)>>,
}

impl PartialEq for WeakCogroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.twist == other.twist
            && self.corrupted.as_deref() == other.corrupted.as_deref()
    }
}

impl WeakCogroup {
    /// The strict inclusion pseudofunctor: identity compositors.
    pub fn strict(coeff: Arc<AbGroupPresentation>, rank: usize) -> Self {
        WeakCogroup {
            rank,
            twist: Twist::none(coeff, rank),
            corrupted: None,
        }
    }

    /// The strict structure reduced by the seeded family.
    pub fn twisted(coeff: Arc<AbGroupPresentation>, rank: usize, seed: u64) -> Self {
        WeakCogroup {
            rank,
            twist: Twist::seeded(coeff, rank, seed),
            corrupted: None,
        }
    }

    /// `X = F_X(ℤ)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeff(&self) -> &Arc<AbGroupPresentation> {
        &self.twist.coeff
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// `F_X(n) = ∨_n X`.
    pub fn object(&self, n: usize) -> usize {
        n * self.rank
    }

    /// `F_X(α) = α ⊗ id_r`.
    pub fn map(&self, alpha: &Nil2Hom) -> Nil2Hom {
        alpha.substitute(self.rank)
    }

    pub fn tilde(&self, alpha: &Nil2Hom) -> Result<IntMatrix, GammaError> {
        tilde(alpha, self.rank)
    }

    /// `ξ_α`.
    pub fn xi(&self, alpha: &Nil2Hom) -> CoeffMatrix {
        self.twist.family(alpha)
    }

    /// Coordinate of `φ_{β,α}: F(β) F(α) ⇒ F(βα)`.
    pub fn compositor(&self, beta: &Nil2Hom, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        let ba = beta.compose(alpha)?;
        self.compositor_with(beta, alpha, &ba)
    }

    /// As [`compositor`](Self::compositor) with `βα` supplied.
    pub fn compositor_with(&self, beta: &Nil2Hom, alpha: &Nil2Hom, ba: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        let (b, a) = (self.hom_data(beta)?, self.hom_data(alpha)?);
        self.compositor_from(beta, alpha, &self.xi(ba), &b, &a)
    }

    /// `Ã` and `ξ_α`, the data compositors need.
    pub(crate) fn hom_data(&self, alpha: &Nil2Hom) -> Result<HomData, GammaError> {
        Ok(HomData {
            tilde: self.tilde(alpha)?,
            xi: self.xi(alpha),
        })
    }

    /// `φ_{β,α}` from `ξ_{βα}` and precomputed data of `β` and `α`.
    pub(crate) fn compositor_from(
        &self,
        beta: &Nil2Hom,
        alpha: &Nil2Hom,
        xi_ba: &CoeffMatrix,
        b: &HomData,
        a: &HomData,
    ) -> Result<CoeffMatrix, GammaError> {
        let mut c = if self.twist.is_trivial() {
            xi_ba.clone()
        } else {
            xi_ba.sub(&b.xi.right_mul(&a.tilde)?)?.sub(&a.xi.left_mul(&b.tilde)?)?
        };
        if let Some(bad) = &self.corrupted {
            if &bad.0 == beta && &bad.1 == alpha {
                c = c.add(&bad.2)?;
            }
        }
        Ok(c)
    }

    /// `φ_{β,α}` as a self-track of `F(βα)`.
    pub fn compositor_track(&self, beta: &Nil2Hom, alpha: &Nil2Hom) -> Result<SplitTrack, GammaError> {
        let ba = self.map(&beta.compose(alpha)?);
        Ok(SplitTrack {
            source: ba.clone(),
            target: ba,
            coord: self.compositor(beta, alpha)?,
        })
    }

    /// `φ_n: F(1_n) ⇒ 1`, the identity track: the structure is completely
    /// reduced.
    pub fn unitor(&self, n: usize) -> SplitTrack {
        let id = Nil2Hom::identity(self.object(n));
        SplitTrack {
            source: id.clone(),
            target: id,
            coord: CoeffMatrix::zeros(self.object(n), self.object(n), self.coeff().clone()),
        }
    }

    /// `(F^ξ, t_ξ)`: the reduction by the seeded family `ξ`. The
    /// transformation `t_ξ: F → F^ξ` has identity components and tracks
    /// `ξ_α`.
    pub fn reduce(&self, seed: u64) -> (WeakCogroup, Reduction) {
        let xi = Twist::seeded(self.coeff().clone(), self.rank, seed);
        let target = WeakCogroup {
            rank: self.rank,
            twist: self.twist.star(&xi),
            corrupted: self.corrupted.clone(),
        };
        (
            target.clone(),
            Reduction {
                source: self.clone(),
                target,
                xi,
            },
        )
    }

    /// A copy with `d` added to `φ_{β,α}`.
    pub fn with_corrupted_compositor(&self, beta: &Nil2Hom, alpha: &Nil2Hom, d: CoeffMatrix) -> Self {
        WeakCogroup {
            corrupted: Some(Arc::new((beta.clone(), alpha.clone(), d))),
            ..self.clone()
        }
    }
}

/// `Ã` and `ξ_α` for one hom.
#[derive(Debug, Clone)]
pub(crate) struct HomData {
    pub tilde: IntMatrix,
    pub xi: CoeffMatrix,
}

/// The transformation `t_ξ: F → F^ξ` of a reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub source: WeakCogroup,
    pub target: WeakCogroup,
    pub xi: Twist,
}

impl Reduction {
    /// Track `F(α) ⇒ F^ξ(α)` of the transformation, `ξ_α`.
    pub fn track(&self, alpha: &Nil2Hom) -> CoeffMatrix {
        self.xi.family(alpha)
    }

    /// `t_{ξ'} t_ξ = t_{ξ' * ξ}`: the tracks of the composite transformation
    /// are `ξ'_α □ ξ_α`.
    pub fn then(&self, next: &Reduction) -> Result<Reduction, GammaError> {
        if next.source != self.target {
            return Err(GammaError::Mismatch("reductions are not composable".into()));
        }
        Ok(Reduction {
            source: self.source.clone(),
            target: next.target.clone(),
            xi: next.xi.star(&self.xi),
        })
    }
}

fn hom_json(h: &Nil2Hom) -> serde_json::Value {
    json!(h.to_strings())
}

/// Pseudofunctor and coproduct conditions of `F` on all pairs and triples
/// of `homs` that compose.
pub fn verify_pseudofunctor(f: &WeakCogroup, homs: &[Nil2Hom]) -> Result<Report, GammaError> {
    let mut r = Report::new(format!("weak nil₂ cogroup structure on the rank-{} object", f.rank()));
    {
        let chk = r.check("unit: φ_{α,1} and φ_{1,α} are identity tracks, F(1) = 1");
        for a in homs {
            let i_src = Nil2Hom::identity(a.source());
            let i_tgt = Nil2Hom::identity(a.target());
            for c in [f.compositor(a, &i_src)?, f.compositor(&i_tgt, a)?] {
                chk.record((!c.is_zero()).then(|| json!({"map": hom_json(a), "compositor": c})));
            }
            chk.record((!f.map(&i_src).is_identity()).then(|| json!({"identity_of": a.source()})));
        }
    }
    {
        let chk = r.check("tracks: F preserves identity tracks and vertical composition");
        for a in homs {
            let m = f.map(a);
            // the theory is discrete, so the only track is 0^□ and F sends it to 0^□ on F(α)
            let ok = m.source() == f.object(a.source()) && m.target() == f.object(a.target());
            chk.record((!ok).then(|| json!({"map": hom_json(a)})));
        }
    }
    {
        let chk = r.check("associativity: φ_{γβ,α} □ (Fα)^* φ_{γ,β} = φ_{γ,βα} □ (Fγ)_* φ_{β,α}");
        for a in homs {
            for b in homs.iter().filter(|b| b.source() == a.target()) {
                let ba = b.compose(a)?;
                let phi_ba = f.compositor_with(b, a, &ba)?;
                let ta = f.tilde(a)?;
                for c in homs.iter().filter(|c| c.source() == b.target()) {
                    let cb = c.compose(b)?;
                    let lhs = f.compositor_with(&cb, a, &cb.compose(a)?)?.add(&f.compositor_with(c, b, &cb)?.right_mul(&ta)?)?;
                    let rhs = f.compositor_with(c, &ba, &c.compose(&ba)?)?.add(&phi_ba.left_mul(&f.tilde(c)?)?)?;
                    chk.record((lhs != rhs).then(|| {
                        json!({"triple": [hom_json(c), hom_json(b), hom_json(a)], "difference": lhs.sub(&rhs).expect("shape")})
                    }));
                }
            }
        }
    }
    {
        let chk = r.check("completely reduced: F(1) = 1 and every unitor is an identity track");
        for n in 0..=3 {
            let u = f.unitor(n);
            chk.record((!u.coord.is_zero() || !f.map(&Nil2Hom::identity(n)).is_identity()).then(|| json!({"object": n})));
        }
    }
    {
        let chk = r.check("ι_{n,m} = F(i_1) ∨ F(i_2) is an isomorphism");
        for n in 0..=2 {
            for m in 0..=2 {
                let i1 = Nil2Hom::letter_map(n, n + m, &(0..n).map(Some).collect::<Vec<_>>())?;
                let i2 = Nil2Hom::letter_map(m, n + m, &(n..n + m).map(Some).collect::<Vec<_>>())?;
                let iota = f.map(&i1).copair(&f.map(&i2))?;
                chk.record((!iota.is_identity()).then(|| json!({"n": n, "m": m})));
            }
        }
    }
    {
        let chk = r.check("φ_{g,(h,k)} ι = φ_{g,h} ∨ φ_{g,k}");
        for h in homs {
            for k in homs.iter().filter(|k| k.target() == h.target()) {
                let hk = h.copair(k)?;
                for g in homs.iter().filter(|g| g.source() == h.target()) {
                    let whole = f.compositor(g, &hk)?;
                    let left = f.compositor(g, h)?;
                    let right = f.compositor(g, k)?;
                    let ok = whole.block(0, 0, left.rows(), left.cols()) == left
                        && whole.block(0, left.cols(), right.rows(), right.cols()) == right;
                    chk.record((!ok).then(|| json!({"g": hom_json(g), "h": hom_json(h), "k": hom_json(k)})));
                }
            }
        }
    }
    {
        // all unitors are identities, so the unitor of n ∨ n is the copair of the unitors
        let chk = r.check("φ_{n∨n} = (φ_n, φ_n)");
        for n in 0..=1 {
            let u = f.unitor(n);
            let uu = f.unitor(2 * n);
            let ok = uu.coord == u.coord.direct_sum(&u.coord);
            chk.record((!ok).then(|| json!({"object": n})));
        }
    }
    {
        let chk = r.check("p F_X factors through ab");
        for a in homs {
            let ok = f.map(a).abelianize()? == f.tilde(a)?;
            chk.record((!ok).then(|| json!({"map": hom_json(a)})));
        }
    }
    Ok(r)
}

/// Composable samples for cogroup checks: letter maps of rank ≤ 2 plus
/// the structure maps and a few words.
pub fn sample_homs() -> Vec<Nil2Hom> {
    let mut out = crate::trackcat::SplitModel::letter_maps(2);
    for k in [-1, 0, 2, 3] {
        out.push(Nil2Hom::power(k));
    }
    out.push(Nil2Hom::alpha(2));
    for (s, t, im) in [
        (1, 2, vec!["x1^2 x2"]),
        (1, 2, vec!["x2 x1"]),
        (1, 2, vec!["[x1,x2]"]),
        (2, 1, vec!["x1^2", "x1^-1"]),
        (2, 2, vec!["x1 x2", "x2^-1"]),
        (2, 2, vec!["x2 x1^2", "x1 [x1,x2]"]),
    ] {
        out.push(Nil2Hom::parse(s, t, &im).expect("valid sample"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Arc<AbGroupPresentation> {
        Arc::new(AbGroupPresentation::cyclic(4))
    }

    #[test]
    fn twist_vanishes_on_letters() {
        let t = Twist::seeded(z4(), 1, 7);
        for h in crate::trackcat::SplitModel::letter_maps(2) {
            assert!(t.family(&h).is_zero());
        }
        assert!(!t.family(&Nil2Hom::power(2)).is_zero() || !t.family(&Nil2Hom::power(3)).is_zero());
    }

    #[test]
    fn twist_is_compatible_with_sums() {
        let t = Twist::seeded(z4(), 2, 11);
        let a = Nil2Hom::parse(1, 2, &["x1^2 x2"]).unwrap();
        let b = Nil2Hom::parse(1, 1, &["x1^3"]).unwrap();
        let w = a.wedge(&b);
        assert_eq!(t.family(&w), t.family(&a).direct_sum(&t.family(&b)));
    }

    #[test]
    fn strict_and_twisted_structures_verify() {
        let homs = sample_homs();
        for f in [WeakCogroup::strict(z4(), 1), WeakCogroup::twisted(z4(), 1, 5), WeakCogroup::twisted(z4(), 2, 9)] {
            let r = verify_pseudofunctor(&f, &homs).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn corrupted_compositor_breaks_associativity() {
        let f = WeakCogroup::twisted(z4(), 1, 5);
        let a = Nil2Hom::power(2);
        let b = Nil2Hom::power(3);
        let mut d = CoeffMatrix::zeros(1, 1, z4());
        d.set(0, 0, &[1]);
        let bad = f.with_corrupted_compositor(&b, &a, d);
        let r = verify_pseudofunctor(&bad, &sample_homs()).unwrap();
        let failing: Vec<&str> = r.failures().map(|c| c.statement.as_str()).collect();
        assert!(failing.iter().any(|s| s.starts_with("associativity")), "{failing:?}");
    }

    #[test]
    fn reductions_compose_by_star() {
        let f = WeakCogroup::strict(z4(), 1);
        let (f1, t1) = f.reduce(3);
        let (f2, t2) = f1.reduce(4);
        let t = t1.then(&t2).unwrap();
        assert_eq!(t.target, f2);
        let a = Nil2Hom::parse(1, 2, &["x1^2 x2^-1"]).unwrap();
        assert_eq!(t.track(&a), t1.track(&a).add(&t2.track(&a)).unwrap());
        let (same, _) = f.reduce(3);
        assert_eq!(same, f1);
        assert!(t1.then(&t1).is_err());
    }

    #[test]
    fn trivial_reduction_is_identity() {
        let f = WeakCogroup::strict(Arc::new(AbGroupPresentation::trivial()), 1);
        let (g, t) = f.reduce(1);
        let a = Nil2Hom::parse(1, 2, &["x1^2 x2"]).unwrap();
        assert!(t.track(&a).is_zero());
        assert!(g.compositor(&Nil2Hom::power(2), &Nil2Hom::power(3)).unwrap().is_zero());
    }
}
