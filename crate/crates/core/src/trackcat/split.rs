use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{LinearExtension, TrackError, TrackExtension};
use crate::catcore::{AbGroupPresentation, CategoryBuilder, CoeffMatrix, FinCategory, MorId, NaturalSystem};
use crate::linalg::IntMatrix;
use crate::nilgroup::{Nil2Element, Nil2Hom};
use crate::report::Report;

/// Finite piece of the integer-matrix category used as a cohomology base:
/// objects `0..=max_rank`, all zero matrices and `±I` on positive ranks.
///
/// Morphism ids are `+I{n}`, `-I{n}` and `0:{n}>{m}`; the identity of the
/// object `0` is `0:0>0`.
#[derive(Debug, Clone)]
pub struct MatrixCategory {
    max_rank: usize,
    category: FinCategory,
    matrices: Vec<IntMatrix>,
    lookup: HashMap<IntMatrix, MorId>,
}

impl MatrixCategory {
    pub fn new(max_rank: usize) -> Self {
        let mut named: Vec<(String, usize, usize, IntMatrix)> = Vec::new();
        for n in 0..=max_rank {
            for m in 0..=max_rank {
                named.push((format!("0:{n}>{m}"), n, m, IntMatrix::zeros(m, n)));
            }
            if n > 0 {
                named.push((format!("+I{n}"), n, n, IntMatrix::identity(n)));
                named.push((format!("-I{n}"), n, n, IntMatrix::identity(n).neg()));
            }
        }
        let mut b = CategoryBuilder::new();
        for n in 0..=max_rank {
            b.object(&n.to_string());
            let id = if n == 0 { "0:0>0".to_string() } else { format!("+I{n}") };
            b.identity(&n.to_string(), &id);
        }
        for (id, n, m, _) in &named {
            b.morphism(id, &n.to_string(), &m.to_string());
        }
        let by_matrix: HashMap<IntMatrix, &str> =
            named.iter().map(|(id, _, _, a)| (a.clone(), id.as_str())).collect();
        for (gid, _, gm, ga) in &named {
            for (fid, fn_, _, fa) in &named {
                if gm == fn_ {
                    let prod = fa.checked_mul(ga).expect("shapes agree");
                    b.composite(gid, fid, by_matrix[&prod]);
                }
            }
        }
        let category = b.build().expect("closed under composition");
        let mut matrices = vec![IntMatrix::zeros(0, 0); category.morphism_count()];
        for (id, _, _, a) in &named {
            matrices[category.find_morphism(id).expect("built")] = a.clone();
        }
        let lookup = matrices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        MatrixCategory {
            max_rank,
            category,
            matrices,
            lookup,
        }
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn matrix(&self, f: MorId) -> &IntMatrix {
        &self.matrices[f]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn find(&self, a: &IntMatrix) -> Option<MorId> {
        self.lookup.get(a).copied()
    }

    /// Checks that `n ∨ m = n + m` is a biproduct: `p_e i_e = 1`,
    /// `p_e i_{e'} = 0` and `i_1 p_1 + i_2 p_2 = 1`.
    pub fn check_biproducts(max_rank: usize, report: &mut Report) {
        let chk = report.check("n + m is a biproduct in the integer-matrix category");
        for n in 0..=max_rank {
            for m in 0..=max_rank.saturating_sub(n) {
                let (i1, i2, p1, p2) = biproduct_matrices(n, m);
                let mut bad = Vec::new();
                let eq = |a: &IntMatrix, b: &IntMatrix| a == b;
                if !eq(&p1.checked_mul(&i1).expect("shape"), &IntMatrix::identity(n)) {
                    bad.push("p1 i1");
                }
                if !eq(&p2.checked_mul(&i2).expect("shape"), &IntMatrix::identity(m)) {
                    bad.push("p2 i2");
                }
                if !p1.checked_mul(&i2).expect("shape").is_zero() || !p2.checked_mul(&i1).expect("shape").is_zero() {
                    bad.push("cross terms");
                }
                let sum = i1
                    .checked_mul(&p1)
                    .and_then(|a| a.checked_add(&i2.checked_mul(&p2)?))
                    .expect("shape");
                if !sum.is_identity() {
                    bad.push("i1 p1 + i2 p2");
                }
                chk.record((!bad.is_empty()).then(|| json!({"n": n, "m": m, "failed": bad})));
            }
        }
    }
}

fn biproduct_matrices(n: usize, m: usize) -> (IntMatrix, IntMatrix, IntMatrix, IntMatrix) {
    let mut i1 = IntMatrix::zeros(n + m, n);
    let mut i2 = IntMatrix::zeros(n + m, m);
    for k in 0..n {
        i1.set(k, k, 1);
    }
    for k in 0..m {
        i2.set(n + k, k, 1);
    }
    let p1 = i1.transpose();
    let p2 = i2.transpose();
    (i1, i2, p1, p2)
}

/// Track `source ⇒ target` of the split model, with coordinate in
/// `M^{m×n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitTrack {
    pub source: Nil2Hom,
    pub target: Nil2Hom,
    pub coord: CoeffMatrix,
}

/// Maps are nil₂ homomorphisms `F_n → F_m`, tracks `u ⇒ v` exist when
/// `ab u = ab v` and are matrices over `M`.
///
/// The cohomology base is the [`MatrixCategory`] up to `max_rank`; maps
/// whose abelianization lies outside it have no projection.
#[derive(Debug, Clone)]
pub struct SplitModel {
    coeff: Arc<AbGroupPresentation>,
    base: MatrixCategory,
    system: NaturalSystem,
}

impl SplitModel {
    pub fn new(coeff: AbGroupPresentation, max_rank: usize) -> Self {
        let base = MatrixCategory::new(max_rank);
        let system = NaturalSystem::bimodule(coeff.clone(), base.matrices().to_vec());
        SplitModel {
            coeff: Arc::new(coeff),
            base,
            system,
        }
    }

    pub fn coeff(&self) -> &Arc<AbGroupPresentation> {
        &self.coeff
    }

    pub fn max_rank(&self) -> usize {
        self.base.max_rank()
    }

    pub fn truncation(&self) -> &MatrixCategory {
        &self.base
    }

    /// `Track(f, g)` is inhabited.
    pub fn tracked(&self, f: &Nil2Hom, g: &Nil2Hom) -> bool {
        f.source() == g.source()
            && f.target() == g.target()
            && f.abelianize().ok() == g.abelianize().ok()
    }

    pub fn track(&self, source: Nil2Hom, target: Nil2Hom, coord: CoeffMatrix) -> Result<SplitTrack, TrackError> {
        if !self.tracked(&source, &target) {
            return Err(TrackError::NoTrack(format!(
                "{:?} and {:?}",
                source.to_strings(),
                target.to_strings()
            )));
        }
        if coord.rows() != source.target() || coord.cols() != source.source() || coord.coeff() != &self.coeff {
            return Err(TrackError::TypeMismatch {
                expected: format!("{}x{} matrix over {}", source.target(), source.source(), self.coeff),
                found: format!("{}x{} matrix over {}", coord.rows(), coord.cols(), coord.coeff()),
            });
        }
        Ok(SplitTrack { source, target, coord })
    }

    pub fn zero_coord(&self, f: &Nil2Hom) -> CoeffMatrix {
        CoeffMatrix::zeros(f.target(), f.source(), self.coeff.clone())
    }

    /// Sum track `(h_1, h_2): (u_1, u_2) ⇒ (v_1, v_2)` out of `n_1 ∨ n_2`.
    pub fn copair_tracks(&self, h1: &SplitTrack, h2: &SplitTrack) -> Result<SplitTrack, TrackError> {
        let source = h1.source.copair(&h2.source)?;
        let target = h1.target.copair(&h2.target)?;
        let mut c = CoeffMatrix::zeros(source.target(), source.source(), self.coeff.clone());
        c.write_block(0, 0, &h1.coord);
        c.write_block(0, h1.coord.cols(), &h2.coord);
        self.track(source, target, c)
    }

    /// `h_1 ∨ h_2`.
    pub fn wedge_tracks(&self, h1: &SplitTrack, h2: &SplitTrack) -> SplitTrack {
        SplitTrack {
            source: h1.source.wedge(&h2.source),
            target: h1.target.wedge(&h2.target),
            coord: h1.coord.direct_sum(&h2.coord),
        }
    }

    /// Random element of `M^{rows×cols}`; free coordinates in `-bound..=bound`.
    pub fn random_coord(&self, rows: usize, cols: usize, rng: &mut dyn rand::RngCore, bound: i64) -> CoeffMatrix {
        let n = rows * cols;
        let data = (0..self.coeff.dim())
            .flat_map(|k| {
                let d = self.coeff.modulus(k);
                (0..n).map(move |_| d).collect::<Vec<_>>()
            })
            .map(|d| if d == 0 { rng.gen_range(-bound..=bound) } else { rng.gen_range(0..d) })
            .collect();
        CoeffMatrix::from_coords(rows, cols, self.coeff.clone(), data).expect("length")
    }

    /// Lift of a signed identity or zero matrix with every image twisted by
    /// a random central element.
    fn twisted_lift(&self, f: MorId, rng: Option<&mut dyn rand::RngCore>) -> Nil2Hom {
        let a = self.base.matrix(f);
        let (m, n) = (a.rows(), a.cols());
        let mut rng = rng;
        let images = (0..n)
            .map(|j| {
                let gen: Vec<i64> = (0..m).map(|i| a.get(i, j)).collect();
                let ncomm = m * m.saturating_sub(1) / 2;
                let comm: Vec<i64> = match rng.as_deref_mut() {
                    Some(r) => (0..ncomm).map(|_| r.gen_range(-2..=2)).collect(),
                    None => vec![0; ncomm],
                };
                Nil2Element::from_i64(m, &gen, &comm).expect("rank")
            })
            .collect();
        Nil2Hom::new(n, m, images).expect("ranks")
    }

    /// Enumerates letter maps `F_n → F_m` for `n, m ≤ max_rank`.
    pub fn letter_maps(max_rank: usize) -> Vec<Nil2Hom> {
        let mut out = Vec::new();
        for n in 0..=max_rank {
            for m in 0..=max_rank {
                let count = (m + 1).pow(n as u32);
                for mut code in 0..count {
                    let letters: Vec<Option<usize>> = (0..n)
                        .map(|_| {
                            let d = code % (m + 1);
                            code /= m + 1;
                            d.checked_sub(1)
                        })
                        .collect();
                    out.push(Nil2Hom::letter_map(n, m, &letters).expect("in range"));
                }
            }
        }
        out
    }
}

impl SplitModel {
    /// Sampled check of the track-category and linear-extension axioms:
    /// random lifts of every base morphism plus random twisted maps.
    pub fn verify(&self, seed: u64, samples: usize) -> Result<Report, TrackError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = Report::new(format!("linear track extension axioms: split model over {}", self.coeff)).with_seed(seed);
        let n = self.base.category().morphism_count();
        let maps: Vec<Nil2Hom> = (0..n).map(|f| self.random_lift(f, &mut rng)).collect();
        {
            let chk = r.check("p is a functor onto the base");
            for f in &maps {
                for g in &maps {
                    let Ok(fg) = self.compose(f, g) else { continue };
                    let (pf, pg) = (self.project(f).expect("lift"), self.project(g).expect("lift"));
                    let ok = self.base.category().compose(pf, pg) == self.project(&fg);
                    chk.record((!ok).then(|| json!({"f": f.to_strings(), "g": g.to_strings()})));
                }
            }
        }
        {
            let chk = r.check("vertical composition is associative and unital");
            for _ in 0..samples {
                let f = &maps[rng.gen_range(0..n)];
                let t: Vec<SplitTrack> = (0..3)
                    .map(|_| self.sigma(f, self.random_coord(f.target(), f.source(), &mut rng, 5).coords()))
                    .collect::<Result<_, _>>()?;
                let lhs = self.vcomp(&t[2], &self.vcomp(&t[1], &t[0])?)?;
                let rhs = self.vcomp(&self.vcomp(&t[2], &t[1])?, &t[0])?;
                let id = self.identity_track(f);
                let unit = self.vcomp(&id, &t[0])? == t[0] && self.vcomp(&t[0], &id)? == t[0];
                let inv = self.vcomp(&self.inverse(&t[0]), &t[0])? == id;
                chk.record((lhs != rhs || !unit || !inv).then(|| json!({"map": f.to_strings()})));
            }
        }
        {
            let chk = r.check("interchange: (g1)_* α □ f0^* β = f1^* β □ (g0)_* α");
            for _ in 0..samples {
                let f0 = &maps[rng.gen_range(0..n)];
                let gs: Vec<&Nil2Hom> = maps.iter().filter(|g| g.source() == f0.target()).collect();
                let g0 = gs[rng.gen_range(0..gs.len())];
                let f1 = self.random_lift(self.project(f0).expect("lift"), &mut rng);
                let g1 = self.random_lift(self.project(g0).expect("lift"), &mut rng);
                let alpha = self.track(f0.clone(), f1.clone(), self.random_coord(f0.target(), f0.source(), &mut rng, 5))?;
                let beta = self.track(g0.clone(), g1.clone(), self.random_coord(g0.target(), g0.source(), &mut rng, 5))?;
                let lhs = self.vcomp(&self.whisker_left(&g1, &alpha)?, &self.whisker_right(&beta, f0)?)?;
                let rhs = self.vcomp(&self.whisker_right(&beta, &f1)?, &self.whisker_left(g0, &alpha)?)?;
                chk.record((lhs != rhs).then(|| json!({"alpha": self.describe_track(&alpha), "beta": self.describe_track(&beta)})));
            }
        }
        super::check_sigma_axioms(self, &maps, &mut r)?;
        {
            let chk = r.check("zero object is strict");
            for m in 0..=self.max_rank() {
                for (a, b) in [(0, m), (m, 0)] {
                    let z = Nil2Hom::zero(a, b);
                    let ok = self.zero_coord(&z).coeff().dim() == 0 || self.zero_coord(&z).coords().is_empty();
                    chk.record((!ok).then(|| json!({"source": a, "target": b})));
                }
            }
        }
        Ok(r)
    }

    /// Sampled check that `n ∨ m` splits hom-groupoids and that sum tracks
    /// restrict to their components along `(r_e)_* (i_e)^*`.
    pub fn verify_strict_coproducts(&self, seed: u64, samples: usize) -> Result<Report, TrackError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = Report::new(format!("strict sums: split model over {}", self.coeff)).with_seed(seed);
        let top = self.max_rank();
        {
            let chk = r.check("Ψ is an isomorphism of hom-groupoids");
            for _ in 0..samples {
                let n1 = rng.gen_range(0..=top);
                let n2 = rng.gen_range(0..=top - n1);
                let k = rng.gen_range(0..=top);
                let mk = |rng: &mut ChaCha8Rng, n: usize| -> Result<SplitTrack, TrackError> {
                    let u = random_hom(n, k, rng);
                    let v = twist_centrally(&u, rng);
                    self.track(u, v, self.random_coord(k, n, rng, 5))
                };
                let h1 = mk(&mut rng, n1)?;
                let h2 = mk(&mut rng, n2)?;
                let h = self.copair_tracks(&h1, &h2)?;
                let i1 = Nil2Hom::letter_map(n1, n1 + n2, &(0..n1).map(Some).collect::<Vec<_>>())?;
                let i2 = Nil2Hom::letter_map(n2, n1 + n2, &(n1..n1 + n2).map(Some).collect::<Vec<_>>())?;
                let ok = self.whisker_right(&h, &i1)? == h1 && self.whisker_right(&h, &i2)? == h2;
                chk.record((!ok).then(|| json!({"n1": n1, "n2": n2, "k": k})));
            }
        }
        {
            let chk = r.check("sum tracks restrict to their components");
            for _ in 0..samples {
                let n1 = rng.gen_range(1..=top);
                let n2 = rng.gen_range(0..=top - n1);
                let hs: Vec<SplitTrack> = [n1, n2]
                    .iter()
                    .map(|&n| {
                        let u = random_hom(n, n, &mut rng);
                        let v = twist_centrally(&u, &mut rng);
                        self.track(u, v, self.random_coord(n, n, &mut rng, 5))
                    })
                    .collect::<Result<_, _>>()?;
                let h = self.wedge_tracks(&hs[0], &hs[1]);
                let ns = [n1, n2];
                let offs = [0, n1];
                for e in 0..2 {
                    for g in 0..2 {
                        let inc = Nil2Hom::letter_map(ns[e], n1 + n2, &(offs[e]..offs[e] + ns[e]).map(Some).collect::<Vec<_>>())?;
                        let ret = Nil2Hom::letter_map(
                            n1 + n2,
                            ns[g],
                            &(0..n1 + n2)
                                .map(|i| (i >= offs[g] && i < offs[g] + ns[g]).then(|| i - offs[g]))
                                .collect::<Vec<_>>(),
                        )?;
                        let got = self.whisker_left(&ret, &self.whisker_right(&h, &inc)?)?;
                        let ok = if e == g { got == hs[e] } else { got.coord.is_zero() && got.source == got.target };
                        chk.record((!ok).then(|| json!({"n1": n1, "n2": n2, "summand": e, "restricted_to": g})));
                    }
                }
            }
        }
        Ok(r)
    }
}

/// Random nil₂ homomorphism with small exponents.
pub fn random_hom(n: usize, m: usize, rng: &mut dyn rand::RngCore) -> Nil2Hom {
    let ncomm = m * m.saturating_sub(1) / 2;
    let images = (0..n)
        .map(|_| {
            let gen: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
            let comm: Vec<i64> = (0..ncomm).map(|_| rng.gen_range(-2..=2)).collect();
            Nil2Element::from_i64(m, &gen, &comm).expect("rank")
        })
        .collect();
    Nil2Hom::new(n, m, images).expect("ranks")
}

/// `u` with every image multiplied by a random central element; same
/// abelianization.
pub fn twist_centrally(u: &Nil2Hom, rng: &mut dyn rand::RngCore) -> Nil2Hom {
    let m = u.target();
    let ncomm = m * m.saturating_sub(1) / 2;
    let images = u
        .images()
        .iter()
        .map(|im| {
            let c: Vec<i64> = (0..ncomm).map(|_| rng.gen_range(-2..=2)).collect();
            let z = Nil2Element::from_i64(m, &vec![0; m], &c).expect("rank");
            im.mul(&z).expect("rank")
        })
        .collect();
    Nil2Hom::new(u.source(), m, images).expect("ranks")
}

impl TrackExtension for SplitModel {
    type Map = Nil2Hom;
    type Track = SplitTrack;

    fn compose(&self, f: &Nil2Hom, g: &Nil2Hom) -> Result<Nil2Hom, TrackError> {
        f.compose(g)
            .map_err(|e| TrackError::NotComposable(e.to_string()))
    }

    fn source_of(&self, t: &SplitTrack) -> Nil2Hom {
        t.source.clone()
    }

    fn target_of(&self, t: &SplitTrack) -> Nil2Hom {
        t.target.clone()
    }

    fn identity_track(&self, f: &Nil2Hom) -> SplitTrack {
        SplitTrack {
            source: f.clone(),
            target: f.clone(),
            coord: self.zero_coord(f),
        }
    }

    fn vcomp(&self, second: &SplitTrack, first: &SplitTrack) -> Result<SplitTrack, TrackError> {
        if first.target != second.source {
            return Err(TrackError::TypeMismatch {
                expected: format!("{:?}", first.target.to_strings()),
                found: format!("{:?}", second.source.to_strings()),
            });
        }
        Ok(SplitTrack {
            source: first.source.clone(),
            target: second.target.clone(),
            coord: first.coord.add(&second.coord)?,
        })
    }

    fn inverse(&self, t: &SplitTrack) -> SplitTrack {
        SplitTrack {
            source: t.target.clone(),
            target: t.source.clone(),
            coord: t.coord.neg(),
        }
    }

    fn whisker_left(&self, k: &Nil2Hom, t: &SplitTrack) -> Result<SplitTrack, TrackError> {
        Ok(SplitTrack {
            source: self.compose(k, &t.source)?,
            target: self.compose(k, &t.target)?,
            coord: t.coord.left_mul(&k.abelianize()?)?,
        })
    }

    fn whisker_right(&self, t: &SplitTrack, h: &Nil2Hom) -> Result<SplitTrack, TrackError> {
        Ok(SplitTrack {
            source: self.compose(&t.source, h)?,
            target: self.compose(&t.target, h)?,
            coord: t.coord.right_mul(&h.abelianize()?)?,
        })
    }

    fn describe_map(&self, f: &Nil2Hom) -> Value {
        json!({"source": f.source(), "target": f.target(), "images": f.to_strings()})
    }

    fn describe_track(&self, t: &SplitTrack) -> Value {
        json!({
            "source": self.describe_map(&t.source),
            "target": self.describe_map(&t.target),
            "coord": t.coord,
        })
    }
}

impl LinearExtension for SplitModel {
    fn base(&self) -> &FinCategory {
        self.base.category()
    }

    fn system(&self) -> &NaturalSystem {
        &self.system
    }

    fn project(&self, f: &Nil2Hom) -> Option<MorId> {
        if f.source() > self.max_rank() || f.target() > self.max_rank() {
            return None;
        }
        self.base.find(&f.abelianize().ok()?)
    }

    fn canonical_lift(&self, f: MorId) -> Nil2Hom {
        self.twisted_lift(f, None)
    }

    fn random_lift(&self, f: MorId, rng: &mut dyn rand::RngCore) -> Nil2Hom {
        self.twisted_lift(f, Some(rng))
    }

    fn some_track(&self, f: &Nil2Hom, g: &Nil2Hom) -> Option<SplitTrack> {
        self.tracked(f, g).then(|| SplitTrack {
            source: f.clone(),
            target: g.clone(),
            coord: self.zero_coord(f),
        })
    }

    fn sigma(&self, f: &Nil2Hom, a: &[i64]) -> Result<SplitTrack, TrackError> {
        let coord = CoeffMatrix::from_coords(f.target(), f.source(), self.coeff.clone(), a.to_vec())?;
        Ok(SplitTrack {
            source: f.clone(),
            target: f.clone(),
            coord,
        })
    }

    fn sigma_inv(&self, t: &SplitTrack) -> Result<Vec<i64>, TrackError> {
        if t.source != t.target {
            return Err(TrackError::NotSelfTrack(self.describe_track(t).to_string()));
        }
        Ok(t.coord.coords().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_has_expected_size() {
        let t = MatrixCategory::new(3);
        assert_eq!(t.category().morphism_count(), 22);
        assert!(t.category().validate().passed());
        let zero = t.category().find_morphism("0:0>0").unwrap();
        assert!(t.category().is_identity(zero));
    }

    #[test]
    fn verifiers_pass() {
        for g in ["Z/2", "Z/4", "Z+Z/2", "0"] {
            let m = SplitModel::new(g.parse().unwrap(), 3);
            let r = m.verify(7, 40).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            let r = m.verify_strict_coproducts(7, 40).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
        let mut r = Report::new("biproducts");
        MatrixCategory::check_biproducts(3, &mut r);
        assert!(r.passed());
    }

    #[test]
    fn letter_maps_count() {
        assert_eq!(SplitModel::letter_maps(2).len(), 23);
    }

    #[test]
    fn whisker_by_power_scales() {
        let m = SplitModel::new("Z/4".parse().unwrap(), 1);
        let f = Nil2Hom::power(3);
        let t = m.sigma(&f, &[1]).unwrap();
        let w = m.whisker_left(&Nil2Hom::power(2), &t).unwrap();
        assert_eq!(w.coord.coords(), &[2]);
        assert_eq!(w.source, Nil2Hom::power(6));
    }

    #[test]
    fn random_lift_projects_back() {
        let m = SplitModel::new("Z+Z/2".parse().unwrap(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in 0..m.base().morphism_count() {
            let u = m.random_lift(f, &mut rng);
            assert_eq!(m.project(&u), Some(f));
            assert_eq!(m.project(&m.canonical_lift(f)), Some(f));
        }
    }

    #[test]
    fn sigma_axioms_on_samples() {
        let m = SplitModel::new("Z/4".parse().unwrap(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let maps: Vec<Nil2Hom> = (0..m.base().morphism_count())
            .map(|f| m.random_lift(f, &mut rng))
            .collect();
        let mut r = Report::new("split");
        super::super::check_sigma_axioms(&m, &maps, &mut r).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
