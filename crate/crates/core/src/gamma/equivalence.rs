//! The functors `T` and `G` between the split model and its weak nil₂
//! cogroups, and homotopy determination on tables.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::verify::{verify_track_naturality, wedge_track};
use super::{interchange_track, sample_homs, verify_pseudofunctor, CanonicalGamma, GammaError, InterchangeStructure, WeakCogroup};
use crate::catcore::{AbGroupPresentation, CoeffMatrix};
use crate::nilgroup::{Nil2Element, Nil2Hom};
use crate::report::Report;
use crate::trackcat::{random_hom, twist_centrally, SplitModel, SplitTrack, SumKind, TableExtension, TrackExtension};

/// Which algebraic theory the cogroups are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    /// Abelian groups; maps are replaced by their canonical abelian lifts.
    Nil1,
    Nil2,
}

impl Theory {
    /// The abelian theory is only admitted without 2-torsion in `M`.
    pub fn admit(self, coeff: &AbGroupPresentation) -> Result<(), GammaError> {
        if self == Theory::Nil1 && coeff.has_two_torsion() {
            return Err(GammaError::TwoTorsion(coeff.to_string()));
        }
        Ok(())
    }

    /// `x_e ↦ x1^{a_1e} ... xm^{a_me}` for nil₁, `f` itself for nil₂.
    pub fn normalize(self, f: &Nil2Hom) -> Result<Nil2Hom, GammaError> {
        match self {
            Theory::Nil2 => Ok(f.clone()),
            Theory::Nil1 => {
                let a = f.abelianize()?;
                let m = f.target();
                let ncomm = m * m.saturating_sub(1) / 2;
                let images = (0..f.source())
                    .map(|j| Nil2Element::from_i64(m, &a.column(j), &vec![0; ncomm]))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Nil2Hom::new(f.source(), m, images)?)
            }
        }
    }
}

/// A coproduct-preserving pseudo natural transformation `F_X → F_Y` with
/// components `f_n = ∨_n f` and tracks `Γ_α`.
#[derive(Debug, Clone)]
pub struct PseudoNatTrans {
    pub gamma: CanonicalGamma,
}

impl PseudoNatTrans {
    pub fn component(&self, n: usize) -> Nil2Hom {
        self.gamma.base_map().wedge_power(n)
    }

    pub fn track(&self, alpha: &Nil2Hom) -> Result<SplitTrack, GammaError> {
        interchange_track(&self.gamma, alpha)
    }

    /// Unit, composition and coproduct conditions on pairs of `homs`.
    pub fn verify(&self, homs: &[Nil2Hom]) -> Result<Report, GammaError> {
        let g = &self.gamma;
        let mut r = Report::new(format!("pseudo natural transformation with evaluation {}", g.base_map()));
        {
            let chk = r.check("identity tracks at identities");
            for n in 0..=3 {
                let t = g.gamma(&Nil2Hom::identity(n))?;
                chk.record((!t.is_zero()).then(|| json!({"object": n})));
            }
        }
        let pairs: Vec<(Nil2Hom, Nil2Hom)> = homs
            .iter()
            .flat_map(|a| homs.iter().filter(|b| b.source() == a.target()).map(move |b| (a.clone(), b.clone())))
            .collect();
        r.merge(super::verify_property_gamma(g, &pairs)?);
        r.merge(super::verify_sum_formula(g, homs)?);
        Ok(r)
    }
}

/// A coproduct-preserving homotopy between pseudo natural transformations
/// with components `H_n = ∨_n s`.
#[derive(Debug, Clone)]
pub struct PseudoHomotopy {
    pub at_generator: SplitTrack,
}

impl PseudoHomotopy {
    pub fn component(&self, n: usize) -> SplitTrack {
        wedge_track(&self.at_generator, n)
    }

    /// Track naturality against `from` and `to` on `homs`, and
    /// `H_{n+m} = H_n ∨ H_m`.
    pub fn verify(&self, from: &PseudoNatTrans, to: &PseudoNatTrans, homs: &[Nil2Hom]) -> Result<Report, GammaError> {
        let mut r = verify_track_naturality(&from.gamma, &to.gamma, &self.at_generator, homs)?;
        let chk = r.check("H_{n ∨ m} = H_n ∨ H_m");
        for n in 0..=2 {
            for m in 0..=2 {
                let (a, b, ab) = (self.component(n), self.component(m), self.component(n + m));
                let ok = ab.coord == a.coord.direct_sum(&b.coord)
                    && ab.source == a.source.wedge(&b.source)
                    && ab.target == a.target.wedge(&b.target);
                chk.record((!ok).then(|| json!({"n": n, "m": m})));
            }
        }
        Ok(r)
    }
}

/// `T` (object ↦ weak cogroup, map ↦ canonical Γ-structure, track ↦
/// homotopy) and `G` (evaluation at ℤ) for the split model over `M`.
#[derive(Debug, Clone)]
pub struct GammaFunctorPair {
    coeff: Arc<AbGroupPresentation>,
    theory: Theory,
    structures: HashMap<usize, WeakCogroup>,
}

impl GammaFunctorPair {
    pub fn new(coeff: Arc<AbGroupPresentation>, theory: Theory) -> Result<Self, GammaError> {
        theory.admit(&coeff)?;
        Ok(GammaFunctorPair {
            coeff,
            theory,
            structures: HashMap::new(),
        })
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn coeff(&self) -> &Arc<AbGroupPresentation> {
        &self.coeff
    }

    /// Uses `f` as the cogroup structure of its object after checking it;
    /// a failing structure is rejected with its report.
    pub fn with_structure(mut self, f: WeakCogroup) -> Result<Self, GammaError> {
        let r = verify_pseudofunctor(&f, &sample_homs())?;
        if !r.passed() {
            return Err(GammaError::Rejected(Box::new(r)));
        }
        self.structures.insert(f.rank(), f);
        Ok(self)
    }

    /// `T(X)`: the chosen structure, by default the strict inclusion one.
    pub fn t_object(&self, rank: usize) -> WeakCogroup {
        self.structures
            .get(&rank)
            .cloned()
            .unwrap_or_else(|| WeakCogroup::strict(self.coeff.clone(), rank))
    }

    pub fn t_map(&self, f: &Nil2Hom) -> Result<PseudoNatTrans, GammaError> {
        let f = self.theory.normalize(f)?;
        Ok(PseudoNatTrans {
            gamma: CanonicalGamma::new(self.t_object(f.source()), self.t_object(f.target()), f)?,
        })
    }

    pub fn t_track(&self, s: &SplitTrack) -> Result<PseudoHomotopy, GammaError> {
        let model = SplitModel::new((*self.coeff).clone(), 0);
        let s = model.track(self.theory.normalize(&s.source)?, self.theory.normalize(&s.target)?, s.coord.clone())?;
        Ok(PseudoHomotopy { at_generator: s })
    }

    /// `G(F) = F(ℤ)`, as a rank.
    pub fn g_object(&self, f: &WeakCogroup) -> usize {
        f.object(1)
    }

    pub fn g_map(&self, t: &PseudoNatTrans) -> Nil2Hom {
        t.component(1)
    }

    pub fn g_track(&self, h: &PseudoHomotopy) -> SplitTrack {
        h.component(1)
    }

    /// `G T = 1` on `count` seeded objects, maps and tracks, with the
    /// images under `T` verified on a few of them.
    pub fn verify_round_trip(&self, seed: u64, count: usize) -> Result<Report, GammaError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = SplitModel::new((*self.coeff).clone(), 0);
        let mut r = Report::new(format!("G T = 1 over {} ({:?})", self.coeff, self.theory)).with_seed(seed);
        let homs: Vec<Nil2Hom> = sample_homs().into_iter().filter(|h| h.source() <= 2 && h.target() <= 2).take(12).collect();
        let mut objects = Vec::new();
        let mut maps = Vec::new();
        let mut tracks = Vec::new();
        for _ in 0..count {
            let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            objects.push(n);
            let f = self.theory.normalize(&random_hom(n, m, &mut rng))?;
            let g = self.theory.normalize(&twist_centrally(&f, &mut rng))?;
            let coord = model.random_coord(m, n, &mut rng, 3);
            tracks.push(model.track(f.clone(), g, coord)?);
            maps.push(f);
        }
        {
            let chk = r.check("G T(X) = X");
            for &n in &objects {
                let got = self.g_object(&self.t_object(n));
                chk.record((got != n).then(|| json!({"object": n, "got": got})));
            }
        }
        {
            let chk = r.check("G T(f) = f");
            for f in &maps {
                let got = self.g_map(&self.t_map(f)?);
                chk.record((&got != f).then(|| json!({"map": f.to_strings(), "got": got.to_strings()})));
            }
        }
        {
            let chk = r.check("G T(s) = s");
            for s in &tracks {
                let got = self.g_track(&self.t_track(s)?);
                chk.record((&got != s).then(|| json!({"track": s.coord, "got": got.coord})));
            }
        }
        for (f, s) in maps.iter().zip(&tracks).take(3) {
            let tf = self.t_map(f)?;
            r.merge(tf.verify(&homs)?);
            let tg = self.t_map(&s.target)?;
            r.merge(self.t_track(s)?.verify(&tf, &tg, &homs)?);
        }
        Ok(r)
    }
}

/// The unit `F → F_{G(F)} = T G(F)` and its inverse: canonical
/// Γ-structures of the identity between the two cogroup structures.
pub fn unit_isomorphism(
    pair: &GammaFunctorPair,
    f: &WeakCogroup,
) -> Result<(PseudoNatTrans, PseudoNatTrans), GammaError> {
    let target = pair.t_object(pair.g_object(f));
    let id = Nil2Hom::identity(f.rank());
    Ok((
        PseudoNatTrans {
            gamma: CanonicalGamma::new(f.clone(), target.clone(), id.clone())?,
        },
        PseudoNatTrans {
            gamma: CanonicalGamma::new(target, f.clone(), id)?,
        },
    ))
}

fn compose_coords(g: &PseudoNatTrans, f: &PseudoNatTrans, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
    // g_* Γ^f_α followed by Γ^g_α whiskered by f_n
    let ga = g.gamma.base_ab();
    let fa = f.gamma.base_ab();
    Ok(f
        .gamma
        .gamma(alpha)?
        .left_mul(&super::wedge_of(&ga, alpha.target()))?
        .add(&g.gamma.gamma(alpha)?.right_mul(&super::wedge_of(&fa, alpha.source()))?)?)
}

/// The unit is a pseudo natural transformation, both composites with its
/// inverse are identity transformations, and it is the identity when `F`
/// already is `T G(F)`.
pub fn verify_unit_isomorphism(pair: &GammaFunctorPair, f: &WeakCogroup, homs: &[Nil2Hom]) -> Result<Report, GammaError> {
    let (unit, inverse) = unit_isomorphism(pair, f)?;
    let mut r = Report::new(format!("unit isomorphism for a rank-{} pseudomodel over {}", f.rank(), pair.coeff()));
    r.merge(unit.verify(&homs[..homs.len().min(10)])?);
    {
        let chk = r.check("inverse ∘ unit = 1 and unit ∘ inverse = 1");
        for a in homs {
            for (second, first) in [(&inverse, &unit), (&unit, &inverse)] {
                let c = compose_coords(second, first, a)?;
                let id = second.component(1).compose(&first.component(1))?.is_identity();
                chk.record((!c.is_zero() || !id).then(|| json!({"alpha": a.to_strings(), "composite": c})));
            }
        }
    }
    {
        let chk = r.check("the unit of T G(F) is the identity transformation");
        let strict = pair.t_object(pair.g_object(f));
        let (u, _) = unit_isomorphism(pair, &strict)?;
        for a in homs {
            let t = u.gamma.gamma(a)?;
            chk.record((!t.is_zero()).then(|| json!({"alpha": a.to_strings()})));
        }
    }
    Ok(r)
}

/// Coproduct-preserving homotopies between identity transformations of a
/// table extension with sums are determined by, and exist for, each value
/// at the object `1`. Enumerates all families of self-tracks of
/// identities; fixtures without sums or without an object `1` are not
/// applicable.
pub fn check_homotopy_determination(ext: &TableExtension, limit: usize) -> Result<Report, GammaError> {
    let mut r = Report::new(format!("homotopies determined at the generator: {}", ext.name()));
    let statement = "coproduct-preserving homotopies 1 ⇒ 1 correspond bijectively to their value at 1";
    let maps = ext.maps();
    let generator = maps.find_object("1");
    let (Some(gen), true) = (generator, ext.has_sums()) else {
        r.not_applicable(statement, "no declared sums or no object 1");
        return Ok(r);
    };
    let objects: Vec<usize> = (0..maps.object_count()).collect();
    let choices: Vec<Vec<usize>> = objects
        .iter()
        .map(|&o| {
            let id = maps.identity(o);
            ext.tracks_between(id, id).to_vec()
        })
        .collect();
    let total: u128 = choices.iter().map(|c| c.len() as u128).product();
    if total > limit as u128 {
        r.not_applicable(statement, format!("{total} families exceed the limit {limit}"));
        return Ok(r);
    }
    let mut by_value: HashMap<usize, usize> = HashMap::new();
    let mut idx = vec![0usize; objects.len()];
    let mut families = 0usize;
    loop {
        let h: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if is_coproduct_homotopy(ext, &h)? {
            *by_value.entry(h[gen]).or_default() += 1;
        }
        families += 1;
        let mut k = 0;
        loop {
            if k == idx.len() {
                break;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let chk = r.check(statement);
    for &t in &choices[gen] {
        let n = by_value.get(&t).copied().unwrap_or(0);
        chk.record((n != 1).then(|| json!({"value_at_generator": t, "extensions": n, "families": families})));
    }
    Ok(r)
}

fn is_coproduct_homotopy(ext: &TableExtension, h: &[usize]) -> Result<bool, GammaError> {
    let maps = ext.maps();
    for f in 0..maps.morphism_count() {
        let (a, b) = (maps.src(f), maps.tgt(f));
        if ext.whisker_left(&f, &h[a])? != ext.whisker_right(&h[b], &f)? {
            return Ok(false);
        }
    }
    for s in &ext.parts().sums {
        let (t1, t2) = match ext.sum_kind() {
            SumKind::Coproduct => (ext.whisker_left(&s.first, &h[s.left])?, ext.whisker_left(&s.second, &h[s.right])?),
            SumKind::Product => (ext.whisker_right(&h[s.left], &s.first)?, ext.whisker_right(&h[s.right], &s.second)?),
        };
        if ext.sum_track(s, t1, t2) != Some(h[s.sum]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trackcat::{letter_export, table_fixtures};

    fn pair(m: &str) -> GammaFunctorPair {
        GammaFunctorPair::new(Arc::new(m.parse().unwrap()), Theory::Nil2).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let r = pair("Z/4").verify_round_trip(3, 10).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn nil1_is_gated_by_two_torsion() {
        assert!(matches!(
            GammaFunctorPair::new(Arc::new("Z/4".parse().unwrap()), Theory::Nil1),
            Err(GammaError::TwoTorsion(_))
        ));
        let p = GammaFunctorPair::new(Arc::new("Z/3".parse().unwrap()), Theory::Nil1).unwrap();
        let f = Nil2Hom::parse(1, 2, &["x2 x1 [x1,x2]^3"]).unwrap();
        assert_eq!(p.g_map(&p.t_map(&f).unwrap()), Nil2Hom::parse(1, 2, &["x1 x2"]).unwrap());
        assert!(p.verify_round_trip(1, 5).unwrap().passed());
    }

    #[test]
    fn unit_for_twisted_model_is_invertible() {
        let p = pair("Z+Z/2");
        let f = WeakCogroup::strict(p.coeff().clone(), 2).reduce(17).0;
        let r = verify_unit_isomorphism(&p, &f, &sample_homs()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let (u, _) = unit_isomorphism(&p, &f).unwrap();
        assert!(sample_homs().iter().any(|a| !u.gamma.gamma(a).unwrap().is_zero()));
    }

    #[test]
    fn corrupted_structure_is_rejected() {
        let p = pair("Z/2");
        let mut d = CoeffMatrix::zeros(1, 1, p.coeff().clone());
        d.set(0, 0, &[1]);
        let bad = WeakCogroup::twisted(p.coeff().clone(), 1, 2).with_corrupted_compositor(&Nil2Hom::power(3), &Nil2Hom::power(2), d);
        assert!(matches!(p.with_structure(bad), Err(GammaError::Rejected(_))));
    }

    #[test]
    fn homotopies_on_letter_maps_are_determined() {
        let ext = letter_export("Z/2".parse().unwrap(), 2);
        let r = check_homotopy_determination(&ext, 1 << 16).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.checks[0].checked, 2);
        let r = check_homotopy_determination(&ext.dualize(), 1 << 16).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        for t in table_fixtures().iter().filter(|t| !t.has_sums()) {
            let r = check_homotopy_determination(t, 1 << 16).unwrap();
            assert_eq!(r.checks[0].status, crate::report::Status::NotApplicable);
        }
    }
}
