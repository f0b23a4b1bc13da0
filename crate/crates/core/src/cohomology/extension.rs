//! Sections of linear track extensions and their characteristic cocycles.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::{BoundaryLattice, Cochain, CochainComplex, CohomologyError, CohomologyGroup};
use crate::catcore::{FinCategory, MorId};
use crate::report::Report;
use crate::trackcat::{random_track, LinearExtension, TableExtension, TrackExtension};

/// A section `(t, H)`: lifts `t(f)` with `p t(f) = f` and tracks
/// `H(f, g): t(f) t(g) ⇒ t(fg)` for composable non-identity pairs. On pairs
/// containing an identity `H` is the identity track.
#[derive(Debug, Clone)]
pub struct Section<M, T> {
    pub t: Vec<M>,
    pub h: HashMap<(MorId, MorId), T>,
}

fn composable_pairs(c: &FinCategory) -> Vec<(MorId, MorId)> {
    let mut out = Vec::new();
    for f in 0..c.morphism_count() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.into_object(c.src(f)) {
            if !c.is_identity(g) {
                out.push((f, g));
            }
        }
    }
    out
}

/// `t(f)` is the first preimage in the model's order, identities go to
/// identities, and `H` is the model's deterministic track.
pub fn canonical_section<E: LinearExtension>(ext: &E) -> Result<Section<E::Map, E::Track>, CohomologyError> {
    let c = ext.base();
    let t: Vec<E::Map> = (0..c.morphism_count()).map(|f| ext.canonical_lift(f)).collect();
    fill_section(ext, t, |ext, u, v| {
        ext.some_track(u, v)
            .ok_or_else(|| crate::trackcat::TrackError::NoTrack(format!("{} and {}", ext.describe_map(u), ext.describe_map(v))))
    })
}

/// Random lifts and uniformly random tracks.
pub fn random_section<E: LinearExtension>(
    ext: &E,
    rng: &mut dyn rand::RngCore,
) -> Result<Section<E::Map, E::Track>, CohomologyError> {
    let c = ext.base();
    let t: Vec<E::Map> = (0..c.morphism_count())
        .map(|f| {
            if c.is_identity(f) {
                ext.canonical_lift(f)
            } else {
                ext.random_lift(f, rng)
            }
        })
        .collect();
    let mut rng = rng;
    fill_section(ext, t, move |ext, u, v| random_track(ext, u, v, &mut rng))
}

fn fill_section<E: LinearExtension>(
    ext: &E,
    t: Vec<E::Map>,
    mut track: impl FnMut(&E, &E::Map, &E::Map) -> Result<E::Track, crate::trackcat::TrackError>,
) -> Result<Section<E::Map, E::Track>, CohomologyError> {
    let c = ext.base();
    let mut h = HashMap::new();
    for (f, g) in composable_pairs(c) {
        let tfg = ext.compose(&t[f], &t[g])?;
        h.insert((f, g), track(ext, &tfg, &t[c.comp(f, g)])?);
    }
    Ok(Section { t, h })
}

/// Checks `p t = id`, `t(1) = 1` and the types of `H`.
pub fn check_section<E: LinearExtension>(ext: &E, s: &Section<E::Map, E::Track>) -> Result<(), CohomologyError> {
    let c = ext.base();
    let ill = |f: MorId, reason: String| CohomologyError::IllMatchedSection {
        morphism: c.morphism_id(f).to_string(),
        reason,
    };
    if s.t.len() != c.morphism_count() {
        return Err(CohomologyError::Malformed(format!(
            "section has {} lifts for {} morphisms",
            s.t.len(),
            c.morphism_count()
        )));
    }
    for f in 0..c.morphism_count() {
        match ext.project(&s.t[f]) {
            Some(pf) if pf == f => {}
            other => {
                let got = other.map_or("nothing".to_string(), |g| c.morphism_id(g).to_string());
                return Err(ill(f, format!("p t(f) is {got}")));
            }
        }
        if c.is_identity(f) {
            let id = ext.canonical_lift(f);
            if s.t[f] != id {
                return Err(ill(f, "identity is not sent to an identity".into()));
            }
        }
    }
    for (f, g) in composable_pairs(c) {
        let hfg = s
            .h
            .get(&(f, g))
            .ok_or_else(|| ill(f, format!("H missing on the pair with {}", c.morphism_id(g))))?;
        let src = ext.compose(&s.t[f], &s.t[g])?;
        if ext.source_of(hfg) != src || ext.target_of(hfg) != s.t[c.comp(f, g)] {
            return Err(ill(f, format!("H on the pair with {} has the wrong type", c.morphism_id(g))));
        }
    }
    Ok(())
}

/// `H(f, g)`, the identity track when `f` or `g` is an identity.
pub fn section_track<E: LinearExtension>(
    ext: &E,
    s: &Section<E::Map, E::Track>,
    f: MorId,
    g: MorId,
) -> Result<E::Track, CohomologyError> {
    let c = ext.base();
    if c.is_identity(f) || c.is_identity(g) {
        return Ok(ext.identity_track(&ext.compose(&s.t[f], &s.t[g])?));
    }
    s.h.get(&(f, g)).cloned().ok_or_else(|| CohomologyError::IllMatchedSection {
        morphism: c.morphism_id(f).to_string(),
        reason: format!("H missing on the pair with {}", c.morphism_id(g)),
    })
}

/// `Δ(f, g, h) = [H(fg, h) □ (th)^* H(f, g)] □ [H(f, gh) □ (tf)_* H(g, h)]^⊟`,
/// a self-track of `t(fgh)`.
pub fn delta<E: LinearExtension>(
    ext: &E,
    s: &Section<E::Map, E::Track>,
    f: MorId,
    g: MorId,
    h: MorId,
) -> Result<E::Track, CohomologyError> {
    let c = ext.base();
    let fg = c.comp(f, g);
    let gh = c.comp(g, h);
    let path_a = ext.vcomp(&section_track(ext, s, f, gh)?, &ext.whisker_left(&s.t[f], &section_track(ext, s, g, h)?)?)?;
    let path_b = ext.vcomp(&section_track(ext, s, fg, h)?, &ext.whisker_right(&section_track(ext, s, f, g)?, &s.t[h])?)?;
    Ok(ext.vcomp(&path_b, &ext.inverse(&path_a))?)
}

/// `c_T(t, H)(f, g, h) = σ^{-1}_{t(fgh)} Δ(f, g, h)`.
pub fn extension_cocycle<E: LinearExtension>(
    ext: &E,
    cx: &CochainComplex<'_>,
    s: &Section<E::Map, E::Track>,
) -> Result<Cochain, CohomologyError> {
    check_section(ext, s)?;
    let chains = cx.chains(3)?;
    let mut values = Vec::with_capacity(chains.len());
    for ch in chains {
        let [f, g, h] = ch.morphisms[..] else {
            return Err(CohomologyError::Internal("degree-3 chain of wrong length".into()));
        };
        let d = delta(ext, s, f, g, h)?;
        let comp = ch.composite(cx.category());
        values.push(cx.system().group(comp).reduce(&ext.sigma_inv(&d)?));
    }
    Ok(Cochain { degree: 3, values })
}

/// `(t, H - c)`: `(H - c)(f, g) = σ(-c(f, g)) □ H(f, g)`.
pub fn perturb<E: LinearExtension>(
    ext: &E,
    cx: &CochainComplex<'_>,
    s: &Section<E::Map, E::Track>,
    c: &Cochain,
) -> Result<Section<E::Map, E::Track>, CohomologyError> {
    if c.degree != 2 {
        return Err(CohomologyError::Malformed(format!("expected a 2-cochain, got degree {}", c.degree)));
    }
    let base = cx.category();
    let mut out = s.clone();
    for (i, ch) in cx.chains(2)?.iter().enumerate() {
        let (f, g) = (ch.morphisms[0], ch.morphisms[1]);
        let fg = base.comp(f, g);
        let neg = cx.system().group(fg).neg(&c.values[i]);
        let shift = ext.sigma(&s.t[fg], &neg)?;
        let old = section_track(ext, s, f, g)?;
        out.h.insert((f, g), ext.vcomp(&shift, &old)?);
    }
    Ok(out)
}

/// Section data as JSON: lifts, and `H` as coordinates relative to the
/// model's deterministic tracks.
pub fn section_to_value<E: LinearExtension>(ext: &E, s: &Section<E::Map, E::Track>) -> Result<Value, CohomologyError> {
    let c = ext.base();
    let t: serde_json::Map<String, Value> = (0..c.morphism_count())
        .map(|f| (c.morphism_id(f).to_string(), ext.describe_map(&s.t[f])))
        .collect();
    let mut h = Vec::new();
    for (f, g) in composable_pairs(c) {
        let hfg = &s.h[&(f, g)];
        let base = ext
            .some_track(&ext.source_of(hfg), &ext.target_of(hfg))
            .ok_or_else(|| CohomologyError::Internal("untracked section component".into()))?;
        let a = ext.sigma_inv(&ext.vcomp(hfg, &ext.inverse(&base))?)?;
        h.push(json!({"f": c.morphism_id(f), "g": c.morphism_id(g), "coord": a}));
    }
    Ok(json!({"t": t, "H": h}))
}

/// Class of an extension in `H^3(C, D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionClass {
    /// Invariant factors of `H^3`, e.g. `Z/2`.
    pub group: String,
    pub coordinates: Vec<i64>,
    pub is_zero: bool,
}

/// `[c_T(t, H)]` for the canonical section.
pub fn class_of<E: LinearExtension>(ext: &E) -> Result<(ExtensionClass, Cochain), CohomologyError> {
    let cx = CochainComplex::new(ext.base(), ext.system(), 4);
    let s = canonical_section(ext)?;
    let z = extension_cocycle(ext, &cx, &s)?;
    let h3 = CohomologyGroup::compute(&cx, 3)?;
    let coordinates = h3.class_coordinates(&cx, &z)?;
    let is_zero = coordinates.iter().all(|&x| x == 0);
    Ok((
        ExtensionClass {
            group: h3.presentation().to_string(),
            coordinates,
            is_zero,
        },
        z,
    ))
}

/// Whether the class vanishes, decided modulo coboundaries without
/// computing `H^3`.
pub fn class_vanishes<E: LinearExtension>(ext: &E) -> Result<bool, CohomologyError> {
    let cx = CochainComplex::new(ext.base(), ext.system(), 3);
    let z = extension_cocycle(ext, &cx, &canonical_section(ext)?)?;
    if cx.is_zero(&z) {
        return Ok(true);
    }
    BoundaryLattice::new(&cx, 3)?.is_coboundary(&cx, &z)
}

/// Outcome of [`solve_pseudosection`].
#[derive(Debug, Clone)]
pub enum Pseudosection<M, T> {
    Solved(Section<M, T>),
    /// The class is nonzero; `cocycle` represents it and `key` is its
    /// canonical remainder modulo coboundaries.
    NoSolution { cocycle: Cochain, key: Vec<i64> },
}

/// Finds `(t, H - c)` with `Δ ≡ 0` by solving `δc = -c_T(t, H)`.
pub fn solve_pseudosection<E: LinearExtension>(
    ext: &E,
    cx: &CochainComplex<'_>,
) -> Result<Pseudosection<E::Map, E::Track>, CohomologyError> {
    let s = canonical_section(ext)?;
    let z = extension_cocycle(ext, cx, &s)?;
    let lattice = BoundaryLattice::new(cx, 3)?;
    let target = cx.scale(&z, -1)?;
    match lattice.solve(cx, &target)? {
        None => Ok(Pseudosection::NoSolution {
            key: lattice.key(cx, &z)?,
            cocycle: z,
        }),
        Some(c) => {
            let solved = perturb(ext, cx, &s, &c)?;
            let check = extension_cocycle(ext, cx, &solved)?;
            if let Some((chain, value)) = cx.first_nonzero(&check) {
                return Err(CohomologyError::Internal(format!(
                    "solved section still has Δ = {value:?} at {chain:?}"
                )));
            }
            Ok(Pseudosection::Solved(solved))
        }
    }
}

/// Checks the pseudofunctor equations of a section exhaustively: `Δ` is
/// the identity track on every composable triple, including degenerate
/// ones, and `H` is the identity track on pairs with an identity.
pub fn verify_pseudofunctor_section<E: LinearExtension>(
    ext: &E,
    s: &Section<E::Map, E::Track>,
) -> Result<Report, CohomologyError> {
    let c = ext.base();
    let mut r = Report::new("pseudofunctor equations of a section");
    {
        let chk = r.check("t sends identities to identities and p t = id");
        chk.record(check_section(ext, s).err().map(|e| json!(e.to_string())));
    }
    {
        let chk = r.check("associativity: H(fg, h) □ (th)^* H(f, g) = H(f, gh) □ (tf)_* H(g, h)");
        for f in 0..c.morphism_count() {
            for &g in c.into_object(c.src(f)) {
                for &h in c.into_object(c.src(g)) {
                    let d = delta(ext, s, f, g, h)?;
                    let id = ext.identity_track(&s.t[c.comp(f, c.comp(g, h))]);
                    chk.record((d != id).then(|| {
                        json!({"chain": [c.morphism_id(f), c.morphism_id(g), c.morphism_id(h)], "delta": ext.describe_track(&d)})
                    }));
                }
            }
        }
    }
    {
        let chk = r.check("unit: H(f, 1) and H(1, f) are identity tracks");
        for f in 0..c.morphism_count() {
            let (a, b) = (c.identity(c.src(f)), c.identity(c.tgt(f)));
            for (x, y) in [(f, a), (b, f)] {
                let t = section_track(ext, s, x, y)?;
                let ok = ext.source_of(&t) == ext.target_of(&t) && t == ext.identity_track(&ext.source_of(&t));
                chk.record((!ok).then(|| json!({"morphism": c.morphism_id(f)})));
            }
        }
    }
    Ok(r)
}

/// Coproduct conditions for a section of a table extension with declared
/// sums: structure maps lift to structure maps and `H` is trivial on
/// composites with them.
pub fn verify_section_preserves_sums(ext: &TableExtension, s: &Section<MorId, usize>) -> Report {
    let mut r = Report::new("section preserves declared sums");
    if !ext.has_sums() {
        r.not_applicable("structure maps are preserved strictly", "no sums declared");
        return r;
    }
    let c = ext.base();
    let e0 = ext.maps();
    let sums = ext.parts().sums.clone();
    {
        let chk = r.check("structure maps are preserved strictly");
        for sum in &sums {
            for m in [sum.first, sum.second] {
                let pm = ext.parts().projection[m];
                chk.record((s.t[pm] != m).then(|| json!({"structure_map": e0.morphism_id(m)})));
            }
        }
    }
    {
        let chk = r.check("H is trivial on composites with structure maps");
        for sum in &sums {
            for m in [sum.first, sum.second] {
                let pm = ext.parts().projection[m];
                for f in 0..c.morphism_count() {
                    let pair = match ext.sum_kind() {
                        crate::trackcat::SumKind::Coproduct => (f, pm),
                        crate::trackcat::SumKind::Product => (pm, f),
                    };
                    if c.compose(pair.0, pair.1).is_none() {
                        continue;
                    }
                    let Ok(t) = section_track(ext, s, pair.0, pair.1) else {
                        chk.fail(json!({"pair": [c.morphism_id(pair.0), c.morphism_id(pair.1)]}));
                        continue;
                    };
                    let ok = ext.source_of(&t) == ext.target_of(&t) && t == ext.identity_track(&ext.source_of(&t));
                    chk.record((!ok).then(|| json!({"pair": [c.morphism_id(pair.0), c.morphism_id(pair.1)]})));
                }
            }
        }
    }
    r
}

/// `R(σ)(f_1, ..., f_n) = σ(f_n, ..., f_1)`, from cochains over `C` to
/// cochains over `C^op` (same morphism numbering).
pub fn reverse_cochain(cx: &CochainComplex<'_>, cx_op: &CochainComplex<'_>, sigma: &Cochain) -> Result<Cochain, CohomologyError> {
    let n = sigma.degree;
    let mut values = Vec::with_capacity(cx_op.chains(n)?.len());
    for ch in cx_op.chains(n)? {
        let rev: Vec<MorId> = ch.morphisms.iter().rev().copied().collect();
        let i = cx
            .chain_index(n, &rev)
            .ok_or_else(|| CohomologyError::Malformed(format!("reversed chain {rev:?} is not a chain")))?;
        values.push(sigma.values[i].clone());
    }
    Ok(Cochain { degree: n, values })
}

/// The section of the dual extension with the same lifts and
/// `H^op(f, g) = H(g, f)`.
pub fn dual_section<M: Clone, T: Clone>(s: &Section<M, T>) -> Section<M, T> {
    Section {
        t: s.t.clone(),
        h: s.h.iter().map(|(&(f, g), v)| ((g, f), v.clone())).collect(),
    }
}

/// Exhaustively searches all sections of a finite table extension for a
/// pseudofunctor. Returns `Some` section with `Δ ≡ 0`, or `None`. Only
/// usable on tiny tables; the search space is the product of all lift and
/// track choices.
pub fn exhaustive_pseudosection(ext: &TableExtension, limit: u64) -> Result<Option<Section<MorId, usize>>, CohomologyError> {
    let c = ext.base();
    let n = c.morphism_count();
    let lifts: Vec<Vec<MorId>> = (0..n)
        .map(|f| {
            if c.is_identity(f) {
                vec![ext.canonical_lift(f)]
            } else {
                (0..ext.maps().morphism_count())
                    .filter(|&g| ext.project(&g) == Some(f))
                    .collect()
            }
        })
        .collect();
    let pairs = composable_pairs(c);
    let mut size: u64 = 1;
    for l in &lifts {
        size = size.saturating_mul(l.len() as u64);
    }
    let mut lift_idx = vec![0usize; n];
    let mut searched = 0u64;
    loop {
        let t: Vec<MorId> = (0..n).map(|f| lifts[f][lift_idx[f]]).collect();
        let choices: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(f, g)| {
                let u = ext.compose(&t[f], &t[g]).expect("composable");
                ext.tracks_between(u, t[c.comp(f, g)]).to_vec()
            })
            .collect();
        let mut k = vec![0usize; pairs.len()];
        loop {
            searched += 1;
            if searched > limit.max(size) {
                return Err(CohomologyError::Internal("exhaustive search exceeded its limit".into()));
            }
            let h = pairs.iter().zip(&k).zip(&choices).map(|((&p, &i), ch)| (p, ch[i])).collect();
            let s = Section { t: t.clone(), h };
            let mut ok = true;
            'outer: for f in 0..n {
                for &g in c.into_object(c.src(f)) {
                    for &hh in c.into_object(c.src(g)) {
                        let d = delta(ext, &s, f, g, hh)?;
                        if ext.sigma_inv(&d)?.iter().any(|&x| x != 0) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return Ok(Some(s));
            }
            if !advance(&mut k, &choices.iter().map(Vec::len).collect::<Vec<_>>()) {
                break;
            }
        }
        if !advance(&mut lift_idx, &lifts.iter().map(Vec::len).collect::<Vec<_>>()) {
            return Ok(None);
        }
    }
}

/// Odometer increment; false after the last combination.
fn advance(idx: &mut [usize], sizes: &[usize]) -> bool {
    for i in 0..idx.len() {
        idx[i] += 1;
        if idx[i] < sizes[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trackcat::{crossed_module, SplitModel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_canonical_section_has_zero_cocycle() {
        let m = SplitModel::new("Z/2".parse().unwrap(), 2);
        let cx = CochainComplex::new(m.base(), m.system(), 3);
        let s = canonical_section(&m).unwrap();
        let z = extension_cocycle(&m, &cx, &s).unwrap();
        assert!(cx.is_zero(&z));
    }

    #[test]
    fn perturbation_adds_a_coboundary() {
        let m = SplitModel::new("Z/4".parse().unwrap(), 2);
        let cx = CochainComplex::new(m.base(), m.system(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_section(&m, &mut rng).unwrap();
        let z = extension_cocycle(&m, &cx, &s).unwrap();
        assert!(cx.is_zero(&cx.coboundary(&z).unwrap()));
        let c = cx.random(2, &mut rng, 3).unwrap();
        let z2 = extension_cocycle(&m, &cx, &perturb(&m, &cx, &s, &c).unwrap()).unwrap();
        let want = cx.add(&cx.coboundary(&c).unwrap(), &z).unwrap();
        assert_eq!(z2, want);
    }

    #[test]
    fn sign_crossed_module_is_nontrivial() {
        let e = crossed_module(true);
        let (cls, _) = class_of(&e).unwrap();
        assert_eq!(cls.group, "Z/2");
        assert!(!cls.is_zero);
        assert!(exhaustive_pseudosection(&e, 1 << 20).unwrap().is_none());
        let cx = CochainComplex::new(e.base(), e.system(), 4);
        assert!(matches!(solve_pseudosection(&e, &cx).unwrap(), Pseudosection::NoSolution { .. }));
    }

    #[test]
    fn trivial_crossed_module_splits() {
        let e = crossed_module(false);
        assert!(class_of(&e).unwrap().0.is_zero);
        assert!(exhaustive_pseudosection(&e, 1 << 20).unwrap().is_some());
        let cx = CochainComplex::new(e.base(), e.system(), 4);
        let Pseudosection::Solved(s) = solve_pseudosection(&e, &cx).unwrap() else {
            panic!("expected a pseudosection")
        };
        assert!(verify_pseudofunctor_section(&e, &s).unwrap().passed());
    }

    #[test]
    fn ill_matched_section_names_the_morphism() {
        let e = crossed_module(true);
        let mut s = canonical_section(&e).unwrap();
        s.t[1] = 0;
        let cx = CochainComplex::new(e.base(), e.system(), 3);
        match extension_cocycle(&e, &cx, &s) {
            Err(CohomologyError::IllMatchedSection { morphism, .. }) => assert_eq!(morphism, "g1"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
