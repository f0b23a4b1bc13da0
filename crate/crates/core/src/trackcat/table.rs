use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{check_sigma_axioms, LinearExtension, TrackError, TrackExtension};
use crate::catcore::json::{category_from_value, category_to_value, natural_system_from_value, natural_system_to_value};
use crate::catcore::{CategoryBuilder, FinCategory, MorId, NaturalSystem, ObjId};
use crate::report::Report;

/// Table models are capped to keep exhaustive verification cheap.
pub const MAX_MAPS: usize = 64;
pub const MAX_GROUP_ORDER: u128 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableTrack {
    pub source: MorId,
    pub target: MorId,
}

/// Whether declared sums are coproducts (maps out of them split) or, after
/// dualizing, products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Coproduct,
    Product,
}

/// A declared binary sum `left ∨ right = sum` with structure maps: the
/// inclusions `left → sum`, `right → sum` (or projections for products).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sum {
    pub left: ObjId,
    pub right: ObjId,
    pub sum: ObjId,
    pub first: MorId,
    pub second: MorId,
}

/// Raw tables, checked by [`TableExtension::new`].
#[derive(Debug, Clone)]
pub struct TableParts {
    pub name: String,
    pub base: FinCategory,
    pub system: NaturalSystem,
    pub maps: FinCategory,
    pub projection: Vec<MorId>,
    pub tracks: Vec<TableTrack>,
    pub identity: Vec<usize>,
    /// `(second, first) ↦ second □ first`.
    pub vcomp: HashMap<(usize, usize), usize>,
    /// `(k, t) ↦ k_* t`.
    pub whisker_left: HashMap<(MorId, usize), usize>,
    /// `(t, h) ↦ h^* t`.
    pub whisker_right: HashMap<(usize, MorId), usize>,
    /// `(f, a) ↦ σ_f(a)`, `a` reduced.
    pub sigma: HashMap<(MorId, Vec<i64>), usize>,
    pub sums: Vec<Sum>,
    pub sum_kind: SumKind,
    pub zero_object: Option<ObjId>,
}

/// Finite linear track extension given by explicit tables. Maps are
/// morphism ids of the underlying category, tracks are indices.
#[derive(Debug, Clone)]
pub struct TableExtension {
    parts: TableParts,
    inverse: Vec<usize>,
    between: HashMap<(MorId, MorId), Vec<usize>>,
    sigma_inv: HashMap<usize, Vec<i64>>,
}

fn bad(path: impl Into<String>, message: impl Into<String>) -> TrackError {
    TrackError::structure(path, message)
}

impl TableExtension {
    pub fn new(parts: TableParts) -> Result<Self, TrackError> {
        let e0 = &parts.maps;
        let c = &parts.base;
        if e0.morphism_count() > MAX_MAPS {
            return Err(bad("/maps", format!("more than {MAX_MAPS} maps")));
        }
        if e0.objects() != c.objects() {
            return Err(bad("/maps/objects", "objects differ from the base category"));
        }
        if parts.projection.len() != e0.morphism_count() {
            return Err(bad("/projection", "one entry per map required"));
        }
        for (f, &pf) in parts.projection.iter().enumerate() {
            if pf >= c.morphism_count() || c.src(pf) != e0.src(f) || c.tgt(pf) != e0.tgt(f) {
                return Err(bad(format!("/projection/{}", e0.morphism_id(f)), "projection has the wrong type"));
            }
        }
        for f in 0..c.morphism_count() {
            let g = parts.system.group(f);
            match g.order() {
                Some(n) if n <= MAX_GROUP_ORDER => {}
                _ => {
                    return Err(bad(
                        format!("/base/natural_system/groups/{}", c.morphism_id(f)),
                        format!("group {g} exceeds the table cap of order {MAX_GROUP_ORDER}"),
                    ))
                }
            }
        }
        let nt = parts.tracks.len();
        let mut between: HashMap<(MorId, MorId), Vec<usize>> = HashMap::new();
        for (i, t) in parts.tracks.iter().enumerate() {
            if t.source >= e0.morphism_count() || t.target >= e0.morphism_count() {
                return Err(bad(format!("/tracks/{i}"), "unknown map"));
            }
            if e0.src(t.source) != e0.src(t.target) || e0.tgt(t.source) != e0.tgt(t.target) {
                return Err(bad(format!("/tracks/{i}"), "source and target are not parallel"));
            }
            between.entry((t.source, t.target)).or_default().push(i);
        }
        if parts.identity.len() != e0.morphism_count() {
            return Err(bad("/identity", "one identity track per map required"));
        }
        for (f, &t) in parts.identity.iter().enumerate() {
            if t >= nt || parts.tracks[t] != (TableTrack { source: f, target: f }) {
                return Err(bad(format!("/identity/{}", e0.morphism_id(f)), "not a self-track of the map"));
            }
        }
        for a in 0..nt {
            let ta = parts.tracks[a];
            for &b in between.iter().filter(|(k, _)| k.0 == ta.target).flat_map(|(_, v)| v) {
                let tb = parts.tracks[b];
                let path = format!("/vcomp/[{b},{a}]");
                let r = *parts.vcomp.get(&(b, a)).ok_or_else(|| bad(&path, "missing entry"))?;
                if r >= nt || parts.tracks[r] != (TableTrack { source: ta.source, target: tb.target }) {
                    return Err(bad(&path, "result has the wrong type"));
                }
            }
        }
        for k in 0..e0.morphism_count() {
            for (t, tt) in parts.tracks.iter().enumerate() {
                if e0.src(k) == e0.tgt(tt.source) {
                    let path = format!("/whisker_left/[{},{t}]", e0.morphism_id(k));
                    let r = *parts.whisker_left.get(&(k, t)).ok_or_else(|| bad(&path, "missing entry"))?;
                    let want = TableTrack {
                        source: e0.comp(k, tt.source),
                        target: e0.comp(k, tt.target),
                    };
                    if r >= nt || parts.tracks[r] != want {
                        return Err(bad(&path, "result has the wrong type"));
                    }
                }
                if e0.tgt(k) == e0.src(tt.source) {
                    let path = format!("/whisker_right/[{t},{}]", e0.morphism_id(k));
                    let r = *parts.whisker_right.get(&(t, k)).ok_or_else(|| bad(&path, "missing entry"))?;
                    let want = TableTrack {
                        source: e0.comp(tt.source, k),
                        target: e0.comp(tt.target, k),
                    };
                    if r >= nt || parts.tracks[r] != want {
                        return Err(bad(&path, "result has the wrong type"));
                    }
                }
            }
        }
        let mut sigma_inv = HashMap::new();
        for f in 0..e0.morphism_count() {
            let grp = parts.system.group(parts.projection[f]);
            for a in grp.elements().expect("finite by the cap") {
                let path = format!("/sigma/[{},{a:?}]", e0.morphism_id(f));
                let t = *parts.sigma.get(&(f, a.clone())).ok_or_else(|| bad(&path, "missing entry"))?;
                if t >= nt || parts.tracks[t] != (TableTrack { source: f, target: f }) {
                    return Err(bad(&path, "not a self-track of the map"));
                }
                sigma_inv.entry(t).or_insert(a);
            }
        }
        let mut inverse = vec![usize::MAX; nt];
        for (t, tt) in parts.tracks.iter().enumerate() {
            let id = parts.identity[tt.source];
            if let Some(&s) = between
                .get(&(tt.target, tt.source))
                .and_then(|v| v.iter().find(|&&s| parts.vcomp[&(s, t)] == id))
            {
                inverse[t] = s;
            } else {
                return Err(bad(format!("/tracks/{t}"), "track has no inverse"));
            }
        }
        for (i, s) in parts.sums.iter().enumerate() {
            let (a, b) = match parts.sum_kind {
                SumKind::Coproduct => ((e0.src(s.first), e0.tgt(s.first)), (e0.src(s.second), e0.tgt(s.second))),
                SumKind::Product => ((e0.tgt(s.first), e0.src(s.first)), (e0.tgt(s.second), e0.src(s.second))),
            };
            if a != (s.left, s.sum) || b != (s.right, s.sum) {
                return Err(bad(format!("/sums/{i}"), "structure maps have the wrong type"));
            }
        }
        Ok(TableExtension {
            parts,
            inverse,
            between,
            sigma_inv,
        })
    }

    pub fn parts(&self) -> &TableParts {
        &self.parts
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn maps(&self) -> &FinCategory {
        &self.parts.maps
    }

    pub fn track_count(&self) -> usize {
        self.parts.tracks.len()
    }

    pub fn track_data(&self, t: usize) -> TableTrack {
        self.parts.tracks[t]
    }

    pub fn tracks_between(&self, f: MorId, g: MorId) -> &[usize] {
        self.between.get(&(f, g)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_sums(&self) -> bool {
        !self.parts.sums.is_empty()
    }

    pub fn sum_kind(&self) -> SumKind {
        self.parts.sum_kind
    }

    /// Returns a copy with `σ_f(a)` redirected to track `t`. Used to build
    /// corrupted models for negative tests.
    pub fn with_sigma_entry(&self, f: MorId, a: &[i64], t: usize) -> Result<Self, TrackError> {
        let mut parts = self.parts.clone();
        let a = parts.system.group(parts.projection[f]).reduce(a);
        parts.sigma.insert((f, a), t);
        Self::new(parts)
    }

    /// The opposite extension: maps reversed, `f_*` and `g^*` exchanged,
    /// sums become products and vice versa.
    pub fn dualize(&self) -> TableExtension {
        let p = &self.parts;
        let base = p.base.opposite();
        let maps = p.maps.opposite();
        let groups = p.system.groups().to_vec();
        let (push, pull) = p.system.to_tables(&p.base);
        let flip = |t: HashMap<(MorId, MorId), _>| t.into_iter().map(|((f, g), m)| ((g, f), m)).collect();
        let system = NaturalSystem::from_tables(groups, flip(pull), flip(push));
        let parts = TableParts {
            name: format!("{}^op", p.name).replace("^op^op", ""),
            base,
            system,
            maps,
            projection: p.projection.clone(),
            tracks: p.tracks.clone(),
            identity: p.identity.clone(),
            vcomp: p.vcomp.clone(),
            whisker_left: p.whisker_right.iter().map(|(&(t, h), &r)| ((h, t), r)).collect(),
            whisker_right: p.whisker_left.iter().map(|(&(k, t), &r)| ((t, k), r)).collect(),
            sigma: p.sigma.clone(),
            sums: p.sums.clone(),
            sum_kind: match p.sum_kind {
                SumKind::Coproduct => SumKind::Product,
                SumKind::Product => SumKind::Coproduct,
            },
            zero_object: p.zero_object,
        };
        TableExtension::new(parts).expect("dual of a valid table")
    }

    /// Quotient of the maps by the relation "connected by a track".
    pub fn homotopy_quotient(&self) -> FinCategory {
        let e0 = &self.parts.maps;
        let n = e0.morphism_count();
        let rep: Vec<MorId> = (0..n)
            .map(|f| (0..n).find(|&g| !self.tracks_between(g, f).is_empty()).unwrap_or(f))
            .collect();
        let mut b = CategoryBuilder::new();
        for o in e0.objects() {
            b.object(o);
        }
        for o in 0..e0.object_count() {
            b.identity(e0.object_id(o), e0.morphism_id(rep[e0.identity(o)]));
        }
        for (f, &r) in rep.iter().enumerate() {
            if r == f {
                b.morphism(e0.morphism_id(f), e0.object_id(e0.src(f)), e0.object_id(e0.tgt(f)));
            }
        }
        for f in 0..n {
            for g in 0..n {
                if rep[f] == f && rep[g] == g {
                    if let Some(fg) = e0.compose(f, g) {
                        b.composite(e0.morphism_id(g), e0.morphism_id(f), e0.morphism_id(rep[fg]));
                    }
                }
            }
        }
        b.build().expect("quotient of a valid table")
    }

    /// Exhaustive check of the track-category and linear-extension axioms.
    pub fn verify(&self) -> Result<Report, TrackError> {
        let p = &self.parts;
        let e0 = &p.maps;
        let c = &p.base;
        let n = e0.morphism_count();
        let nt = p.tracks.len();
        let mut r = Report::new(format!("linear track extension axioms: {}", p.name));
        let mid = |f: MorId| e0.morphism_id(f).to_string();
        {
            let chk = r.check("p is a functor onto the base");
            for o in 0..e0.object_count() {
                let ok = p.projection[e0.identity(o)] == c.identity(o);
                chk.record((!ok).then(|| json!({"identity_of": e0.object_id(o)})));
            }
            for f in 0..n {
                for &g in e0.into_object(e0.src(f)) {
                    let fg = e0.comp(f, g);
                    let ok = c.compose(p.projection[f], p.projection[g]) == Some(p.projection[fg]);
                    chk.record((!ok).then(|| json!({"f": mid(f), "g": mid(g)})));
                }
            }
            for h in 0..c.morphism_count() {
                let ok = p.projection.contains(&h);
                chk.record((!ok).then(|| json!({"no_preimage": c.morphism_id(h)})));
            }
        }
        {
            let chk = r.check("Track(f, g) is inhabited exactly when p f = p g");
            for f in 0..n {
                for g in 0..n {
                    if e0.src(f) != e0.src(g) || e0.tgt(f) != e0.tgt(g) {
                        continue;
                    }
                    let ok = self.tracks_between(f, g).is_empty() != (p.projection[f] == p.projection[g]);
                    chk.record((!ok).then(|| json!({"f": mid(f), "g": mid(g)})));
                }
            }
        }
        {
            let chk = r.check("vertical composition is associative and unital");
            for a in 0..nt {
                let ta = p.tracks[a];
                let l = p.vcomp[&(a, p.identity[ta.source])];
                let rr = p.vcomp[&(p.identity[ta.target], a)];
                chk.record((l != a || rr != a).then(|| json!({"unit_law": a})));
                for &b in self.tracks_out_of(ta.target) {
                    let ab = p.vcomp[&(b, a)];
                    for &cc in self.tracks_out_of(p.tracks[b].target) {
                        let lhs = p.vcomp[&(cc, ab)];
                        let rhs = p.vcomp[&(p.vcomp[&(cc, b)], a)];
                        chk.record((lhs != rhs).then(|| json!({"tracks": [a, b, cc]})));
                    }
                }
            }
        }
        {
            let chk = r.check("whiskering is functorial in maps and tracks");
            for k in 0..n {
                for a in 0..nt {
                    let ta = p.tracks[a];
                    if e0.src(k) == e0.tgt(ta.source) {
                        let ka = p.whisker_left[&(k, a)];
                        for &b in self.tracks_out_of(ta.target) {
                            let lhs = p.whisker_left[&(k, p.vcomp[&(b, a)])];
                            let rhs = p.vcomp[&(p.whisker_left[&(k, b)], ka)];
                            chk.record((lhs != rhs).then(|| json!({"left": mid(k), "tracks": [a, b]})));
                        }
                        for &k2 in e0.from_object(e0.tgt(k)) {
                            let lhs = p.whisker_left[&(e0.comp(k2, k), a)];
                            let rhs = p.whisker_left[&(k2, ka)];
                            chk.record((lhs != rhs).then(|| json!({"left": [mid(k2), mid(k)], "track": a})));
                        }
                        for &h in e0.into_object(e0.src(ta.source)) {
                            let lhs = p.whisker_right[&(ka, h)];
                            let rhs = p.whisker_left[&(k, p.whisker_right[&(a, h)])];
                            chk.record((lhs != rhs).then(|| json!({"left": mid(k), "right": mid(h), "track": a})));
                        }
                    }
                    if e0.tgt(k) == e0.src(ta.source) {
                        let ah = p.whisker_right[&(a, k)];
                        for &b in self.tracks_out_of(ta.target) {
                            let lhs = p.whisker_right[&(p.vcomp[&(b, a)], k)];
                            let rhs = p.vcomp[&(p.whisker_right[&(b, k)], ah)];
                            chk.record((lhs != rhs).then(|| json!({"right": mid(k), "tracks": [a, b]})));
                        }
                        for &k2 in e0.into_object(e0.src(k)) {
                            let lhs = p.whisker_right[&(a, e0.comp(k, k2))];
                            let rhs = p.whisker_right[&(ah, k2)];
                            chk.record((lhs != rhs).then(|| json!({"right": [mid(k), mid(k2)], "track": a})));
                        }
                    }
                }
                for f in 0..n {
                    if e0.src(k) == e0.tgt(f) {
                        let ok = p.whisker_left[&(k, p.identity[f])] == p.identity[e0.comp(k, f)];
                        chk.record((!ok).then(|| json!({"left": mid(k), "identity_of": mid(f)})));
                    }
                    if e0.tgt(k) == e0.src(f) {
                        let ok = p.whisker_right[&(p.identity[f], k)] == p.identity[e0.comp(f, k)];
                        chk.record((!ok).then(|| json!({"right": mid(k), "identity_of": mid(f)})));
                    }
                }
            }
            for a in 0..nt {
                let ta = p.tracks[a];
                let ok = p.whisker_left[&(e0.identity(e0.tgt(ta.source)), a)] == a
                    && p.whisker_right[&(a, e0.identity(e0.src(ta.source)))] == a;
                chk.record((!ok).then(|| json!({"identity_whisker": a})));
            }
        }
        {
            let chk = r.check("interchange: (g1)_* α □ f0^* β = f1^* β □ (g0)_* α");
            for a in 0..nt {
                let ta = p.tracks[a];
                for b in 0..nt {
                    let tb = p.tracks[b];
                    if e0.src(tb.source) != e0.tgt(ta.source) {
                        continue;
                    }
                    let lhs = p.vcomp[&(p.whisker_left[&(tb.target, a)], p.whisker_right[&(b, ta.source)])];
                    let rhs = p.vcomp[&(p.whisker_right[&(b, ta.target)], p.whisker_left[&(tb.source, a)])];
                    chk.record((lhs != rhs).then(|| json!({"alpha": a, "beta": b})));
                }
            }
        }
        {
            let chk = r.check("σ_f is a bijection onto the self-tracks of f");
            for f in 0..n {
                let grp = p.system.group(p.projection[f]);
                let mut hit: Vec<usize> = grp
                    .elements()
                    .expect("finite")
                    .into_iter()
                    .map(|a| p.sigma[&(f, a)])
                    .collect();
                hit.sort_unstable();
                let before = hit.len();
                hit.dedup();
                let selfs = self.tracks_between(f, f).len();
                let ok = hit.len() == before && hit.len() == selfs;
                chk.record((!ok).then(|| json!({"map": mid(f), "distinct_images": hit.len(), "self_tracks": selfs})));
            }
        }
        let maps: Vec<MorId> = (0..n).collect();
        check_sigma_axioms(self, &maps, &mut r)?;
        match p.zero_object {
            None => r.not_applicable("zero object is strict", "no zero object declared"),
            Some(z) => {
                let chk = r.check("zero object is strict");
                for o in 0..e0.object_count() {
                    for (from, to) in [(z, o), (o, z)] {
                        let hom: Vec<MorId> = e0
                            .from_object(from)
                            .iter()
                            .copied()
                            .filter(|&f| e0.tgt(f) == to)
                            .collect();
                        let ok = hom.len() == 1 && self.tracks_between(hom[0], hom[0]).len() == 1;
                        chk.record((!ok).then(|| {
                            json!({"from": e0.object_id(from), "to": e0.object_id(to), "maps": hom.len()})
                        }));
                    }
                }
            }
        }
        Ok(r)
    }

    fn tracks_out_of(&self, f: MorId) -> impl Iterator<Item = &usize> {
        let e0 = &self.parts.maps;
        e0.from_object(e0.src(f))
            .iter()
            .filter(move |&&g| e0.tgt(g) == e0.tgt(f))
            .flat_map(move |&g| self.tracks_between(f, g))
    }

    /// Hom set `X → Y` of maps.
    fn hom(&self, x: ObjId, y: ObjId) -> Vec<MorId> {
        let e0 = &self.parts.maps;
        e0.from_object(x).iter().copied().filter(|&f| e0.tgt(f) == y).collect()
    }

    /// Restriction along a structure map: `f ↦ f ∘ i` for coproducts,
    /// `f ↦ q ∘ f` for products.
    fn restrict_map(&self, f: MorId, s: MorId) -> MorId {
        match self.parts.sum_kind {
            SumKind::Coproduct => self.parts.maps.comp(f, s),
            SumKind::Product => self.parts.maps.comp(s, f),
        }
    }

    fn restrict_track(&self, t: usize, s: MorId) -> usize {
        match self.parts.sum_kind {
            SumKind::Coproduct => self.parts.whisker_right[&(t, s)],
            SumKind::Product => self.parts.whisker_left[&(s, t)],
        }
    }

    /// Inverse of the restriction `Ψ` on maps, if the pair lies in its image.
    pub fn sum_map(&self, sum: &Sum, f1: MorId, f2: MorId) -> Option<MorId> {
        let e0 = &self.parts.maps;
        let other = match self.parts.sum_kind {
            SumKind::Coproduct => e0.tgt(f1),
            SumKind::Product => e0.src(f1),
        };
        let candidates = match self.parts.sum_kind {
            SumKind::Coproduct => self.hom(sum.sum, other),
            SumKind::Product => self.hom(other, sum.sum),
        };
        candidates
            .into_iter()
            .find(|&f| self.restrict_map(f, sum.first) == f1 && self.restrict_map(f, sum.second) == f2)
    }

    /// Inverse of `Ψ` on tracks.
    pub fn sum_track(&self, sum: &Sum, t1: usize, t2: usize) -> Option<usize> {
        let (a, b) = (self.parts.tracks[t1], self.parts.tracks[t2]);
        let u = self.sum_map(sum, a.source, b.source)?;
        let v = self.sum_map(sum, a.target, b.target)?;
        self.tracks_between(u, v)
            .iter()
            .copied()
            .find(|&t| self.restrict_track(t, sum.first) == t1 && self.restrict_track(t, sum.second) == t2)
    }

    /// Checks that each declared sum induces bijections of hom-groupoids,
    /// and that sum tracks restrict to their components.
    pub fn verify_strict_coproducts(&self) -> Report {
        let mut r = Report::new(format!("strict sums: {}", self.parts.name));
        if self.parts.sums.is_empty() {
            r.not_applicable("Ψ is an isomorphism of hom-groupoids", "no sums declared");
            r.not_applicable("sum tracks restrict to their components", "no sums declared");
            return r;
        }
        let e0 = &self.parts.maps;
        let kind = self.parts.sum_kind;
        {
            let chk = r.check("Ψ is an isomorphism of hom-groupoids");
            for (si, s) in self.parts.sums.iter().enumerate() {
                for z in 0..e0.object_count() {
                    let (from_sum, from_l, from_r) = match kind {
                        SumKind::Coproduct => (self.hom(s.sum, z), self.hom(s.left, z), self.hom(s.right, z)),
                        SumKind::Product => (self.hom(z, s.sum), self.hom(z, s.left), self.hom(z, s.right)),
                    };
                    let mut seen = HashMap::new();
                    for &f in &from_sum {
                        seen.insert((self.restrict_map(f, s.first), self.restrict_map(f, s.second)), f);
                    }
                    let ok = seen.len() == from_sum.len() && seen.len() == from_l.len() * from_r.len();
                    chk.record((!ok).then(|| json!({"sum": si, "object": e0.object_id(z), "on": "maps"})));
                    for &u in &from_sum {
                        for &v in &from_sum {
                            let ts = self.tracks_between(u, v);
                            let (u1, v1) = (self.restrict_map(u, s.first), self.restrict_map(v, s.first));
                            let (u2, v2) = (self.restrict_map(u, s.second), self.restrict_map(v, s.second));
                            let want = self.tracks_between(u1, v1).len() * self.tracks_between(u2, v2).len();
                            let mut imgs: Vec<(usize, usize)> = ts
                                .iter()
                                .map(|&t| (self.restrict_track(t, s.first), self.restrict_track(t, s.second)))
                                .collect();
                            imgs.sort_unstable();
                            imgs.dedup();
                            let ok = imgs.len() == ts.len() && ts.len() == want;
                            chk.record((!ok).then(|| {
                                json!({"sum": si, "u": e0.morphism_id(u), "v": e0.morphism_id(v), "on": "tracks"})
                            }));
                        }
                    }
                }
            }
        }
        match self.parts.zero_object {
            None => r.not_applicable("sum tracks restrict to their components", "no zero object declared"),
            Some(zo) => {
                let chk = r.check("sum tracks restrict to their components");
                for (si, s) in self.parts.sums.iter().enumerate() {
                    let Some(ret) = self.retractions(s, zo) else {
                        chk.fail(json!({"sum": si, "reason": "no retractions"}));
                        continue;
                    };
                    let objs = [s.left, s.right];
                    let comps: [Vec<usize>; 2] = [0, 1].map(|e| {
                        (0..self.parts.tracks.len())
                            .filter(|&t| {
                                let tt = self.parts.tracks[t];
                                e0.src(tt.source) == objs[e] && e0.tgt(tt.source) == objs[e]
                            })
                            .collect()
                    });
                    for &h1 in &comps[0] {
                        for &h2 in &comps[1] {
                            let hs = [h1, h2];
                            let emb = [0, 1].map(|e| self.embed(s, e, hs[e]));
                            let Some(h) = self.sum_track(s, emb[0], emb[1]) else {
                                chk.fail(json!({"sum": si, "components": hs, "reason": "no sum track"}));
                                continue;
                            };
                            for e in 0..2 {
                                for g in 0..2 {
                                    let got = self.corestrict(s, &ret, h, e, g);
                                    let want = if e == g {
                                        hs[e]
                                    } else {
                                        let tt = self.parts.tracks[got];
                                        self.parts.identity[tt.source]
                                    };
                                    let zero_map = e == g || {
                                        let tt = self.parts.tracks[got];
                                        self.factors_through(tt.source, zo)
                                    };
                                    chk.record((got != want || !zero_map).then(|| {
                                        json!({"sum": si, "components": hs, "summand": e, "restricted_to": g})
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    fn factors_through(&self, f: MorId, z: ObjId) -> bool {
        let e0 = &self.parts.maps;
        let a = self.hom(e0.src(f), z);
        let b = self.hom(z, e0.tgt(f));
        a.len() == 1 && b.len() == 1 && e0.comp(b[0], a[0]) == f
    }

    fn zero_between(&self, x: ObjId, y: ObjId, z: ObjId) -> Option<MorId> {
        let a = self.hom(x, z);
        let b = self.hom(z, y);
        (a.len() == 1 && b.len() == 1).then(|| self.parts.maps.comp(b[0], a[0]))
    }

    /// The structure maps in the other direction: `r_e` for coproducts.
    fn retractions(&self, s: &Sum, zo: ObjId) -> Option<[MorId; 2]> {
        let e0 = &self.parts.maps;
        let (l, r) = (s.left, s.right);
        let idl = e0.identity(l);
        let idr = e0.identity(r);
        let r1 = self.sum_map(s, idl, self.zero_between_dir(r, l, zo)?)?;
        let r2 = self.sum_map(s, self.zero_between_dir(l, r, zo)?, idr)?;
        Some([r1, r2])
    }

    fn zero_between_dir(&self, from: ObjId, to: ObjId, zo: ObjId) -> Option<MorId> {
        match self.parts.sum_kind {
            SumKind::Coproduct => self.zero_between(from, to, zo),
            SumKind::Product => self.zero_between(to, from, zo),
        }
    }

    /// Pushes a self-track of summand `e` into the sum: `(i_e)_* h`
    /// (or `(q_e)^* h` for products).
    fn embed(&self, s: &Sum, e: usize, h: usize) -> usize {
        let m = if e == 0 { s.first } else { s.second };
        match self.parts.sum_kind {
            SumKind::Coproduct => self.parts.whisker_left[&(m, h)],
            SumKind::Product => self.parts.whisker_right[&(h, m)],
        }
    }

    /// `(r_g)_* (i_e)^* h`.
    fn corestrict(&self, s: &Sum, ret: &[MorId; 2], h: usize, e: usize, g: usize) -> usize {
        let i = if e == 0 { s.first } else { s.second };
        let t = self.restrict_track(h, i);
        match self.parts.sum_kind {
            SumKind::Coproduct => self.parts.whisker_left[&(ret[g], t)],
            SumKind::Product => self.parts.whisker_right[&(t, ret[g])],
        }
    }

    /// JSON document; see the crate README for the schema.
    pub fn to_value(&self) -> Value {
        let p = &self.parts;
        let e0 = &p.maps;
        let id = |f: MorId| e0.morphism_id(f).to_string();
        let mut base = category_to_value(&p.base);
        base["natural_system"] = natural_system_to_value(&p.base, &p.system);
        let projection: BTreeMap<String, String> = (0..e0.morphism_count())
            .map(|f| (id(f), p.base.morphism_id(p.projection[f]).to_string()))
            .collect();
        let tracks: Vec<Value> = p.tracks.iter().map(|t| json!([id(t.source), id(t.target)])).collect();
        let identity: BTreeMap<String, usize> = (0..e0.morphism_count()).map(|f| (id(f), p.identity[f])).collect();
        let mut vcomp: Vec<[usize; 3]> = p.vcomp.iter().map(|(&(b, a), &r)| [b, a, r]).collect();
        vcomp.sort_unstable();
        let mut wl: Vec<(MorId, usize, usize)> = p.whisker_left.iter().map(|(&(k, t), &r)| (k, t, r)).collect();
        wl.sort_unstable();
        let wl: Vec<Value> = wl.into_iter().map(|(k, t, r)| json!([id(k), t, r])).collect();
        let mut wr: Vec<(usize, MorId, usize)> = p.whisker_right.iter().map(|(&(t, h), &r)| (t, h, r)).collect();
        wr.sort_unstable();
        let wr: Vec<Value> = wr.into_iter().map(|(t, h, r)| json!([t, id(h), r])).collect();
        let mut sigma: Vec<(MorId, Vec<i64>, usize)> = p.sigma.iter().map(|((f, a), &t)| (*f, a.clone(), t)).collect();
        sigma.sort();
        let sigma: Vec<Value> = sigma.into_iter().map(|(f, a, t)| json!([id(f), a, t])).collect();
        let sums: Vec<Value> = p
            .sums
            .iter()
            .map(|s| {
                json!({
                    "left": e0.object_id(s.left),
                    "right": e0.object_id(s.right),
                    "sum": e0.object_id(s.sum),
                    "first": id(s.first),
                    "second": id(s.second),
                })
            })
            .collect();
        json!({
            "name": p.name,
            "base": base,
            "maps": category_to_value(e0),
            "projection": projection,
            "tracks": tracks,
            "identity": identity,
            "vcomp": vcomp,
            "whisker_left": wl,
            "whisker_right": wr,
            "sigma": sigma,
            "sums": sums,
            "sum_kind": p.sum_kind,
            "zero_object": p.zero_object.map(|z| e0.object_id(z).to_string()),
        })
    }

    pub fn from_value(v: &Value) -> Result<Self, TrackError> {
        use crate::catcore::json::{as_array, as_int, as_object, as_str, get};
        let base_v = get(v, "", "base")?;
        let base = category_from_value(base_v, "/base")?;
        let system = natural_system_from_value(&base, get(base_v, "/base", "natural_system")?, "/base/natural_system")?;
        let maps = category_from_value(get(v, "", "maps")?, "/maps")?;
        let name = v.get("name").and_then(Value::as_str).unwrap_or("table").to_string();
        let map_id = |x: &Value, path: &str| -> Result<MorId, TrackError> {
            let s = as_str(x, path)?;
            maps.find_morphism(s)
                .ok_or_else(|| bad(path, format!("unknown map {s:?}")))
        };
        let index = |x: &Value, path: &str| -> Result<usize, TrackError> {
            let k = as_int(x, path)?;
            usize::try_from(k).map_err(|_| bad(path, "negative index"))
        };
        let pv = as_object(get(v, "", "projection")?, "/projection")?;
        let mut projection = vec![usize::MAX; maps.morphism_count()];
        for (k, x) in pv {
            let path = format!("/projection/{k}");
            let f = maps.find_morphism(k).ok_or_else(|| bad(&path, format!("unknown map {k:?}")))?;
            let s = as_str(x, &path)?;
            projection[f] = base
                .find_morphism(s)
                .ok_or_else(|| bad(&path, format!("unknown base morphism {s:?}")))?;
        }
        if let Some(f) = projection.iter().position(|&x| x == usize::MAX) {
            return Err(bad("/projection", format!("no projection for {:?}", maps.morphism_id(f))));
        }
        let mut tracks = Vec::new();
        for (i, t) in as_array(get(v, "", "tracks")?, "/tracks")?.iter().enumerate() {
            let path = format!("/tracks/{i}");
            let pair = as_array(t, &path)?;
            if pair.len() != 2 {
                return Err(bad(&path, "expected [source, target]"));
            }
            tracks.push(TableTrack {
                source: map_id(&pair[0], &format!("{path}/0"))?,
                target: map_id(&pair[1], &format!("{path}/1"))?,
            });
        }
        let iv = as_object(get(v, "", "identity")?, "/identity")?;
        let mut identity = vec![usize::MAX; maps.morphism_count()];
        for (k, x) in iv {
            let path = format!("/identity/{k}");
            let f = maps.find_morphism(k).ok_or_else(|| bad(&path, format!("unknown map {k:?}")))?;
            identity[f] = index(x, &path)?;
        }
        let triples = |key: &str| -> Result<Vec<(String, [Value; 3])>, TrackError> {
            let path = format!("/{key}");
            let mut out = Vec::new();
            for (i, e) in as_array(get(v, "", key)?, &path)?.iter().enumerate() {
                let ep = format!("{path}/{i}");
                let a = as_array(e, &ep)?;
                if a.len() != 3 {
                    return Err(bad(&ep, "expected a triple"));
                }
                out.push((ep, [a[0].clone(), a[1].clone(), a[2].clone()]));
            }
            Ok(out)
        };
        let mut vcomp = HashMap::new();
        for (ep, [b, a, r]) in triples("vcomp")? {
            vcomp.insert(
                (index(&b, &format!("{ep}/0"))?, index(&a, &format!("{ep}/1"))?),
                index(&r, &format!("{ep}/2"))?,
            );
        }
        let mut whisker_left = HashMap::new();
        for (ep, [k, t, r]) in triples("whisker_left")? {
            whisker_left.insert(
                (map_id(&k, &format!("{ep}/0"))?, index(&t, &format!("{ep}/1"))?),
                index(&r, &format!("{ep}/2"))?,
            );
        }
        let mut whisker_right = HashMap::new();
        for (ep, [t, h, r]) in triples("whisker_right")? {
            whisker_right.insert(
                (index(&t, &format!("{ep}/0"))?, map_id(&h, &format!("{ep}/1"))?),
                index(&r, &format!("{ep}/2"))?,
            );
        }
        let mut sigma = HashMap::new();
        for (ep, [f, a, t]) in triples("sigma")? {
            let f = map_id(&f, &format!("{ep}/0"))?;
            let ap = format!("{ep}/1");
            let a: Vec<i64> = as_array(&a, &ap)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_int(x, &format!("{ap}/{j}")))
                .collect::<Result<_, _>>()?;
            let grp = system.group(projection[f]);
            if a.len() != grp.dim() {
                return Err(bad(&ap, format!("expected {} coordinates", grp.dim())));
            }
            sigma.insert((f, grp.reduce(&a)), index(&t, &format!("{ep}/2"))?);
        }
        let sum_kind = match v.get("sum_kind") {
            None => SumKind::Coproduct,
            Some(k) => serde_json::from_value(k.clone()).map_err(|e| bad("/sum_kind", e.to_string()))?,
        };
        let obj = |x: &Value, path: &str| -> Result<ObjId, TrackError> {
            let s = as_str(x, path)?;
            maps.find_object(s).ok_or_else(|| bad(path, format!("unknown object {s:?}")))
        };
        let mut sums = Vec::new();
        if let Some(list) = v.get("sums") {
            for (i, s) in as_array(list, "/sums")?.iter().enumerate() {
                let sp = format!("/sums/{i}");
                sums.push(Sum {
                    left: obj(get(s, &sp, "left")?, &format!("{sp}/left"))?,
                    right: obj(get(s, &sp, "right")?, &format!("{sp}/right"))?,
                    sum: obj(get(s, &sp, "sum")?, &format!("{sp}/sum"))?,
                    first: map_id(get(s, &sp, "first")?, &format!("{sp}/first"))?,
                    second: map_id(get(s, &sp, "second")?, &format!("{sp}/second"))?,
                });
            }
        }
        let zero_object = match v.get("zero_object") {
            None | Some(Value::Null) => None,
            Some(z) => Some(obj(z, "/zero_object")?),
        };
        TableExtension::new(TableParts {
            name,
            base,
            system,
            maps,
            projection,
            tracks,
            identity,
            vcomp,
            whisker_left,
            whisker_right,
            sigma,
            sums,
            sum_kind,
            zero_object,
        })
    }
}

impl TrackExtension for TableExtension {
    type Map = MorId;
    type Track = usize;

    fn compose(&self, f: &MorId, g: &MorId) -> Result<MorId, TrackError> {
        self.parts.maps.compose(*f, *g).ok_or_else(|| {
            TrackError::NotComposable(format!(
                "{} after {}",
                self.parts.maps.morphism_id(*f),
                self.parts.maps.morphism_id(*g)
            ))
        })
    }

    fn source_of(&self, t: &usize) -> MorId {
        self.parts.tracks[*t].source
    }

    fn target_of(&self, t: &usize) -> MorId {
        self.parts.tracks[*t].target
    }

    fn identity_track(&self, f: &MorId) -> usize {
        self.parts.identity[*f]
    }

    fn vcomp(&self, second: &usize, first: &usize) -> Result<usize, TrackError> {
        self.parts.vcomp.get(&(*second, *first)).copied().ok_or_else(|| TrackError::TypeMismatch {
            expected: self.parts.maps.morphism_id(self.parts.tracks[*first].target).to_string(),
            found: self.parts.maps.morphism_id(self.parts.tracks[*second].source).to_string(),
        })
    }

    fn inverse(&self, t: &usize) -> usize {
        self.inverse[*t]
    }

    fn whisker_left(&self, k: &MorId, t: &usize) -> Result<usize, TrackError> {
        self.parts
            .whisker_left
            .get(&(*k, *t))
            .copied()
            .ok_or_else(|| TrackError::NotComposable(format!("{} after track {t}", self.parts.maps.morphism_id(*k))))
    }

    fn whisker_right(&self, t: &usize, h: &MorId) -> Result<usize, TrackError> {
        self.parts
            .whisker_right
            .get(&(*t, *h))
            .copied()
            .ok_or_else(|| TrackError::NotComposable(format!("track {t} after {}", self.parts.maps.morphism_id(*h))))
    }

    fn describe_map(&self, f: &MorId) -> Value {
        json!(self.parts.maps.morphism_id(*f))
    }

    fn describe_track(&self, t: &usize) -> Value {
        let tt = self.parts.tracks[*t];
        json!({
            "track": t,
            "source": self.parts.maps.morphism_id(tt.source),
            "target": self.parts.maps.morphism_id(tt.target),
        })
    }
}

impl LinearExtension for TableExtension {
    fn base(&self) -> &FinCategory {
        &self.parts.base
    }

    fn system(&self) -> &NaturalSystem {
        &self.parts.system
    }

    fn project(&self, f: &MorId) -> Option<MorId> {
        self.parts.projection.get(*f).copied()
    }

    fn canonical_lift(&self, f: MorId) -> MorId {
        if self.parts.base.is_identity(f) {
            return self.parts.maps.identity(self.parts.base.src(f));
        }
        self.parts
            .projection
            .iter()
            .position(|&p| p == f)
            .expect("p is surjective on a valid table")
    }

    fn random_lift(&self, f: MorId, rng: &mut dyn rand::RngCore) -> MorId {
        if self.parts.base.is_identity(f) {
            return self.canonical_lift(f);
        }
        let pre: Vec<MorId> = (0..self.parts.projection.len())
            .filter(|&g| self.parts.projection[g] == f)
            .collect();
        pre[rng.gen_range(0..pre.len())]
    }

    fn some_track(&self, f: &MorId, g: &MorId) -> Option<usize> {
        self.tracks_between(*f, *g).first().copied()
    }

    fn sigma(&self, f: &MorId, a: &[i64]) -> Result<usize, TrackError> {
        let grp = self.parts.system.group(self.parts.projection[*f]);
        self.parts
            .sigma
            .get(&(*f, grp.reduce(a)))
            .copied()
            .ok_or_else(|| TrackError::Outside(format!("σ entry for {} at {a:?}", self.parts.maps.morphism_id(*f))))
    }

    fn sigma_inv(&self, t: &usize) -> Result<Vec<i64>, TrackError> {
        self.sigma_inv
            .get(t)
            .cloned()
            .ok_or_else(|| TrackError::NotSelfTrack(self.describe_track(t).to_string()))
    }
}
