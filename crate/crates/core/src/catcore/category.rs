use std::collections::HashMap;

use serde_json::json;

use super::CatError;
use crate::report::Report;

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// Finite category with an explicit composition table.
///
/// Objects and morphisms are numbered in lexicographic order of their
/// identifiers. `compose(f, g)` is `f ∘ g`: first `g`, then `f`.
#[derive(Debug, Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    table: Vec<Option<MorId>>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
    by_source: Vec<Vec<MorId>>,
    by_target: Vec<Vec<MorId>>,
}

/// A composable tuple `(f_1, ..., f_n)` with composite `f_1 ∘ ... ∘ f_n`.
/// Degree-0 chains are objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub morphisms: Vec<MorId>,
    pub object: ObjId,
}

impl Chain {
    pub fn degree(&self) -> usize {
        self.morphisms.len()
    }

    pub fn composite(&self, c: &FinCategory) -> MorId {
        c.compose_all(&self.morphisms)
            .unwrap_or_else(|| c.identity(self.object))
    }

    pub fn ids(&self, c: &FinCategory) -> Vec<String> {
        if self.morphisms.is_empty() {
            vec![c.object_id(self.object).to_string()]
        } else {
            self.morphisms.iter().map(|&f| c.morphism_id(f).to_string()).collect()
        }
    }
}

/// Collects category data by identifier before numbering.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: Vec<(String, String)>,
    pub compose: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: &str) -> &mut Self {
        self.objects.push(id.to_string());
        self
    }

    pub fn morphism(&mut self, id: &str, src: &str, tgt: &str) -> &mut Self {
        self.morphisms
            .push((id.to_string(), src.to_string(), tgt.to_string()));
        self
    }

    pub fn identity(&mut self, obj: &str, mor: &str) -> &mut Self {
        self.identities.push((obj.to_string(), mor.to_string()));
        self
    }

    /// Records `f ∘ g = gf` given as "first `g`, then `f`".
    pub fn composite(&mut self, g: &str, f: &str, gf: &str) -> &mut Self {
        self.compose
            .push((g.to_string(), f.to_string(), gf.to_string()));
        self
    }

    /// Numbers the data and checks typing. Identity composites missing
    /// from the table are filled in; other gaps are left for
    /// [`FinCategory::validate`].
    pub fn build(&self) -> Result<FinCategory, CatError> {
        let mut objects = self.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(CatError::structure("/objects", format!("duplicate object {:?}", w[0])));
            }
        }
        let obj_index: HashMap<String, ObjId> =
            objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let mut order: Vec<usize> = (0..self.morphisms.len()).collect();
        order.sort_by(|&a, &b| self.morphisms[a].0.cmp(&self.morphisms[b].0));
        let mut morphisms = Vec::with_capacity(order.len());
        let mut mor_index = HashMap::new();
        for &k in &order {
            let (id, s, t) = &self.morphisms[k];
            let path = format!("/morphisms/{k}");
            let src = *obj_index
                .get(s)
                .ok_or_else(|| CatError::structure(&path, format!("unknown source object {s:?}")))?;
            let tgt = *obj_index
                .get(t)
                .ok_or_else(|| CatError::structure(&path, format!("unknown target object {t:?}")))?;
            if mor_index.insert(id.clone(), morphisms.len()).is_some() {
                return Err(CatError::structure(&path, format!("duplicate morphism {id:?}")));
            }
            morphisms.push(Morphism {
                id: id.clone(),
                src,
                tgt,
            });
        }
        let mut identities = vec![usize::MAX; objects.len()];
        for (o, m) in &self.identities {
            let path = format!("/identities/{o}");
            let oi = *obj_index
                .get(o)
                .ok_or_else(|| CatError::structure(&path, format!("unknown object {o:?}")))?;
            let mi = *mor_index
                .get(m)
                .ok_or_else(|| CatError::structure(&path, format!("unknown morphism {m:?}")))?;
            if morphisms[mi].src != oi || morphisms[mi].tgt != oi {
                return Err(CatError::structure(
                    &path,
                    format!("identity {m:?} is not an endomorphism of {o:?}"),
                ));
            }
            identities[oi] = mi;
        }
        if let Some(o) = identities.iter().position(|&i| i == usize::MAX) {
            return Err(CatError::structure(
                "/identities",
                format!("object {:?} has no identity", objects[o]),
            ));
        }
        let n = morphisms.len();
        let mut table: Vec<Option<MorId>> = vec![None; n * n];
        for (k, (g, f, gf)) in self.compose.iter().enumerate() {
            let path = format!("/compose/{k}");
            let look = |id: &String, slot: usize| {
                mor_index.get(id).copied().ok_or_else(|| {
                    CatError::structure(
                        &format!("{path}/{slot}"),
                        format!("unknown morphism {id:?} in composition triple"),
                    )
                })
            };
            let (gi, fi, ci) = (look(g, 0)?, look(f, 1)?, look(gf, 2)?);
            if morphisms[gi].tgt != morphisms[fi].src {
                return Err(CatError::structure(
                    &path,
                    format!("triple [{g}, {f}, {gf}]: {g} and {f} are not composable"),
                ));
            }
            if morphisms[ci].src != morphisms[gi].src || morphisms[ci].tgt != morphisms[fi].tgt {
                return Err(CatError::structure(
                    &path,
                    format!("triple [{g}, {f}, {gf}]: {gf} has the wrong source or target"),
                ));
            }
            match table[fi * n + gi] {
                Some(prev) if prev != ci => {
                    return Err(CatError::structure(
                        &path,
                        format!(
                            "triple [{g}, {f}, {gf}] conflicts with earlier composite {}",
                            morphisms[prev].id
                        ),
                    ))
                }
                _ => table[fi * n + gi] = Some(ci),
            }
        }
        for (f, m) in morphisms.iter().enumerate() {
            let it = identities[m.tgt];
            let is = identities[m.src];
            table[it * n + f].get_or_insert(f);
            table[f * n + is].get_or_insert(f);
        }
        let mut by_source = vec![Vec::new(); objects.len()];
        let mut by_target = vec![Vec::new(); objects.len()];
        for (f, m) in morphisms.iter().enumerate() {
            by_source[m.src].push(f);
            by_target[m.tgt].push(f);
        }
        Ok(FinCategory {
            objects,
            morphisms,
            identities,
            table,
            obj_index,
            mor_index,
            by_source,
            by_target,
        })
    }
}

impl FinCategory {
    /// One-object category whose morphisms are the elements of a monoid;
    /// `mul(a, b)` is the composite "`a` after `b`".
    pub fn from_monoid(
        object: &str,
        elements: &[&str],
        unit: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<FinCategory, CatError> {
        let mut b = CategoryBuilder::new();
        b.object(object);
        for e in elements {
            b.morphism(e, object, object);
        }
        b.identity(object, elements[unit]);
        for (i, f) in elements.iter().enumerate() {
            for (j, g) in elements.iter().enumerate() {
                b.composite(g, f, elements[mul(i, j)]);
            }
        }
        b.build()
    }

    /// The cyclic group `Z/n` as a one-object category, elements `g0..g{n-1}`.
    pub fn cyclic_group(n: usize) -> FinCategory {
        let names: Vec<String> = (0..n).map(|k| format!("g{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::from_monoid("*", &refs, 0, |a, b| (a + b) % n).expect("valid group")
    }

    /// The one-object, one-morphism category.
    pub fn trivial() -> FinCategory {
        Self::cyclic_group(1)
    }

    /// `X --f--> Y`.
    pub fn arrow() -> FinCategory {
        let mut b = CategoryBuilder::new();
        b.object("X")
            .object("Y")
            .morphism("1X", "X", "X")
            .morphism("1Y", "Y", "Y")
            .morphism("f", "X", "Y")
            .identity("X", "1X")
            .identity("Y", "1Y");
        b.build().expect("valid")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn object_id(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn morphism_id(&self, f: MorId) -> &str {
        &self.morphisms[f].id
    }

    pub fn find_object(&self, id: &str) -> Option<ObjId> {
        self.obj_index.get(id).copied()
    }

    pub fn find_morphism(&self, id: &str) -> Option<MorId> {
        self.mor_index.get(id).copied()
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identities[o]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f)] == f
    }

    /// Morphisms with the given source, in identifier order.
    pub fn from_object(&self, o: ObjId) -> &[MorId] {
        &self.by_source[o]
    }

    /// Morphisms with the given target, in identifier order.
    pub fn into_object(&self, o: ObjId) -> &[MorId] {
        &self.by_target[o]
    }

    /// `f ∘ g`, `None` when not composable or missing from the table.
    pub fn compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.table[f * self.morphisms.len() + g]
    }

    /// `f ∘ g` for data known to be composable in a validated category.
    pub fn comp(&self, f: MorId, g: MorId) -> MorId {
        self.compose(f, g).unwrap_or_else(|| {
            panic!(
                "composite {} ∘ {} missing from a category assumed valid",
                self.morphism_id(f),
                self.morphism_id(g)
            )
        })
    }

    /// Same identifiers, reversed morphisms. Morphism numbering is kept.
    pub fn opposite(&self) -> FinCategory {
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(o);
        }
        for m in &self.morphisms {
            b.morphism(&m.id, &self.objects[m.tgt], &self.objects[m.src]);
        }
        for (o, &i) in self.identities.iter().enumerate() {
            b.identity(&self.objects[o], &self.morphisms[i].id);
        }
        let n = self.morphisms.len();
        for f in 0..n {
            for g in 0..n {
                if let Some(fg) = self.table[f * n + g] {
                    // first f^op, then g^op
                    b.composite(&self.morphisms[f].id, &self.morphisms[g].id, &self.morphisms[fg].id);
                }
            }
        }
        b.build().expect("opposite of a built category")
    }

    /// `f_1 ∘ ... ∘ f_n`, `None` for an empty list.
    pub fn compose_all(&self, fs: &[MorId]) -> Option<MorId> {
        let (&last, rest) = fs.split_last()?;
        let mut acc = last;
        for &f in rest.iter().rev() {
            acc = self.compose(f, acc)?;
        }
        Some(acc)
    }

    /// Checks closure of the table and the category axioms.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("category axioms");
        let n = self.morphisms.len();
        {
            let c = r.check("composition table is total on composable pairs");
            for f in 0..n {
                for &g in self.into_object(self.src(f)) {
                    c.record(self.compose(f, g).is_none().then(|| {
                        json!({"missing": [self.morphism_id(g), self.morphism_id(f)]})
                    }));
                }
            }
        }
        {
            let c = r.check("identities are units");
            for f in 0..n {
                let lt = self.compose(self.identity(self.tgt(f)), f);
                let rt = self.compose(f, self.identity(self.src(f)));
                c.record((lt != Some(f) || rt != Some(f)).then(|| {
                    json!({"morphism": self.morphism_id(f)})
                }));
            }
        }
        {
            let c = r.check("composition is associative");
            for f in 0..n {
                for &g in self.into_object(self.src(f)) {
                    for &h in self.into_object(self.src(g)) {
                        let l = self.compose(f, g).and_then(|fg| self.compose(fg, h));
                        let rr = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                        c.record((l.is_none() || l != rr).then(|| {
                            json!({"triple": [self.morphism_id(f), self.morphism_id(g), self.morphism_id(h)]})
                        }));
                    }
                }
            }
        }
        r
    }

    /// All composable `n`-tuples in lexicographic order; degree 0 gives
    /// the objects.
    pub fn nerve(&self, n: usize) -> Vec<Chain> {
        self.chains(n, false)
    }

    /// Chains without identity morphisms (the normalized nerve).
    pub fn nondegenerate_nerve(&self, n: usize) -> Vec<Chain> {
        self.chains(n, true)
    }

    fn chains(&self, n: usize, skip_identities: bool) -> Vec<Chain> {
        if n == 0 {
            return (0..self.objects.len())
                .map(|o| Chain {
                    morphisms: Vec::new(),
                    object: o,
                })
                .collect();
        }
        let mut out: Vec<Vec<MorId>> = (0..self.morphisms.len())
            .filter(|&f| !(skip_identities && self.is_identity(f)))
            .map(|f| vec![f])
            .collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for ch in &out {
                let last = *ch.last().expect("nonempty");
                for &g in self.into_object(self.src(last)) {
                    if skip_identities && self.is_identity(g) {
                        continue;
                    }
                    let mut c = ch.clone();
                    c.push(g);
                    next.push(c);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|m| Chain {
                object: self.tgt(m[0]),
                morphisms: m,
            })
            .collect()
    }

    /// Category of factorizations: objects are morphisms `f`; a morphism
    /// `f → g` is a pair `(a, b)` with `g = a ∘ f ∘ b`; composition is
    /// `(a', b') ∘ (a, b) = (a' a, b b')`.
    pub fn factorization_category(&self) -> FinCategory {
        let mut b = CategoryBuilder::new();
        let name = |a: MorId, bb: MorId, f: MorId| {
            format!(
                "({},{}):{}",
                self.morphism_id(a),
                self.morphism_id(bb),
                self.morphism_id(f)
            )
        };
        let mut arrows: Vec<(MorId, MorId, MorId, MorId)> = Vec::new();
        for f in 0..self.morphisms.len() {
            b.object(self.morphism_id(f));
            for &a in self.from_object(self.tgt(f)) {
                for &bb in self.into_object(self.src(f)) {
                    let g = self.comp(self.comp(a, f), bb);
                    arrows.push((a, bb, f, g));
                    b.morphism(&name(a, bb, f), self.morphism_id(f), self.morphism_id(g));
                }
            }
            let ida = self.identity(self.tgt(f));
            let idb = self.identity(self.src(f));
            b.identity(self.morphism_id(f), &name(ida, idb, f));
        }
        let mut by_source: HashMap<MorId, Vec<(MorId, MorId)>> = HashMap::new();
        for &(a, bb, f, _) in &arrows {
            by_source.entry(f).or_default().push((a, bb));
        }
        for &(a, bb, f, g) in &arrows {
            for &(a2, b2) in by_source.get(&g).map(Vec::as_slice).unwrap_or(&[]) {
                let ca = self.comp(a2, a);
                let cb = self.comp(bb, b2);
                b.composite(&name(a, bb, f), &name(a2, b2, g), &name(ca, cb, f));
            }
        }
        b.build().expect("factorization data is well typed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_is_valid_and_has_four_2_chains() {
        let c = FinCategory::cyclic_group(2);
        let r = c.validate();
        assert!(r.passed());
        assert_eq!(r.checks[2].checked, 8);
        assert_eq!(c.nerve(2).len(), 4);
        assert_eq!(c.nondegenerate_nerve(2).len(), 1);
    }

    #[test]
    fn trivial_category_nerve() {
        let c = FinCategory::trivial();
        let n3 = c.nerve(3);
        assert_eq!(n3.len(), 1);
        assert_eq!(n3[0].morphisms, vec![0, 0, 0]);
        assert!(c.nondegenerate_nerve(1).is_empty());
    }

    #[test]
    fn opposite_is_involutive() {
        let c = FinCategory::arrow();
        let op = c.opposite();
        let f = op.find_morphism("f").unwrap();
        assert_eq!(op.object_id(op.src(f)), "Y");
        assert!(op.validate().passed());
        let back = op.opposite();
        assert_eq!(back.morphisms(), c.morphisms());
        for f in 0..c.morphism_count() {
            for g in 0..c.morphism_count() {
                assert_eq!(back.compose(f, g), c.compose(f, g));
                assert_eq!(op.compose(g, f), c.compose(f, g));
            }
        }
    }

    #[test]
    fn arrow_category_nerve_counts() {
        let c = FinCategory::arrow();
        // composable pairs: (1X,1X), (f,1X), (1Y,f), (1Y,1Y)
        assert_eq!(c.nerve(2).len(), 4);
        assert_eq!(c.nerve(3).len(), 5);
        assert_eq!(c.nerve(0).len(), 2);
    }

    #[test]
    fn broken_associativity_is_named() {
        // monoid {1, a, b} with a∘a = b, other products forced to break associativity
        let mut b = CategoryBuilder::new();
        b.object("*")
            .morphism("1", "*", "*")
            .morphism("a", "*", "*")
            .morphism("b", "*", "*")
            .identity("*", "1");
        for (g, f, gf) in [
            ("a", "a", "b"),
            ("a", "b", "a"),
            ("b", "a", "b"),
            ("b", "b", "b"),
        ] {
            b.composite(g, f, gf);
        }
        let c = b.build().unwrap();
        let r = c.validate();
        assert!(!r.passed());
        let fail = r.failures().next().unwrap();
        assert_eq!(fail.statement, "composition is associative");
        assert!(fail.witnesses[0]["triple"].is_array());
    }

    #[test]
    fn ill_typed_triple_is_rejected() {
        let mut b = CategoryBuilder::new();
        b.object("X")
            .object("Y")
            .morphism("1X", "X", "X")
            .morphism("1Y", "Y", "Y")
            .morphism("f", "X", "Y")
            .identity("X", "1X")
            .identity("Y", "1Y")
            .composite("f", "f", "f");
        let err = b.build().unwrap_err();
        assert!(err.to_string().contains("/compose/0"), "{err}");
    }

    #[test]
    fn factorization_category_examples() {
        let t = FinCategory::trivial().factorization_category();
        assert_eq!((t.object_count(), t.morphism_count()), (1, 1));
        let a = FinCategory::arrow().factorization_category();
        assert_eq!(a.object_count(), 3);
        // f→f: (1Y,1X); 1X→1X: (1X,1X); 1X→f: (f,1X); 1Y→1Y; 1Y→f: (1Y,f)
        assert_eq!(a.morphism_count(), 5);
        assert!(a.validate().passed());
        let z3 = FinCategory::cyclic_group(3).factorization_category();
        assert!(z3.validate().passed());
        // endomorphisms of the identity object: pairs (a, b) with a b = 1
        let id = z3.find_object("g0").unwrap();
        let endos = z3
            .from_object(id)
            .iter()
            .filter(|&&m| z3.tgt(m) == id)
            .count();
        assert_eq!(endos, 3);
    }
}
