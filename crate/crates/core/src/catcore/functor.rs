use super::{CatError, FinCategory, MorId, ObjId};

/// Functor between finite categories given on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

impl FinFunctor {
    pub fn identity(c: &FinCategory) -> Self {
        FinFunctor {
            objects: (0..c.object_count()).collect(),
            morphisms: (0..c.morphism_count()).collect(),
        }
    }

    /// Everything to the identity of `o`.
    pub fn constant(b: &FinCategory, c: &FinCategory, o: ObjId) -> Self {
        FinFunctor {
            objects: vec![o; b.object_count()],
            morphisms: vec![c.identity(o); b.morphism_count()],
        }
    }

    /// Checks that this is a functor `b → c`.
    pub fn check(&self, b: &FinCategory, c: &FinCategory) -> Result<(), CatError> {
        if self.objects.len() != b.object_count() || self.morphisms.len() != b.morphism_count() {
            return Err(CatError::Functor("assignment sizes do not match the source".into()));
        }
        for (o, &fo) in self.objects.iter().enumerate() {
            if fo >= c.object_count() {
                return Err(CatError::Functor(format!("object {} maps out of range", b.object_id(o))));
            }
            if self.morphisms[b.identity(o)] != c.identity(fo) {
                return Err(CatError::Functor(format!(
                    "identity of {} is not preserved",
                    b.object_id(o)
                )));
            }
        }
        for f in 0..b.morphism_count() {
            let ff = self.morphisms[f];
            if ff >= c.morphism_count()
                || c.src(ff) != self.objects[b.src(f)]
                || c.tgt(ff) != self.objects[b.tgt(f)]
            {
                return Err(CatError::Functor(format!(
                    "morphism {} is sent to an arrow with the wrong ends",
                    b.morphism_id(f)
                )));
            }
            for &g in b.into_object(b.src(f)) {
                let fg = b.comp(f, g);
                if c.compose(ff, self.morphisms[g]) != Some(self.morphisms[fg]) {
                    return Err(CatError::Functor(format!(
                        "composite {} ∘ {} is not preserved",
                        b.morphism_id(f),
                        b.morphism_id(g)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full subcategory on the given objects, with its inclusion functor.
    pub fn full_subcategory(c: &FinCategory, objects: &[ObjId]) -> Result<(FinCategory, FinFunctor), CatError> {
        let keep = |o: ObjId| objects.contains(&o);
        let mut bld = super::CategoryBuilder::new();
        for &o in objects {
            bld.object(c.object_id(o));
            bld.identity(c.object_id(o), c.morphism_id(c.identity(o)));
        }
        let mors: Vec<MorId> = (0..c.morphism_count())
            .filter(|&f| keep(c.src(f)) && keep(c.tgt(f)))
            .collect();
        for &f in &mors {
            bld.morphism(c.morphism_id(f), c.object_id(c.src(f)), c.object_id(c.tgt(f)));
        }
        for &f in &mors {
            for &g in c.into_object(c.src(f)) {
                if keep(c.src(g)) {
                    bld.composite(c.morphism_id(g), c.morphism_id(f), c.morphism_id(c.comp(f, g)));
                }
            }
        }
        let sub = bld.build()?;
        let functor = FinFunctor {
            objects: (0..sub.object_count())
                .map(|o| c.find_object(sub.object_id(o)).expect("kept"))
                .collect(),
            morphisms: (0..sub.morphism_count())
                .map(|f| c.find_morphism(sub.morphism_id(f)).expect("kept"))
                .collect(),
        };
        Ok((sub, functor))
    }
}
