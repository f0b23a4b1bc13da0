use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use super::{AbGroupPresentation, CatError, CoeffMatrix, FinCategory, MorId};
use crate::linalg::IntMatrix;
use crate::report::Report;

/// Action matrices keyed by composable pairs `(f, g)`.
pub type ActionTable = HashMap<(MorId, MorId), IntMatrix>;

/// Natural system `D` on a finite category: a group `D(f)` for each
/// morphism with actions `f_*: D(g) → D(fg)` and `g^*: D(f) → D(fg)`.
#[derive(Debug, Clone)]
pub struct NaturalSystem {
    groups: Vec<AbGroupPresentation>,
    actions: Actions,
}

#[derive(Debug, Clone)]
enum Actions {
    /// Explicit matrices keyed by `(f, g)`; absent entries act as identity,
    /// or as zero into a group of different dimension.
    Table {
        push: HashMap<(MorId, MorId), IntMatrix>,
        pull: HashMap<(MorId, MorId), IntMatrix>,
    },
    /// `D(f) = M^{rows(A_f) × cols(A_f)}` with `f_* X = A_f X` and
    /// `g^* X = X A_g`, for integer matrices `A_f` attached to morphisms.
    Bimodule {
        coeff: Arc<AbGroupPresentation>,
        matrices: Vec<IntMatrix>,
    },
}

impl NaturalSystem {
    /// Same group everywhere, identity actions.
    pub fn constant(c: &FinCategory, m: AbGroupPresentation) -> Self {
        NaturalSystem {
            groups: vec![m; c.morphism_count()],
            actions: Actions::Table {
                push: HashMap::new(),
                pull: HashMap::new(),
            },
        }
    }

    /// Explicit tables. Missing actions default to identity matrices, or to
    /// zero when source and target dimensions differ.
    pub fn from_tables(
        groups: Vec<AbGroupPresentation>,
        push: HashMap<(MorId, MorId), IntMatrix>,
        pull: HashMap<(MorId, MorId), IntMatrix>,
    ) -> Self {
        NaturalSystem {
            groups,
            actions: Actions::Table { push, pull },
        }
    }

    /// System induced by the bifunctor `(A, B) ↦ Hom(Z^a, M^b)`, given an
    /// integer matrix for every morphism.
    pub fn bimodule(coeff: AbGroupPresentation, matrices: Vec<IntMatrix>) -> Self {
        let coeff = Arc::new(coeff);
        let groups = matrices
            .iter()
            .map(|a| coeff.power(a.rows() * a.cols()))
            .collect();
        NaturalSystem {
            groups,
            actions: Actions::Bimodule { coeff, matrices },
        }
    }

    pub fn group(&self, f: MorId) -> &AbGroupPresentation {
        &self.groups[f]
    }

    pub fn groups(&self) -> &[AbGroupPresentation] {
        &self.groups
    }

    /// Coefficient group and morphism matrices of a bimodule system.
    pub fn bimodule_data(&self) -> Option<(&Arc<AbGroupPresentation>, &[IntMatrix])> {
        match &self.actions {
            Actions::Bimodule { coeff, matrices } => Some((coeff, matrices)),
            Actions::Table { .. } => None,
        }
    }

    pub fn is_zero_system(&self) -> bool {
        self.groups.iter().all(AbGroupPresentation::is_trivial)
    }

    /// `f_*(x)` for `x ∈ D(g)`, landing in `D(f ∘ g)`.
    pub fn push(&self, c: &FinCategory, f: MorId, g: MorId, x: &[i64]) -> Vec<i64> {
        let fg = c.comp(f, g);
        let v = match &self.actions {
            Actions::Table { push, .. } => match push.get(&(f, g)) {
                Some(m) => m.mul_vec(x).expect("action matrix shape checked on validation"),
                None => self.default_action(fg, x),
            },
            Actions::Bimodule { coeff, matrices } => {
                let ag = &matrices[g];
                let xm = CoeffMatrix::from_coords(ag.rows(), ag.cols(), coeff.clone(), x.to_vec())
                    .expect("coordinate length");
                xm.left_mul(&matrices[f]).expect("shapes").coords().to_vec()
            }
        };
        self.groups[fg].reduce(&v)
    }

    /// `g^*(x)` for `x ∈ D(f)`, landing in `D(f ∘ g)`.
    pub fn pull(&self, c: &FinCategory, f: MorId, g: MorId, x: &[i64]) -> Vec<i64> {
        let fg = c.comp(f, g);
        let v = match &self.actions {
            Actions::Table { pull, .. } => match pull.get(&(f, g)) {
                Some(m) => m.mul_vec(x).expect("action matrix shape checked on validation"),
                None => self.default_action(fg, x),
            },
            Actions::Bimodule { coeff, matrices } => {
                let af = &matrices[f];
                let xm = CoeffMatrix::from_coords(af.rows(), af.cols(), coeff.clone(), x.to_vec())
                    .expect("coordinate length");
                xm.right_mul(&matrices[g]).expect("shapes").coords().to_vec()
            }
        };
        self.groups[fg].reduce(&v)
    }

    fn default_action(&self, target: MorId, x: &[i64]) -> Vec<i64> {
        if self.groups[target].dim() == x.len() {
            x.to_vec()
        } else {
            self.groups[target].zero()
        }
    }

    fn action_matrix(
        &self,
        c: &FinCategory,
        f: MorId,
        g: MorId,
        src: MorId,
        push: bool,
    ) -> IntMatrix {
        let d = self.groups[src].dim();
        let fg = c.comp(f, g);
        let mut m = IntMatrix::zeros(self.groups[fg].dim(), d);
        for k in 0..d {
            let mut e = vec![0; d];
            e[k] = 1;
            let col = if push {
                self.push(c, f, g, &e)
            } else {
                self.pull(c, f, g, &e)
            };
            for (i, v) in col.iter().enumerate() {
                m.set(i, k, *v);
            }
        }
        m
    }

    /// Matrix of `f_*: D(g) → D(fg)`.
    pub fn push_matrix(&self, c: &FinCategory, f: MorId, g: MorId) -> IntMatrix {
        self.action_matrix(c, f, g, g, true)
    }

    /// Matrix of `g^*: D(f) → D(fg)`.
    pub fn pull_matrix(&self, c: &FinCategory, f: MorId, g: MorId) -> IntMatrix {
        self.action_matrix(c, f, g, f, false)
    }

    /// Explicit action tables `(push, pull)`, for export.
    pub fn to_tables(
        &self,
        c: &FinCategory,
    ) -> (ActionTable, ActionTable) {
        let mut push = HashMap::new();
        let mut pull = HashMap::new();
        for f in 0..c.morphism_count() {
            for &g in c.into_object(c.src(f)) {
                push.insert((f, g), self.push_matrix(c, f, g));
                pull.insert((f, g), self.pull_matrix(c, f, g));
            }
        }
        (push, pull)
    }

    /// Checks shapes, well-definedness on torsion, and functoriality of
    /// the actions on all composable data.
    pub fn validate(&self, c: &FinCategory) -> Report {
        let mut r = Report::new("natural system axioms");
        let n = c.morphism_count();
        if self.groups.len() != n {
            r.check("one group per morphism").fail(json!({
                "groups": self.groups.len(), "morphisms": n
            }));
            return r;
        }
        let id = |f: MorId| c.morphism_id(f).to_string();
        let pairs: Vec<(MorId, MorId)> = (0..n)
            .flat_map(|f| c.into_object(c.src(f)).iter().map(move |&g| (f, g)))
            .collect();
        if let Actions::Table { push, pull } = &self.actions {
            let c1 = r.check("action matrices have the right shape");
            for &(f, g) in &pairs {
                let fg = c.comp(f, g);
                let ok_push = match push.get(&(f, g)) {
                    Some(m) => m.rows() == self.groups[fg].dim() && m.cols() == self.groups[g].dim(),
                    None => self.groups[fg] == self.groups[g],
                };
                let ok_pull = match pull.get(&(f, g)) {
                    Some(m) => m.rows() == self.groups[fg].dim() && m.cols() == self.groups[f].dim(),
                    None => self.groups[fg] == self.groups[f],
                };
                c1.record((!ok_push || !ok_pull).then(|| {
                    json!({"pair": [id(f), id(g)], "push_ok": ok_push, "pull_ok": ok_pull})
                }));
            }
            if !c1.passed() {
                return r;
            }
        }
        {
            let c2 = r.check("actions are well defined on torsion");
            for &(f, g) in &pairs {
                let fg = c.comp(f, g);
                let pm = self.push_matrix(c, f, g);
                let qm = self.pull_matrix(c, f, g);
                let ok = self.groups[g].is_hom_to(&pm, &self.groups[fg])
                    && self.groups[f].is_hom_to(&qm, &self.groups[fg]);
                c2.record((!ok).then(|| json!({"pair": [id(f), id(g)]})));
            }
        }
        {
            let c3 = r.check("identities act as identities");
            for f in 0..n {
                let it = c.identity(c.tgt(f));
                let is = c.identity(c.src(f));
                let d = self.groups[f].dim();
                let ok = self.push_matrix(c, it, f) == IntMatrix::identity(d)
                    && self.pull_matrix(c, f, is) == IntMatrix::identity(d);
                c3.record((!ok).then(|| json!({"morphism": id(f)})));
            }
        }
        let gens = |f: MorId| self.groups[f].generators();
        {
            let c4 = r.check("(f g)_* = f_* g_* and (g h)^* = h^* g^*");
            for f in 0..n {
                for &g in c.into_object(c.src(f)) {
                    for &h in c.into_object(c.src(g)) {
                        let fg = c.comp(f, g);
                        let gh = c.comp(g, h);
                        let mut bad_push = false;
                        for x in gens(h) {
                            let a = self.push(c, fg, h, &x);
                            let b = self.push(c, f, gh, &self.push(c, g, h, &x));
                            bad_push |= a != b;
                        }
                        let mut bad_pull = false;
                        for x in gens(f) {
                            let a = self.pull(c, f, gh, &x);
                            let b = self.pull(c, fg, h, &self.pull(c, f, g, &x));
                            bad_pull |= a != b;
                        }
                        c4.record((bad_push || bad_pull).then(|| {
                            json!({"triple": [id(f), id(g), id(h)], "push": bad_push, "pull": bad_pull})
                        }));
                    }
                }
            }
        }
        {
            let c5 = r.check("f_* h^* = h^* f_*");
            for f in 0..n {
                for &g in c.into_object(c.src(f)) {
                    for &h in c.into_object(c.src(g)) {
                        let fg = c.comp(f, g);
                        let gh = c.comp(g, h);
                        let mut bad = false;
                        for x in gens(g) {
                            let a = self.push(c, f, gh, &self.pull(c, g, h, &x));
                            let b = self.pull(c, fg, h, &self.push(c, f, g, &x));
                            bad |= a != b;
                        }
                        c5.record(bad.then(|| json!({"triple": [id(f), id(g), id(h)]})));
                    }
                }
            }
        }
        r
    }

    /// Pullback along a functor given by its morphism map `F: B → C`:
    /// `(F^*D)(f) = D(F f)` with transported actions.
    pub fn pullback(&self, c: &FinCategory, b: &FinCategory, mor_map: &[MorId]) -> Result<Self, CatError> {
        if mor_map.len() != b.morphism_count() {
            return Err(CatError::Functor(format!(
                "morphism map has {} entries, source category has {}",
                mor_map.len(),
                b.morphism_count()
            )));
        }
        if let Actions::Bimodule { coeff, matrices } = &self.actions {
            return Ok(NaturalSystem::bimodule(
                (**coeff).clone(),
                mor_map.iter().map(|&f| matrices[f].clone()).collect(),
            ));
        }
        let groups = mor_map.iter().map(|&f| self.groups[f].clone()).collect();
        let mut push = HashMap::new();
        let mut pull = HashMap::new();
        for f in 0..b.morphism_count() {
            for &g in b.into_object(b.src(f)) {
                let (ff, fg) = (mor_map[f], mor_map[g]);
                push.insert((f, g), self.push_matrix(c, ff, fg));
                pull.insert((f, g), self.pull_matrix(c, ff, fg));
            }
        }
        Ok(NaturalSystem::from_tables(groups, push, pull))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_system_is_valid() {
        let c = FinCategory::arrow();
        let d = NaturalSystem::constant(&c, "Z/2".parse().unwrap());
        assert!(d.validate(&c).passed());
    }

    #[test]
    fn bimodule_system_is_valid() {
        let c = FinCategory::cyclic_group(2);
        // g1 acts by -1 on Z^1
        let mats = vec![IntMatrix::identity(1), IntMatrix::diagonal(&[-1])];
        let d = NaturalSystem::bimodule("Z+Z/4".parse().unwrap(), mats);
        assert!(d.validate(&c).passed());
        assert_eq!(d.push(&c, 1, 1, &[1, 1]), vec![-1, 3]);
    }

    #[test]
    fn wrong_pull_matrix_is_named() {
        let c = FinCategory::cyclic_group(2);
        let g1 = c.find_morphism("g1").unwrap();
        let mut pull = HashMap::new();
        pull.insert((g1, g1), IntMatrix::diagonal(&[3]));
        let d = NaturalSystem::from_tables(vec!["Z".parse().unwrap(); 2], HashMap::new(), pull);
        let r = d.validate(&c);
        assert!(!r.passed());
        let ws = &r.failures().next().unwrap().witnesses;
        assert!(ws.iter().any(|w| w["triple"] == json!(["g1", "g1", "g1"])));
    }
}
