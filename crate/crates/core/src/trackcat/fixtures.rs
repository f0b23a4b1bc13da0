//! Small table extensions used as test fixtures and CLI examples.

use std::collections::HashMap;

use super::table::{Sum, SumKind, TableParts, TableTrack};
use super::{LinearExtension, SplitModel, TableExtension, TrackExtension};
use crate::catcore::{AbGroupPresentation, CategoryBuilder, FinCategory, MorId, NaturalSystem};
use crate::nilgroup::Nil2Hom;

/// Track category of the crossed module `∂: Z/4 → Z/4`, `∂h = 2h`, where
/// `g ∈ Z/4` acts on `h` by `(-1)^g` when `sign_action` is set and
/// trivially otherwise.
///
/// Maps are the elements `g0..g3` of `Z/4`; a track `g ⇒ g + 2h` is the
/// element `h`. The homotopy category is `Z/2` and `D` is the constant
/// system `ker ∂ = Z/2`.
pub fn crossed_module(sign_action: bool) -> TableExtension {
    let base = FinCategory::cyclic_group(2);
    let maps = FinCategory::cyclic_group(4);
    let system = NaturalSystem::constant(&base, AbGroupPresentation::cyclic(2));
    let act = |k: usize, h: usize| if sign_action && k % 2 == 1 { (4 - h) % 4 } else { h };
    let id = |g: usize, h: usize| 4 * g + h;
    let mut tracks = Vec::new();
    for g in 0..4 {
        for h in 0..4 {
            tracks.push(TableTrack {
                source: g,
                target: (g + 2 * h) % 4,
            });
        }
    }
    let mut vcomp = HashMap::new();
    let mut whisker_left = HashMap::new();
    let mut whisker_right = HashMap::new();
    for g in 0..4 {
        for h in 0..4 {
            let t = id(g, h);
            let mid = (g + 2 * h) % 4;
            for h2 in 0..4 {
                vcomp.insert((id(mid, h2), t), id(g, (h + h2) % 4));
            }
            for k in 0..4 {
                whisker_left.insert((k, t), id((k + g) % 4, act(k, h)));
                whisker_right.insert((t, k), id((g + k) % 4, h));
            }
        }
    }
    let mut sigma = HashMap::new();
    for g in 0..4 {
        for a in 0..2 {
            sigma.insert((g, vec![a as i64]), id(g, 2 * a));
        }
    }
    let name = if sign_action { "crossed-module-sign" } else { "crossed-module-trivial" };
    TableExtension::new(TableParts {
        name: name.into(),
        base,
        system,
        maps,
        projection: (0..4).map(|g| g % 2).collect(),
        tracks,
        identity: (0..4).map(|g| id(g, 0)).collect(),
        vcomp,
        whisker_left,
        whisker_right,
        sigma,
        sums: Vec::new(),
        sum_kind: SumKind::Coproduct,
        zero_object: None,
    })
    .expect("crossed-module tables are well typed")
}

/// Trivial extension of the arrow category `X → Y` by the constant system
/// `Z/4`: maps are those of the base, tracks are self-tracks.
pub fn arrow_trivial() -> TableExtension {
    let base = FinCategory::arrow();
    let coeff = AbGroupPresentation::cyclic(4);
    let system = NaturalSystem::constant(&base, coeff);
    self_track_table("arrow-trivial", base.clone(), system, base, |_, _, a| a.to_vec(), |_, _, a| a.to_vec())
}

/// The full subcategory of letter maps `F_n → F_m`, `n, m ≤ max_rank`, of
/// the split model over `coeff`, exported as tables. Letter maps are
/// determined by their abelianization, so the base is isomorphic to the
/// maps. Declared sums `n ∨ m = n + m` with the standard inclusions; `0`
/// is a zero object.
pub fn letter_export(coeff: AbGroupPresentation, max_rank: usize) -> TableExtension {
    let model = SplitModel::new(coeff.clone(), max_rank);
    let homs = SplitModel::letter_maps(max_rank);
    let name_of = |h: &Nil2Hom| {
        let letters: Vec<String> = (0..h.source())
            .map(|j| {
                (0..h.target())
                    .find(|&i| h.coefficient(j, i).to_i64() == Some(1))
                    .map_or("0".to_string(), |i| (i + 1).to_string())
            })
            .collect();
        format!("{}>{}:[{}]", h.source(), h.target(), letters.join(","))
    };
    let mut b = CategoryBuilder::new();
    for n in 0..=max_rank {
        b.object(&n.to_string());
    }
    let index: HashMap<Nil2Hom, String> = homs.iter().map(|h| (h.clone(), name_of(h))).collect();
    for h in &homs {
        b.morphism(&index[h], &h.source().to_string(), &h.target().to_string());
    }
    for n in 0..=max_rank {
        b.identity(&n.to_string(), &index[&Nil2Hom::identity(n)]);
    }
    for g in &homs {
        for f in homs.iter().filter(|f| f.source() == g.target()) {
            b.composite(&index[g], &index[f], &index[&f.compose(g).expect("composable")]);
        }
    }
    let cat = b.build().expect("letter maps form a category");
    let hom_of: Vec<Nil2Hom> = {
        let mut v = vec![Nil2Hom::identity(0); cat.morphism_count()];
        for h in &homs {
            v[cat.find_morphism(&index[h]).expect("built")] = h.clone();
        }
        v
    };
    let matrices = hom_of.iter().map(|h| h.abelianize().expect("small")).collect();
    let system = NaturalSystem::bimodule(coeff, matrices);
    let push = |k: MorId, _t: MorId, a: &[i64]| {
        let t = model.sigma(&hom_of[_t], a).expect("shape");
        model.whisker_left(&hom_of[k], &t).expect("composable").coord.coords().to_vec()
    };
    let pull = |t: MorId, h: MorId, a: &[i64]| {
        let t = model.sigma(&hom_of[t], a).expect("shape");
        model.whisker_right(&t, &hom_of[h]).expect("composable").coord.coords().to_vec()
    };
    let mut ext = self_track_table(&format!("letter-maps-{max_rank}"), cat.clone(), system, cat.clone(), push, pull);
    let mut parts = ext.parts().clone();
    for l in 1..=max_rank {
        for r in 1..=max_rank - l.min(max_rank) {
            if l + r > max_rank {
                continue;
            }
            let first = Nil2Hom::letter_map(l, l + r, &(0..l).map(Some).collect::<Vec<_>>()).expect("range");
            let second = Nil2Hom::letter_map(r, l + r, &(l..l + r).map(Some).collect::<Vec<_>>()).expect("range");
            parts.sums.push(Sum {
                left: cat.find_object(&l.to_string()).expect("object"),
                right: cat.find_object(&r.to_string()).expect("object"),
                sum: cat.find_object(&(l + r).to_string()).expect("object"),
                first: cat.find_morphism(&index[&first]).expect("map"),
                second: cat.find_morphism(&index[&second]).expect("map"),
            });
        }
    }
    parts.zero_object = cat.find_object("0");
    ext = TableExtension::new(parts).expect("sums are well typed");
    ext
}

/// Table extension whose maps are the base morphisms (projection the
/// identity) and whose tracks are the self-tracks `σ_f(a)`, with whiskers
/// given by `push(k, f, a) = k_* a` and `pull(f, h, a) = h^* a`.
fn self_track_table(
    name: &str,
    base: FinCategory,
    system: NaturalSystem,
    maps: FinCategory,
    push: impl Fn(MorId, MorId, &[i64]) -> Vec<i64>,
    pull: impl Fn(MorId, MorId, &[i64]) -> Vec<i64>,
) -> TableExtension {
    let n = maps.morphism_count();
    let mut tracks = Vec::new();
    let mut sigma = HashMap::new();
    let mut elems: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for f in 0..n {
        let es = system.group(f).elements().expect("finite table group");
        for a in &es {
            sigma.insert((f, a.clone()), tracks.len());
            tracks.push(TableTrack { source: f, target: f });
        }
        elems.push(es);
    }
    let identity: Vec<usize> = (0..n).map(|f| sigma[&(f, system.group(f).zero())]).collect();
    let mut vcomp = HashMap::new();
    let mut whisker_left = HashMap::new();
    let mut whisker_right = HashMap::new();
    for f in 0..n {
        let grp = system.group(f);
        for a in &elems[f] {
            let t = sigma[&(f, a.clone())];
            for b in &elems[f] {
                vcomp.insert((sigma[&(f, b.clone())], t), sigma[&(f, grp.add(a, b))]);
            }
            for &k in maps.from_object(maps.tgt(f)) {
                let kf = maps.comp(k, f);
                whisker_left.insert((k, t), sigma[&(kf, system.group(kf).reduce(&push(k, f, a)))]);
            }
            for &h in maps.into_object(maps.src(f)) {
                let fh = maps.comp(f, h);
                whisker_right.insert((t, h), sigma[&(fh, system.group(fh).reduce(&pull(f, h, a)))]);
            }
        }
    }
    TableExtension::new(TableParts {
        name: name.into(),
        base,
        system,
        maps,
        projection: (0..n).collect(),
        tracks,
        identity,
        vcomp,
        whisker_left,
        whisker_right,
        sigma,
        sums: Vec::new(),
        sum_kind: SumKind::Coproduct,
        zero_object: None,
    })
    .expect("self-track tables are well typed")
}

/// Every table fixture, by name.
pub fn table_fixtures() -> Vec<TableExtension> {
    vec![
        crossed_module(true),
        crossed_module(false),
        arrow_trivial(),
        letter_export(AbGroupPresentation::cyclic(2), 2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_verify() {
        for t in table_fixtures() {
            let r = t.verify().unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn letter_export_sizes() {
        let t = letter_export(AbGroupPresentation::cyclic(2), 2);
        assert_eq!(t.maps().morphism_count(), 23);
        assert_eq!(t.track_count(), 181);
        let r = t.verify_strict_coproducts();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.checks.iter().all(|c| c.checked > 0));
    }

    #[test]
    fn corrupted_sigma_is_reported() {
        let t = crossed_module(true);
        let bad = t.with_sigma_entry(1, &[1], t.identity_track(&1)).unwrap();
        let r = bad.verify().unwrap();
        assert!(!r.passed());
        let failing: Vec<_> = r.failures().map(|c| c.statement.clone()).collect();
        assert!(failing.iter().any(|s| s.contains("bijection")), "{failing:?}");
    }

    #[test]
    fn dualize_is_involutive() {
        for t in table_fixtures() {
            let dd = t.dualize().dualize();
            assert_eq!(dd.to_value(), t.to_value());
            assert!(t.dualize().verify().unwrap().passed());
        }
    }

    #[test]
    fn json_round_trip() {
        for t in table_fixtures() {
            let back = TableExtension::from_value(&t.to_value()).unwrap();
            assert_eq!(back.to_value(), t.to_value());
        }
    }

    #[test]
    fn quotient_is_the_base() {
        let t = crossed_module(true);
        let q = t.homotopy_quotient();
        assert_eq!(q.morphism_count(), 2);
        let a = arrow_trivial();
        assert_eq!(a.homotopy_quotient().morphism_count(), 3);
    }
}
