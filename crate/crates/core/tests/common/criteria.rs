//! One check per acceptance criterion, parameterized so that the
//! dedicated test files can run reduced versions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trackwork::catcore::{AbGroupPresentation, FinCategory, NaturalSystem};
use trackwork::cohomology::{
    class_of, class_vanishes, exhaustive_pseudosection, extension_cocycle, perturb, random_section,
    solve_pseudosection, verify_pseudofunctor_section, BoundaryLattice, Cochain, CochainComplex, CohomologyGroup,
    Pseudosection,
};
use trackwork::gamma::{
    check_homotopy_determination, nonzero_coefficients, sample_homs, track_generators, verify_boxbox_associativity,
    verify_gamma_grid, verify_mu_algebra, verify_naturality, verify_sum_formula, verify_track_naturality,
    verify_uniqueness, verify_unit_isomorphism, CanonicalGamma, GammaFunctorPair, Grid, Theory, WeakCogroup,
};
use trackwork::nilgroup::{FreeWord, Nil2Hom};
use trackwork::report::Report;
use trackwork::trackcat::{
    crossed_module, random_hom, table_fixtures, twist_centrally, LinearExtension, SplitModel, TableExtension,
};

use super::oracles::{all_words, as_i64, collect_by_rewriting};

pub type Outcome = Result<String, String>;

/// Degree-4 cochain count above which `H^3` is not computed.
pub const H3_LIMIT: usize = 10_000;

pub const GROUPS: [&str; 3] = ["Z/2", "Z/4", "Z+Z/2"];

pub fn group(m: &str) -> Arc<AbGroupPresentation> {
    Arc::new(m.parse().expect("fixture group"))
}

fn require(r: Report) -> Result<Report, String> {
    if r.passed() {
        Ok(r)
    } else {
        Err(r.to_text())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

/// `ξ_2`, `ξ_3`, `ξ_{-1}`.
pub fn xi_maps() -> Vec<Nil2Hom> {
    vec![Nil2Hom::power(2), Nil2Hom::power(3), Nil2Hom::power(-1)]
}

/// Canonical structure of `f: 1 → 1` between twisted rank-1 cogroups with
/// distinct seeds.
pub fn structure(m: &str, f: &Nil2Hom, seed: u64) -> CanonicalGamma {
    let coeff = group(m);
    CanonicalGamma::new(
        WeakCogroup::twisted(coeff.clone(), f.source(), 2 * seed + 1),
        WeakCogroup::twisted(coeff, f.target(), 2 * seed + 2),
        f.clone(),
    )
    .expect("ranks and coefficients agree")
}

pub fn criterion_1(random_words: usize) -> Outcome {
    let mut checked = 0usize;
    for rank in 1..=3 {
        for len in 0..=6 {
            for w in all_words(rank, len) {
                let got = as_i64(&w.nil2_normalize());
                if got != collect_by_rewriting(&w.fg_reduce()) || got != collect_by_rewriting(&w) {
                    return Err(format!("{w}: collection gives {got:?}"));
                }
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..random_words {
        let rank = rng.gen_range(1..=3);
        let len = rng.gen_range(7..=40);
        let letters: Vec<(usize, i64)> =
            (0..len).map(|_| (rng.gen_range(0..rank), [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)])).collect();
        let w = FreeWord::new(rank, letters).map_err(e)?;
        let got = as_i64(&w.nil2_normalize());
        if got != collect_by_rewriting(&w.fg_reduce()) {
            return Err(format!("{w}: collection gives {got:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} words"))
}

/// Five categories with coefficients, of increasing size.
pub fn cochain_fixtures() -> Vec<(String, FinCategory, NaturalSystem)> {
    let mut out = Vec::new();
    let z2 = FinCategory::cyclic_group(2);
    out.push(("Z/2 with Z/2".into(), z2.clone(), NaturalSystem::constant(&z2, "Z/2".parse().unwrap())));
    let z3 = FinCategory::cyclic_group(3);
    out.push(("Z/3 with Z".into(), z3.clone(), NaturalSystem::constant(&z3, "Z".parse().unwrap())));
    let arrow = FinCategory::arrow();
    out.push(("arrow with Z/4".into(), arrow.clone(), NaturalSystem::constant(&arrow, "Z/4".parse().unwrap())));
    let cm = crossed_module(true);
    out.push(("sign crossed module".into(), cm.base().clone(), cm.system().clone()));
    let sm = SplitModel::new("Z+Z/2".parse().unwrap(), 2);
    out.push(("split model Z+Z/2, ranks ≤ 2".into(), sm.base().clone(), sm.system().clone()));
    out
}

pub fn criterion_2(per_degree: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for (name, c, d) in cochain_fixtures() {
        let cx = CochainComplex::new(&c, &d, 5);
        for n in 0..=3 {
            for _ in 0..per_degree {
                let s = cx.random(n, &mut rng, 7).map_err(e)?;
                let dd = cx.coboundary(&cx.coboundary(&s).map_err(e)?).map_err(e)?;
                if let Some((chain, v)) = cx.first_nonzero(&dd) {
                    return Err(format!("{name}, degree {n}: δδσ = {v:?} at {chain:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cochains on 5 categories"))
}

fn class_invariance<E: LinearExtension>(name: &str, ext: &E, perturbations: usize, sections: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cx = CochainComplex::new(ext.base(), ext.system(), 4);
    let s = random_section(ext, &mut rng).map_err(e)?;
    let z = extension_cocycle(ext, &cx, &s).map_err(e)?;
    if let Some((chain, v)) = cx.first_nonzero(&cx.coboundary(&z).map_err(e)?) {
        return Err(format!("{name}: δc_T = {v:?} at {chain:?}"));
    }
    for _ in 0..perturbations {
        let c = cx.random(2, &mut rng, 5).map_err(e)?;
        let moved = extension_cocycle(ext, &cx, &perturb(ext, &cx, &s, &c).map_err(e)?).map_err(e)?;
        let want = cx.add(&cx.coboundary(&c).map_err(e)?, &z).map_err(e)?;
        if moved != want {
            return Err(format!("{name}: c_T(t, H - c) ≠ δc + c_T(t, H)"));
        }
    }
    // classes compared by canonical remainders modulo coboundaries, and by
    // H^3 coordinates where the degree-4 cochains are few enough
    let lattice = BoundaryLattice::new(&cx, 3).map_err(e)?;
    let h3 = if cx.dim(4).map_err(e)? <= H3_LIMIT {
        Some(CohomologyGroup::compute(&cx, 3).map_err(e)?)
    } else {
        None
    };
    let coords = |z: &Cochain| -> Result<(Vec<i64>, Option<Vec<i64>>), String> {
        let key = lattice.key(&cx, z).map_err(e)?;
        let c = h3.as_ref().map(|h| h.class_coordinates(&cx, z)).transpose().map_err(e)?;
        Ok((key, c))
    };
    let first = coords(&z)?;
    for _ in 0..sections {
        let s2 = random_section(ext, &mut rng).map_err(e)?;
        let other = coords(&extension_cocycle(ext, &cx, &s2).map_err(e)?)?;
        if other != first {
            return Err(format!("{name}: class {:?} ≠ {:?} for another section", other.1, first.1));
        }
    }
    Ok(())
}

pub fn criterion_3(max_rank: usize, perturbations: usize, sections: usize) -> Outcome {
    let mut n = 0;
    for (i, m) in GROUPS.iter().enumerate() {
        let sm = SplitModel::new(m.parse().unwrap(), max_rank);
        class_invariance(&format!("split model over {m}"), &sm, perturbations, sections, i as u64)?;
        n += 1;
    }
    for (i, t) in table_fixtures().iter().enumerate() {
        class_invariance(t.name(), t, perturbations, sections, 10 + i as u64)?;
        class_invariance(&format!("{} (dual)", t.name()), &t.dualize(), perturbations, sections, 20 + i as u64)?;
        n += 2;
    }
    Ok(format!("{n} extensions, {perturbations} perturbations and {sections} extra sections each"))
}

/// `H^n(Z/k; A)` for trivial `A = Z/g` (`g = 0` for `Z`) from the periodic
/// resolution `.. → ZG --N--> ZG --(t-1)--> ZG → Z`: applying `Hom(-, A)`
/// gives `A --0--> A --k--> A --0--> ..`.
pub fn periodic_oracle(k: i64, g: i64, n: usize) -> String {
    let torsion = |d: i64| -> String {
        match d {
            0 => "Z".into(),
            1 => "0".into(),
            d => format!("Z/{d}"),
        }
    };
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    if n == 0 {
        return torsion(g);
    }
    // kernel of multiplication by k on Z/g (odd n), or cokernel (even n)
    match (g, n % 2) {
        (0, 1) => "0".into(),
        (0, _) => torsion(k),
        (g, _) => torsion(gcd(g, k)),
    }
}

pub fn criterion_4() -> Outcome {
    let c = FinCategory::cyclic_group(2);
    let d = NaturalSystem::constant(&c, "Z/2".parse().unwrap());
    let cx = CochainComplex::new(&c, &d, 4);
    let got = CohomologyGroup::compute(&cx, 3).map_err(e)?.presentation().to_string();
    let want = periodic_oracle(2, 2, 3);
    if got == want && want == "Z/2" {
        Ok(format!("H^3 = {got}"))
    } else {
        Err(format!("H^3 = {got}, oracle {want}"))
    }
}

fn solved<E: LinearExtension>(name: &str, ext: &E) -> Result<(), String> {
    let cx = CochainComplex::new(ext.base(), ext.system(), 3);
    match solve_pseudosection(ext, &cx).map_err(e)? {
        Pseudosection::Solved(s) => {
            let z = extension_cocycle(ext, &cx, &s).map_err(e)?;
            if let Some((chain, v)) = cx.first_nonzero(&z) {
                return Err(format!("{name}: Δ = {v:?} at {chain:?}"));
            }
            require(verify_pseudofunctor_section(ext, &s).map_err(e)?).map(drop)
        }
        Pseudosection::NoSolution { .. } => Err(format!("{name}: no pseudosection on a trivial-class fixture")),
    }
}

pub fn criterion_5(split_rank: usize) -> Outcome {
    let mut solved_count = 0;
    for m in GROUPS {
        solved(&format!("split model over {m}"), &SplitModel::new(m.parse().unwrap(), split_rank))?;
        solved_count += 1;
    }
    let mut negatives = 0;
    for t in table_fixtures().iter().flat_map(|t| [t.clone(), t.dualize()]) {
        if class_vanishes(&t).map_err(e)? {
            solved(t.name(), &t)?;
            solved_count += 1;
            continue;
        }
        let cx = CochainComplex::new(t.base(), t.system(), 3);
        let Pseudosection::NoSolution { .. } = solve_pseudosection(&t, &cx).map_err(e)? else {
            return Err(format!("{}: solved despite a nonzero class", t.name()));
        };
        if exhaustive_pseudosection(&t, 1 << 24).map_err(e)?.is_some() {
            return Err(format!("{}: exhaustive search found a pseudosection", t.name()));
        }
        negatives += 1;
    }
    let sign = crossed_module(true);
    if class_of(&sign).map_err(e)?.0.group != "Z/2" || negatives == 0 {
        return Err("the nontrivial Z/2 fixture was not certified".into());
    }
    Ok(format!("{solved_count} solved and verified, {negatives} certified NoSolution"))
}

pub fn criterion_6(samples: usize) -> Outcome {
    let grid = Grid::new(3, 4);
    let mut blocks = 0usize;
    let mut literal = String::new();
    for (i, m) in GROUPS.iter().enumerate() {
        for (j, f) in xi_maps().iter().enumerate() {
            let s = structure(m, f, (3 * i + j) as u64);
            let (r, stats) = verify_gamma_grid(&s, &grid, 6 + (3 * i + j) as u64, samples).map_err(e)?;
            require(r)?;
            blocks += stats.block_pairs;
            literal = stats.literal_pairs;
        }
    }
    Ok(format!("9 structures, {blocks} block pairs standing for {literal} literal pairs each"))
}

/// Columns and rows of the grid plus random grid homs of ranks ≥ 2.
pub fn uniqueness_alphas(random: usize, seed: u64) -> Vec<Nil2Hom> {
    let grid = Grid::new(3, 4);
    let mut out = Vec::new();
    for m in 1..=3 {
        out.extend(grid.columns(m));
        out.extend(grid.rows(m).into_iter().filter(|r| r.source() > 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let (n, m) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        out.push(grid.random_hom(n, m, &mut rng));
    }
    out
}

pub fn criterion_7(random: usize) -> Outcome {
    let mut perturbations = 0usize;
    for (i, m) in GROUPS.iter().enumerate() {
        let coeffs = nonzero_coefficients(&group(m));
        for (j, f) in xi_maps().iter().enumerate() {
            let s = structure(m, f, (3 * i + j) as u64);
            let alphas = uniqueness_alphas(random, 70 + (3 * i + j) as u64);
            let r = require(verify_uniqueness(&s, &alphas, &coeffs).map_err(e)?)?;
            perturbations += r.checks.iter().map(|c| c.checked).sum::<usize>();
        }
    }
    Ok(format!("{perturbations} single-entry perturbations, each violated"))
}

pub fn criterion_8(triples: usize) -> Outcome {
    let mut n = 0;
    for (i, m) in GROUPS.iter().enumerate() {
        for (j, f) in xi_maps().iter().enumerate() {
            let s = structure(m, f, (3 * i + j) as u64);
            require(verify_mu_algebra(&s, 5).map_err(e)?)?;
            require(verify_sum_formula(&s, &sample_homs()).map_err(e)?)?;
            require(verify_boxbox_associativity(&s, 80 + (3 * i + j) as u64, triples).map_err(e)?)?;
            n += 1;
        }
    }
    Ok(format!("{n} structures: μ products for |n|, |m| ≤ 5, sum formula, {triples} ⊠ triples"))
}

pub fn criterion_9(rank2_cases: usize) -> Outcome {
    let grid = Grid::new(3, 4);
    let alphas: Vec<Nil2Hom> = (1..=3).flat_map(|m| grid.columns(m).into_iter().chain(grid.rows(m))).collect();
    let mut n = 0;
    for m in GROUPS {
        let coeff = group(m);
        let obj = |seed: u64| WeakCogroup::twisted(coeff.clone(), 1, seed);
        let xis = [Nil2Hom::power(2), Nil2Hom::power(3)];
        for f in &xis {
            for g in &xis {
                let sf = CanonicalGamma::new(obj(1), obj(2), f.clone()).map_err(e)?;
                let sg = CanonicalGamma::new(obj(2), obj(3), g.clone()).map_err(e)?;
                let sgf = CanonicalGamma::new(obj(1), obj(3), g.compose(f).map_err(e)?).map_err(e)?;
                require(verify_naturality(&sf, &sg, &sgf, &alphas).map_err(e)?)?;
                n += 1;
            }
            let sf = CanonicalGamma::new(obj(1), obj(2), f.clone()).map_err(e)?;
            for psi in track_generators(f, f, &coeff) {
                require(verify_track_naturality(&sf, &sf, &psi, &alphas).map_err(e)?)?;
                n += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        let homs: Vec<Nil2Hom> = sample_homs().into_iter().filter(|h| h.source() <= 2 && h.target() <= 2).collect();
        let obj2 = |seed: u64| WeakCogroup::twisted(coeff.clone(), 2, seed);
        for _ in 0..rank2_cases {
            let f = random_hom(2, 2, &mut rng);
            let g = twist_centrally(&f, &mut rng);
            let h = random_hom(2, 2, &mut rng);
            let sf = CanonicalGamma::new(obj2(4), obj2(5), f.clone()).map_err(e)?;
            let sg = CanonicalGamma::new(obj2(4), obj2(5), g.clone()).map_err(e)?;
            let sh = CanonicalGamma::new(obj2(5), obj2(6), h.clone()).map_err(e)?;
            let shf = CanonicalGamma::new(obj2(4), obj2(6), h.compose(&f).map_err(e)?).map_err(e)?;
            require(verify_naturality(&sf, &sh, &shf, &homs).map_err(e)?)?;
            for psi in track_generators(&f, &g, &coeff) {
                require(verify_track_naturality(&sf, &sg, &psi, &homs).map_err(e)?)?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} naturality instances over {} grid operations", alphas.len()))
}

pub fn criterion_10(items: usize, pseudomodels: usize) -> Outcome {
    let homs = sample_homs();
    for (i, m) in GROUPS.iter().enumerate() {
        let pair = GammaFunctorPair::new(group(m), Theory::Nil2).map_err(e)?;
        require(pair.verify_round_trip(100 + i as u64, items).map_err(e)?)?;
    }
    for k in 0..pseudomodels {
        let m = GROUPS[k % 3];
        let pair = GammaFunctorPair::new(group(m), Theory::Nil2).map_err(e)?;
        let f = WeakCogroup::strict(group(m), 1 + k % 2).reduce(200 + k as u64).0;
        require(verify_unit_isomorphism(&pair, &f, &homs).map_err(e)?)?;
    }
    let mut applicable = 0;
    for t in table_fixtures().iter().flat_map(|t| [t.clone(), t.dualize()]) {
        let r = require(check_homotopy_determination(&t, 1 << 20).map_err(e)?)?;
        applicable += r.checks.iter().filter(|c| c.checked > 0).count();
    }
    if applicable == 0 {
        return Err("no table fixture has sums".into());
    }
    Ok(format!(
        "G T = 1 on {items} items per group, {pseudomodels} unit isomorphisms, homotopy determination on {applicable} fixtures with sums"
    ))
}

pub fn criterion_11() -> Outcome {
    let mut n = 0;
    for t in table_fixtures() {
        let dd: TableExtension = t.dualize().dualize();
        if dd.to_value() != t.to_value() {
            return Err(format!("{}: dualizing twice changes the table", t.name()));
        }
        let a = class_vanishes(&t).map_err(e)?;
        let b = class_vanishes(&t.dualize()).map_err(e)?;
        if a != b {
            return Err(format!("{}: class zero {a} but dual class zero {b}", t.name()));
        }
        n += 1;
    }
    Ok(format!("{n} table fixtures"))
}
