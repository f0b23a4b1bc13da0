//! Verifiers for interchange structures.
//!
//! The grid of homs has ranks `≤ R` and generator images of word length
//! `≤ L`. Even for `R = 3, L = 4` it has about `4·10^17` composable pairs,
//! so the grid check rests on a block reduction: for an interchange
//! structure that is trivial on letter maps, has associative compositors
//! and satisfies property (Γ) on the pairs `(i_e, γ)` and `(γ, r_g)`, the
//! `(g, e)` block of the defect
//!
//! `Γ_β ⊠ Γ_α - Γ_{βα}`
//!
//! equals the defect of the pair `(α i_e, r_g β)`. Both factors are again
//! grid homs, of shape `1 → m` and `m → 1`, and those pairs are checked
//! exhaustively. The hypotheses are checked on samples and a random sample
//! of literal grid pairs is checked directly.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::interchange::{boxbox_from, negation_copair};
use super::{boxbox, boxbox_typed, interchange_track, CanonicalGamma, GammaError, InterchangeStructure, Perturbed};
use crate::catcore::{AbGroupPresentation, CoeffMatrix};
use crate::nilgroup::{Nil2Element, Nil2Hom};
use crate::report::Report;
use crate::trackcat::{paste, PastingScheme, SplitTrack, Step};

/// Distinct elements of the free nil₂ group of rank `rank` that are
/// represented by a word of length `≤ len`, shortest first.
pub fn words_up_to(rank: usize, len: usize) -> Vec<Nil2Element> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    // frontier of reduced words, stored with their last letter
    let id = Nil2Element::identity(rank);
    seen.insert(id.clone());
    out.push(id.clone());
    let letters: Vec<(usize, i64, Nil2Element)> = (0..rank)
        .flat_map(|g| {
            let x = Nil2Element::generator(rank, g).expect("in range");
            [(g, 1, x.clone()), (g, -1, x.inv())]
        })
        .collect();
    let mut frontier: Vec<(Option<(usize, i64)>, Nil2Element)> = vec![(None, id)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (last, w) in &frontier {
            for (g, e, x) in &letters {
                if *last == Some((*g, -*e)) {
                    continue;
                }
                let v = w.mul(x).expect("rank");
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
                next.push((Some((*g, *e)), v));
            }
        }
        frontier = next;
    }
    out
}

/// The grid of nil₂ homs with ranks `≤ max_rank` and images of word
/// length `≤ max_length`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub max_rank: usize,
    pub max_length: usize,
    words: Vec<Vec<Nil2Element>>,
}

impl Grid {
    pub fn new(max_rank: usize, max_length: usize) -> Self {
        Grid {
            max_rank,
            max_length,
            words: (0..=max_rank).map(|r| words_up_to(r, max_length)).collect(),
        }
    }

    /// Grid elements of rank `m`.
    pub fn words(&self, m: usize) -> &[Nil2Element] {
        &self.words[m]
    }

    pub fn hom_count(&self, n: usize, m: usize) -> u128 {
        (self.words[m].len() as u128).pow(n as u32)
    }

    /// Number of composable pairs `(α, β)` in the grid.
    pub fn literal_pairs(&self) -> u128 {
        let r = self.max_rank;
        let mut total = 0u128;
        for n in 0..=r {
            for m in 0..=r {
                for p in 0..=r {
                    total = total.saturating_add(self.hom_count(n, m).saturating_mul(self.hom_count(m, p)));
                }
            }
        }
        total
    }

    /// All grid homs `1 → m`.
    pub fn columns(&self, m: usize) -> Vec<Nil2Hom> {
        self.words[m]
            .iter()
            .map(|w| Nil2Hom::new(1, m, vec![w.clone()]).expect("rank"))
            .collect()
    }

    /// All grid homs `m → 1`.
    pub fn rows(&self, m: usize) -> Vec<Nil2Hom> {
        self.homs(m, 1, usize::MAX)
    }

    /// Grid homs `n → m` in odometer order, at most `limit` of them.
    pub fn homs(&self, n: usize, m: usize, limit: usize) -> Vec<Nil2Hom> {
        let w = &self.words[m];
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            if out.len() >= limit {
                break;
            }
            out.push(Nil2Hom::new(n, m, idx.iter().map(|&i| w[i].clone()).collect()).expect("rank"));
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < w.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
        out
    }

    pub fn random_hom(&self, n: usize, m: usize, rng: &mut impl Rng) -> Nil2Hom {
        let w = &self.words[m];
        Nil2Hom::new(n, m, (0..n).map(|_| w.choose(rng).expect("nonempty").clone()).collect()).expect("rank")
    }

    /// Number of block pairs `(α: 1 → m, β: m → 1)`.
    pub fn reduced_pairs(&self) -> usize {
        (0..=self.max_rank).map(|m| self.words[m].len() * self.words[1].len().pow(m as u32)).sum()
    }
}

/// Summary numbers of a grid run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GridStats {
    pub literal_pairs: String,
    pub block_pairs: usize,
    pub sampled_pairs: usize,
    pub hypothesis_instances: usize,
}

/// Memoizes `Γ_α` of an inner structure.
pub struct Cached<'a, S: InterchangeStructure + ?Sized> {
    inner: &'a S,
    memo: Mutex<HashMap<Nil2Hom, CoeffMatrix>>,
}

impl<'a, S: InterchangeStructure + ?Sized> Cached<'a, S> {
    pub fn new(inner: &'a S) -> Self {
        Cached {
            inner,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl<S: InterchangeStructure + ?Sized> InterchangeStructure for Cached<'_, S> {
    fn source(&self) -> &super::WeakCogroup {
        self.inner.source()
    }

    fn target(&self) -> &super::WeakCogroup {
        self.inner.target()
    }

    fn base_map(&self) -> &Nil2Hom {
        self.inner.base_map()
    }

    fn gamma(&self, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        if let Some(g) = self.memo.lock().expect("memo").get(alpha) {
            return Ok(g.clone());
        }
        let g = self.inner.gamma(alpha)?;
        self.memo.lock().expect("memo").insert(alpha.clone(), g.clone());
        Ok(g)
    }

    fn base_ab(&self) -> crate::linalg::IntMatrix {
        self.inner.base_ab()
    }
}

fn first_difference(found: &CoeffMatrix, expected: &CoeffMatrix) -> Value {
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            let (a, b) = (found.get(i, j), expected.get(i, j));
            if a != b {
                return json!({"row": i, "col": j, "pasted": a, "expected": b});
            }
        }
    }
    json!(null)
}

/// Defect of property (Γ) at `(α, β)`, as a violation witness.
fn gamma_violation<S: InterchangeStructure + ?Sized>(
    s: &S,
    alpha: &Nil2Hom,
    beta: &Nil2Hom,
) -> Result<Option<Value>, GammaError> {
    let ba = beta.compose(alpha)?;
    let lhs = boxbox(s, beta, &s.gamma(beta)?, alpha, &s.gamma(alpha)?)?;
    let rhs = s.gamma(&ba)?;
    Ok((lhs != rhs).then(|| {
        json!({
            "alpha": alpha.to_strings(),
            "beta": beta.to_strings(),
            "first_violation": first_difference(&lhs, &rhs),
        })
    }))
}

const PROPERTY: &str = "Γ_β ⊠ Γ_α = Γ_{βα}";

/// Property (Γ) on every pair `(α, β)` of `pairs`; witnesses carry the
/// first differing coordinate.
pub fn verify_property_gamma<S: InterchangeStructure + ?Sized>(
    s: &S,
    pairs: &[(Nil2Hom, Nil2Hom)],
) -> Result<Report, GammaError> {
    let cached = Cached::new(s);
    let mut r = Report::new(format!("property (Γ) for {}", describe(s)));
    let chk = r.check(PROPERTY);
    for (a, b) in pairs {
        chk.record(gamma_violation(&cached, a, b)?);
    }
    Ok(r)
}

fn describe<S: InterchangeStructure + ?Sized>(s: &S) -> String {
    format!(
        "f = {} over {}",
        s.base_map().to_strings().join(", "),
        s.source().coeff()
    )
}

/// Property (Γ) on the whole grid via the block reduction, plus
/// `samples` random literal grid pairs.
pub fn verify_gamma_grid<S: InterchangeStructure + ?Sized>(
    s: &S,
    grid: &Grid,
    seed: u64,
    samples: usize,
) -> Result<(Report, GridStats), GammaError> {
    let cached = Cached::new(s);
    let fab = s.base_ab();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new(format!(
        "property (Γ) on the grid of ranks ≤ {} and image length ≤ {} for {}",
        grid.max_rank,
        grid.max_length,
        describe(s)
    ))
    .with_seed(seed);
    {
        let chk = r.check(format!("{PROPERTY} on every block pair (α: 1 → m, β: m → 1)"));
        for m in 0..=grid.max_rank {
            let (x, y) = (s.source(), s.target());
            let rows: Vec<_> = grid
                .rows(m)
                .into_iter()
                .map(|b| -> Result<_, GammaError> {
                    let g = cached.gamma(&b)?;
                    let (dx, dy) = (x.hom_data(&b)?, y.hom_data(&b)?);
                    Ok((b, g, dx, dy))
                })
                .collect::<Result<_, _>>()?;
            for a in grid.columns(m) {
                let ga = cached.gamma(&a)?;
                let (ax, ay) = (x.hom_data(&a)?, y.hom_data(&a)?);
                for (b, gb, bx, by) in &rows {
                    let ba = b.compose(&a)?;
                    let (xx, xy) = (x.xi(&ba), y.xi(&ba));
                    let lhs = boxbox_from(&cached, &fab, b, gb, &a, &ga, (bx, &ax, &xx), (by, &ay, &xy))?;
                    let rhs = cached.gamma(&ba)?;
                    chk.record((lhs != rhs).then(|| {
                        json!({"alpha": a.to_strings(), "beta": b.to_strings(), "first_violation": first_difference(&lhs, &rhs)})
                    }));
                }
            }
        }
    }
    let hyp;
    {
        // sampled homs and composites of grid homs, which leave the grid
        let mut homs = Vec::new();
        for _ in 0..samples.max(1) {
            let (n, m, p) = (
                rng.gen_range(1..=grid.max_rank),
                rng.gen_range(1..=grid.max_rank),
                rng.gen_range(1..=grid.max_rank),
            );
            let a = grid.random_hom(n, m, &mut rng);
            let b = grid.random_hom(m, p, &mut rng);
            homs.push(b.compose(&a)?);
            homs.push(a);
        }
        let chk = r.check(format!("{PROPERTY} at (i_e, γ) and (γ, r_g) for sampled γ and composites"));
        for g in &homs {
            for e in 0..g.source() {
                chk.record(gamma_violation(&cached, &Nil2Hom::inclusion(g.source(), e)?, g)?);
            }
            for k in 0..g.target() {
                chk.record(gamma_violation(&cached, g, &Nil2Hom::retraction(g.target(), k)?)?);
            }
        }
        let chk = r.check("φ_{γβ,α} □ (Fα)^* φ_{γ,β} = φ_{γ,βα} □ (Fγ)_* φ_{β,α} for both cogroups on sampled triples");
        for _ in 0..samples.max(1) {
            let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=grid.max_rank)).collect();
            let a = grid.random_hom(dims[0], dims[1], &mut rng);
            let b = grid.random_hom(dims[1], dims[2], &mut rng);
            let c = grid.random_hom(dims[2], dims[3], &mut rng);
            for x in [s.source(), s.target()] {
                let lhs = x
                    .compositor(&c.compose(&b)?, &a)?
                    .add(&x.compositor(&c, &b)?.right_mul(&x.tilde(&a)?)?)?;
                let rhs = x
                    .compositor(&c, &b.compose(&a)?)?
                    .add(&x.compositor(&b, &a)?.left_mul(&x.tilde(&c)?)?)?;
                chk.record((lhs != rhs).then(|| json!({"triple": [c.to_strings(), b.to_strings(), a.to_strings()]})));
            }
        }
        hyp = r.checks[1].checked + r.checks[2].checked;
    }
    {
        let chk = r.check(format!("{PROPERTY} on random literal grid pairs"));
        for _ in 0..samples {
            let (n, m, p) = (
                rng.gen_range(0..=grid.max_rank),
                rng.gen_range(0..=grid.max_rank),
                rng.gen_range(0..=grid.max_rank),
            );
            let a = grid.random_hom(n, m, &mut rng);
            let b = grid.random_hom(m, p, &mut rng);
            chk.record(gamma_violation(&cached, &a, &b)?);
        }
    }
    let stats = GridStats {
        literal_pairs: grid.literal_pairs().to_string(),
        block_pairs: grid.reduced_pairs(),
        sampled_pairs: samples,
        hypothesis_instances: hyp,
    };
    Ok((r, stats))
}

/// Nonzero coefficients used for perturbations: every nonzero element of
/// a finite group; for infinite groups the elements with free
/// coordinates in `{-1, 0, 1, 2}`, any torsion coordinates, and not all
/// zero.
pub fn nonzero_coefficients(m: &AbGroupPresentation) -> Vec<Vec<i64>> {
    if let Some(all) = m.elements() {
        return all.into_iter().filter(|v| !m.is_zero(v)).collect();
    }
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for k in 0..m.dim() {
        let d = m.modulus(k);
        let range: Vec<i64> = if d == 0 { vec![-1, 0, 1, 2] } else { (0..d).collect() };
        out = out
            .into_iter()
            .flat_map(|v| {
                range.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().filter(|v| !m.is_zero(v)).collect()
}

/// A grid pair whose property-(Γ) instance sees `Γ_α` at block `(g, e)`
/// through a factor other than `Γ_{βα}`.
fn witness_pair(alpha: &Nil2Hom, g: usize, e: usize) -> Result<Option<(Nil2Hom, Nil2Hom)>, GammaError> {
    let (n, m) = (alpha.source(), alpha.target());
    Ok(if m >= 2 {
        Some((alpha.clone(), Nil2Hom::retraction(m, g)?))
    } else if m == 1 && n >= 2 {
        Some((Nil2Hom::inclusion(n, e)?, alpha.clone()))
    } else if m == 1 && n == 1 {
        Some((Nil2Hom::inclusion(2, 0)?, alpha.copair(&Nil2Hom::zero(1, 1))?))
    } else {
        None
    })
}

/// Perturbs each `Γ_α` entrywise by each coefficient of `coefficients`
/// and looks for a property-(Γ) violation of the perturbed structure.
pub fn verify_uniqueness<S: InterchangeStructure + ?Sized>(
    s: &S,
    alphas: &[Nil2Hom],
    coefficients: &[Vec<i64>],
) -> Result<Report, GammaError> {
    let cached = Cached::new(s);
    let (rx, ry) = (s.source().rank(), s.target().rank());
    let coeff = s.source().coeff().clone();
    let mut r = Report::new(format!("uniqueness of the Γ-structure for {}", describe(s)));
    let chk = r.check("every single-entry perturbation of one Γ_α violates property (Γ) on a grid pair");
    for a in alphas {
        let (n, m) = (a.source(), a.target());
        for i in 0..m * ry {
            for j in 0..n * rx {
                let pair = witness_pair(a, i / ry, j / rx)?;
                for c in coefficients {
                    let mut d = CoeffMatrix::zeros(m * ry, n * rx, coeff.clone());
                    d.set(i, j, c);
                    let p = Perturbed {
                        inner: &cached,
                        alpha: a.clone(),
                        d,
                    };
                    let violated = match &pair {
                        Some((x, y)) => gamma_violation(&p, x, y)?.is_some(),
                        None => false,
                    };
                    chk.record((!violated).then(|| json!({"alpha": a.to_strings(), "entry": [i, j], "coefficient": c})));
                }
            }
        }
    }
    Ok(r)
}

/// μ-algebra, the negative-track equation and trivial tracks.
pub fn verify_mu_algebra(s: &CanonicalGamma, bound: i64) -> Result<Report, GammaError> {
    let mut r = Report::new(format!("multiplication tracks for {}", describe(s)));
    {
        let chk = r.check(format!("μ_n ⊠ μ_m = μ_{{nm}} = μ_m ⊠ μ_n for |n|, |m| ≤ {bound}"));
        for n in -bound..=bound {
            for m in -bound..=bound {
                let (xn, xm) = (Nil2Hom::power(n), Nil2Hom::power(m));
                let (mn, mm) = (s.multiplication_track(n)?, s.multiplication_track(m)?);
                let target = s.multiplication_track(n * m)?;
                let a = boxbox(s, &xn, &mn, &xm, &mm)?;
                let b = boxbox(s, &xm, &mm, &xn, &mn)?;
                chk.record((a != target || b != target).then(|| json!({"n": n, "m": m})));
            }
        }
    }
    {
        let chk = r.check("μ_0 = μ_1 = 0^□ and Γ vanishes on identities and the trivial hom");
        for t in [
            s.multiplication_track(0)?,
            s.multiplication_track(1)?,
            s.gamma(&Nil2Hom::identity(2))?,
            s.gamma(&Nil2Hom::identity(3))?,
            s.gamma(&Nil2Hom::zero(2, 3))?,
        ] {
            chk.record((!t.is_zero()).then(|| json!({"track": t})));
        }
    }
    r.merge(verify_negative_track(s)?);
    Ok(r)
}

/// `(0^□, μ_{-1}) ⊠ Γ_2 = 0^□` and the additivity restrictions.
pub fn verify_negative_track(s: &CanonicalGamma) -> Result<Report, GammaError> {
    let mut r = Report::new("negative and additivity tracks");
    let (rx, ry) = (s.source().rank(), s.target().rank());
    {
        let chk = r.check("(0^□, μ_{-1}) ⊠ Γ_2 = 0^□");
        let c = negation_copair();
        let mut gc = CoeffMatrix::zeros(ry, 2 * rx, s.source().coeff().clone());
        gc.write_block(0, rx, &s.negative_track()?);
        let v = boxbox(s, &c, &gc, &Nil2Hom::alpha(2), &s.additivity_track(2)?)?;
        chk.record((!v.is_zero()).then(|| json!({"pasting": v})));
    }
    {
        let chk = r.check("Γ_n restricts to the trivial track along every r_e");
        for n in 0..=4 {
            let gn = s.additivity_track(n)?;
            for e in 0..n {
                let re = Nil2Hom::retraction(n, e)?;
                let v = boxbox(s, &re, &s.gamma(&re)?, &Nil2Hom::alpha(n), &gn)?;
                chk.record((!v.is_zero()).then(|| json!({"n": n, "e": e + 1, "restriction": v})));
            }
        }
    }
    Ok(r)
}

/// `Γ_{α ∨ β} = Γ_α ∨ Γ_β` and `Γ_{(α, β)} = (Γ_α, Γ_β)` on all pairs of `homs`.
pub fn verify_sum_formula<S: InterchangeStructure + ?Sized>(s: &S, homs: &[Nil2Hom]) -> Result<Report, GammaError> {
    let cached = Cached::new(s);
    let mut r = Report::new(format!("sum formula for {}", describe(s)));
    {
        let chk = r.check("Γ_{α ∨ β} = Γ_α ∨ Γ_β");
        for a in homs {
            for b in homs {
                let w = cached.gamma(&a.wedge(b))?;
                let d = cached.gamma(a)?.direct_sum(&cached.gamma(b)?);
                chk.record((w != d).then(|| json!({"alpha": a.to_strings(), "beta": b.to_strings()})));
            }
        }
    }
    {
        let chk = r.check("Γ_{(α, β)} = (Γ_α, Γ_β)");
        for a in homs {
            for b in homs.iter().filter(|b| b.target() == a.target()) {
                let w = cached.gamma(&a.copair(b)?)?;
                let (ga, gb) = (cached.gamma(a)?, cached.gamma(b)?);
                let ok = w.block(0, 0, ga.rows(), ga.cols()) == ga && w.block(0, ga.cols(), gb.rows(), gb.cols()) == gb;
                chk.record((!ok).then(|| json!({"alpha": a.to_strings(), "beta": b.to_strings()})));
            }
        }
    }
    Ok(r)
}

/// `(Γ_γ ⊠ Γ_β) ⊠ Γ_α = Γ_γ ⊠ (Γ_β ⊠ Γ_α)` for random interchange tracks
/// on random composable triples.
pub fn verify_boxbox_associativity<S: InterchangeStructure + ?Sized>(
    s: &S,
    seed: u64,
    count: usize,
) -> Result<Report, GammaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rx, ry) = (s.source().rank(), s.target().rank());
    let coeff = s.source().coeff().clone();
    let model = crate::trackcat::SplitModel::new((*coeff).clone(), 0);
    let mut r = Report::new(format!("associativity of ⊠ for {}", describe(s))).with_seed(seed);
    let chk = r.check("(Γ_γ ⊠ Γ_β) ⊠ Γ_α = Γ_γ ⊠ (Γ_β ⊠ Γ_α)");
    for _ in 0..count {
        let d: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let a = crate::trackcat::random_hom(d[0], d[1], &mut rng);
        let b = crate::trackcat::random_hom(d[1], d[2], &mut rng);
        let c = crate::trackcat::random_hom(d[2], d[3], &mut rng);
        let mut t = |h: &Nil2Hom| model.random_coord(h.target() * ry, h.source() * rx, &mut rng, 5);
        let (ta, tb, tc) = (t(&a), t(&b), t(&c));
        let left = boxbox(s, &c.compose(&b)?, &boxbox(s, &c, &tc, &b, &tb)?, &a, &ta)?;
        let right = boxbox(s, &c, &tc, &b.compose(&a)?, &boxbox(s, &b, &tb, &a, &ta)?)?;
        chk.record((left != right).then(|| {
            json!({"triple": [c.to_strings(), b.to_strings(), a.to_strings()], "first_violation": first_difference(&left, &right)})
        }));
    }
    Ok(r)
}

/// Diagram (9): `g_* Γ^f_α` followed by `Γ^g_α` whiskered by `f_n` is
/// `Γ^{gf}_α`, as typed tracks.
pub fn verify_naturality<F, G, H>(f: &F, g: &G, gf: &H, alphas: &[Nil2Hom]) -> Result<Report, GammaError>
where
    F: InterchangeStructure + ?Sized,
    G: InterchangeStructure + ?Sized,
    H: InterchangeStructure + ?Sized,
{
    let mut r = Report::new(format!("naturality in maps: {} and g = {}", describe(f), g.base_map().to_strings().join(", ")));
    let model = crate::trackcat::SplitModel::new((**f.source().coeff()).clone(), 0);
    let chk = r.check("pasting of g_* Γ^f_α and (f_n)^* Γ^g_α equals Γ^{gf}_α");
    for a in alphas {
        let inputs = [interchange_track(f, a)?, interchange_track(g, a)?];
        let mut p = PastingScheme::new();
        let x = p.push(2, Step::LeftWhisker { map: g.base_map().wedge_power(a.target()), track: 0 });
        let y = p.push(2, Step::RightWhisker { track: 1, map: f.base_map().wedge_power(a.source()) });
        p.push(2, Step::VerticalCompose { second: y, first: x });
        let pasted = paste(&model, &p, &inputs)?;
        let expected = interchange_track(gf, a)?;
        chk.record((pasted != expected).then(|| {
            json!({"alpha": a.to_strings(), "first_violation": first_difference(&pasted.coord, &expected.coord)})
        }));
    }
    Ok(r)
}

/// `ψ_n = ∨_n ψ`.
pub(crate) fn wedge_track(psi: &SplitTrack, n: usize) -> SplitTrack {
    let (rows, cols) = (psi.coord.rows(), psi.coord.cols());
    let mut c = CoeffMatrix::zeros(n * rows, n * cols, psi.coord.coeff().clone());
    for k in 0..n {
        c.write_block(k * rows, k * cols, &psi.coord);
    }
    SplitTrack {
        source: psi.source.wedge_power(n),
        target: psi.target.wedge_power(n),
        coord: c,
    }
}

/// Diagram (10): for `ψ: f ⇒ g`, `(ψ_m)⊟` whiskered by `F_X(α)`, then
/// `Γ^f_α`, then `F_Y(α)_* ψ_n` is `Γ^g_α`.
pub fn verify_track_naturality<F, G>(f: &F, g: &G, psi: &SplitTrack, alphas: &[Nil2Hom]) -> Result<Report, GammaError>
where
    F: InterchangeStructure + ?Sized,
    G: InterchangeStructure + ?Sized,
{
    if &psi.source != f.base_map() || &psi.target != g.base_map() {
        return Err(GammaError::Mismatch("ψ does not run from f to g".into()));
    }
    let mut r = Report::new(format!("naturality in tracks: {} and g = {}", describe(f), g.base_map().to_strings().join(", ")));
    let model = crate::trackcat::SplitModel::new((**f.source().coeff()).clone(), 0);
    let chk = r.check("pasting of ψ_m⊟, Γ^f_α and ψ_n equals Γ^g_α");
    for a in alphas {
        let inputs = [wedge_track(psi, a.target()), wedge_track(psi, a.source()), interchange_track(f, a)?];
        let mut p = PastingScheme::new();
        let inv = p.push(3, Step::Invert(0));
        let x = p.push(3, Step::RightWhisker { track: inv, map: f.source().map(a) });
        let y = p.push(3, Step::VerticalCompose { second: 2, first: x });
        let z = p.push(3, Step::LeftWhisker { map: f.target().map(a), track: 1 });
        p.push(3, Step::VerticalCompose { second: z, first: y });
        let pasted = paste(&model, &p, &inputs)?;
        let expected = interchange_track(g, a)?;
        chk.record((pasted != expected).then(|| {
            json!({"alpha": a.to_strings(), "psi": psi.coord, "first_violation": first_difference(&pasted.coord, &expected.coord)})
        }));
    }
    Ok(r)
}

/// Generating set of tracks `f ⇒ g`: the zero coordinate plus every
/// single entry set to a generator of `M`.
pub fn track_generators(f: &Nil2Hom, g: &Nil2Hom, coeff: &std::sync::Arc<AbGroupPresentation>) -> Vec<SplitTrack> {
    let mut out = vec![SplitTrack {
        source: f.clone(),
        target: g.clone(),
        coord: CoeffMatrix::zeros(f.target(), f.source(), coeff.clone()),
    }];
    for i in 0..f.target() {
        for j in 0..f.source() {
            for gen in coeff.generators() {
                let mut c = CoeffMatrix::zeros(f.target(), f.source(), coeff.clone());
                c.set(i, j, &gen);
                out.push(SplitTrack {
                    source: f.clone(),
                    target: g.clone(),
                    coord: c,
                });
            }
        }
    }
    out
}

/// Typed pasting of diagram (6) on sampled pairs agrees with the
/// coordinate formula.
pub fn verify_typed_boxbox<S: InterchangeStructure + ?Sized>(s: &S, pairs: &[(Nil2Hom, Nil2Hom)]) -> Result<Report, GammaError> {
    let mut r = Report::new(format!("typed pasting of ⊠ for {}", describe(s)));
    let chk = r.check("typed pasting of Γ_β ⊠ Γ_α agrees with its coordinates and has the right boundary");
    for (a, b) in pairs {
        let t = boxbox_typed(s, b, &interchange_track(s, b)?, a, &interchange_track(s, a)?)?;
        let expected = interchange_track(s, &b.compose(a)?)?;
        let coord = boxbox(s, b, &s.gamma(b)?, a, &s.gamma(a)?)?;
        let ok = t.source == expected.source && t.target == expected.target && t.coord == coord;
        chk.record((!ok).then(|| json!({"alpha": a.to_strings(), "beta": b.to_strings()})));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::WeakCogroup;
    use std::sync::Arc;

    #[test]
    fn word_counts() {
        let counts: Vec<usize> = (0..=3).map(|r| words_up_to(r, 4).len()).collect();
        assert_eq!(counts, vec![1, 9, 135, 859]);
        assert_eq!(words_up_to(2, 2).len(), 1 + 4 + 12);
    }

    #[test]
    fn grid_sizes() {
        let g = Grid::new(3, 4);
        assert_eq!(g.reduced_pairs(), 1 + 81 + 135 * 81 + 859 * 729);
        assert!(g.literal_pairs() > 100_000_000_000_000_000);
        assert_eq!(g.homs(2, 1, usize::MAX).len(), 81);
        assert_eq!(g.rows(2).len(), 81);
        assert_eq!(g.columns(2).len(), 135);
    }

    fn structure(m: &str, k: i64) -> CanonicalGamma {
        let c: Arc<AbGroupPresentation> = Arc::new(m.parse().unwrap());
        CanonicalGamma::new(WeakCogroup::twisted(c.clone(), 1, 31), WeakCogroup::twisted(c, 1, 47), Nil2Hom::power(k))
            .unwrap()
    }

    #[test]
    fn small_grid_passes() {
        let s = structure("Z/4", 2);
        let (r, stats) = verify_gamma_grid(&s, &Grid::new(2, 2), 1, 50).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(stats.block_pairs, 1 + 25 + 17 * 25);
    }

    #[test]
    fn perturbed_structure_is_caught() {
        let s = structure("Z/2", 3);
        let a = Nil2Hom::parse(1, 2, &["x1 x2^2"]).unwrap();
        let mut d = CoeffMatrix::zeros(2, 1, s.source().coeff().clone());
        d.set(1, 0, &[1]);
        let p = Perturbed { inner: &s, alpha: a.clone(), d };
        let r = verify_gamma_grid(&p, &Grid::new(2, 3), 1, 10).unwrap().0;
        assert!(!r.passed());
        let w = &r.checks[0].witnesses[0];
        assert!(w["first_violation"]["row"].is_number());
    }

    #[test]
    fn mu_algebra_and_negative_track() {
        for m in ["Z/2", "Z/4", "Z+Z/2"] {
            let r = verify_mu_algebra(&structure(m, -1), 5).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn uniqueness_on_small_maps() {
        let s = structure("Z/4", 2);
        let alphas: Vec<Nil2Hom> = Grid::new(2, 2).homs(1, 2, 20).into_iter().chain([Nil2Hom::power(3), Nil2Hom::beta(2)]).collect();
        let r = verify_uniqueness(&s, &alphas, &nonzero_coefficients(s.source().coeff())).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.checks[0].checked > 20);
    }

    #[test]
    fn nonzero_coefficients_cover_groups() {
        assert_eq!(nonzero_coefficients(&"Z/4".parse().unwrap()).len(), 3);
        assert_eq!(nonzero_coefficients(&"Z+Z/2".parse().unwrap()).len(), 7);
    }

    #[test]
    fn sum_formula_and_associativity() {
        let s = structure("Z+Z/2", 2);
        let homs = crate::gamma::sample_homs();
        assert!(verify_sum_formula(&s, &homs[..12]).unwrap().passed());
        assert!(verify_boxbox_associativity(&s, 3, 20).unwrap().passed());
    }

    #[test]
    fn naturality_in_maps_and_tracks() {
        let c: Arc<AbGroupPresentation> = Arc::new("Z/4".parse().unwrap());
        let (x, y, z) = (
            WeakCogroup::twisted(c.clone(), 1, 1),
            WeakCogroup::twisted(c.clone(), 1, 2),
            WeakCogroup::twisted(c.clone(), 1, 3),
        );
        let f = CanonicalGamma::new(x.clone(), y.clone(), Nil2Hom::power(2)).unwrap();
        let g = CanonicalGamma::new(y, z.clone(), Nil2Hom::power(3)).unwrap();
        let gf = CanonicalGamma::new(x, z, Nil2Hom::power(6)).unwrap();
        let alphas = vec![Nil2Hom::alpha(2), Nil2Hom::power(-2), Nil2Hom::parse(2, 2, &["x1 x2", "x2^2 x1"]).unwrap()];
        assert!(verify_naturality(&f, &g, &gf, &alphas).unwrap().passed());
        for psi in track_generators(f.base_map(), f.base_map(), &c) {
            assert!(verify_track_naturality(&f, &f, &psi, &alphas).unwrap().passed());
        }
    }

    #[test]
    fn naturality_failure_is_reported() {
        let c: Arc<AbGroupPresentation> = Arc::new("Z+Z/2".parse().unwrap());
        let x = WeakCogroup::twisted(c.clone(), 1, 1);
        let f = CanonicalGamma::new(x.clone(), x.clone(), Nil2Hom::power(2)).unwrap();
        let wrong = CanonicalGamma::new(x.clone(), WeakCogroup::twisted(c, 1, 9), Nil2Hom::power(4)).unwrap();
        let r = verify_naturality(&f, &f, &wrong, &[Nil2Hom::power(3), Nil2Hom::alpha(2)]).unwrap();
        assert!(!r.passed());
    }
}
