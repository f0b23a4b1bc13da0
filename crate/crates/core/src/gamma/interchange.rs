//! Interchange structures and the canonical Γ-structure.

use std::collections::HashMap;
use std::sync::Mutex;

use super::cogroup::HomData;
use super::{GammaError, WeakCogroup};
use crate::catcore::CoeffMatrix;
use crate::linalg::IntMatrix;
use crate::nilgroup::{Nil2Element, Nil2Hom};
use crate::trackcat::{paste, PastingScheme, SplitModel, SplitTrack, Step};

/// An assignment `α ↦ Γ_α` for a map `f: X → Y` of weak cogroups.
pub trait InterchangeStructure {
    fn source(&self) -> &WeakCogroup;
    fn target(&self) -> &WeakCogroup;
    fn base_map(&self) -> &Nil2Hom;
    /// Coordinate of `Γ_α: f_m F_X(α) ⇒ F_Y(α) f_n`.
    fn gamma(&self, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError>;

    /// `ab(f)`.
    fn base_ab(&self) -> IntMatrix {
        self.base_map().abelianize().expect("ranks agree")
    }
}

/// `ab(∨_k f) = I_k ⊗ ab(f)`.
pub fn wedge_of(fab: &IntMatrix, k: usize) -> IntMatrix {
    IntMatrix::identity(k).kron(fab).expect("small")
}

fn check_pair<S: InterchangeStructure + ?Sized>(
    s: &S,
    beta: &Nil2Hom,
    gb: &CoeffMatrix,
    alpha: &Nil2Hom,
    ga: &CoeffMatrix,
) -> Result<(), GammaError> {
    let (rx, ry) = (s.source().rank(), s.target().rank());
    if beta.source() != alpha.target() {
        return Err(GammaError::Mismatch(format!(
            "β: {} → {} does not follow α: {} → {}",
            beta.source(),
            beta.target(),
            alpha.source(),
            alpha.target()
        )));
    }
    for (name, h, g) in [("Γ_β", beta, gb), ("Γ_α", alpha, ga)] {
        if g.rows() != h.target() * ry || g.cols() != h.source() * rx {
            return Err(GammaError::Mismatch(format!(
                "{name} is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                h.target() * ry,
                h.source() * rx
            )));
        }
    }
    Ok(())
}

/// `Γ_β ⊠ Γ_α`, a track `f_p F_X(βα) ⇒ F_Y(βα) f_n`:
///
/// `-F_p φ^X_{β,α} + Γ_β Ã_X + B̃_Y Γ_α + φ^Y_{β,α} F_n`
///
/// with `F_k = ab(∨_k f)`.
pub fn boxbox<S: InterchangeStructure + ?Sized>(
    s: &S,
    beta: &Nil2Hom,
    gb: &CoeffMatrix,
    alpha: &Nil2Hom,
    ga: &CoeffMatrix,
) -> Result<CoeffMatrix, GammaError> {
    check_pair(s, beta, gb, alpha, ga)?;
    let ba = beta.compose(alpha)?;
    boxbox_with(s, &s.base_ab(), beta, gb, alpha, ga, &ba)
}

/// [`boxbox`] with `ab(f)` and `βα` supplied and no shape checks.
pub(crate) fn boxbox_with<S: InterchangeStructure + ?Sized>(
    s: &S,
    fab: &IntMatrix,
    beta: &Nil2Hom,
    gb: &CoeffMatrix,
    alpha: &Nil2Hom,
    ga: &CoeffMatrix,
    ba: &Nil2Hom,
) -> Result<CoeffMatrix, GammaError> {
    let (x, y) = (s.source(), s.target());
    let parts = |c: &WeakCogroup| -> Result<_, GammaError> { Ok((c.hom_data(beta)?, c.hom_data(alpha)?, c.xi(ba))) };
    let (px, py) = (parts(x)?, parts(y)?);
    boxbox_from(s, fab, beta, gb, alpha, ga, (&px.0, &px.1, &px.2), (&py.0, &py.1, &py.2))
}

type Parts<'a> = (&'a HomData, &'a HomData, &'a CoeffMatrix);

/// [`boxbox`] from precomputed `(β data, α data, ξ_{βα})` of both cogroups.
#[allow(clippy::too_many_arguments)]
pub(crate) fn boxbox_from<S: InterchangeStructure + ?Sized>(
    s: &S,
    fab: &IntMatrix,
    beta: &Nil2Hom,
    gb: &CoeffMatrix,
    alpha: &Nil2Hom,
    ga: &CoeffMatrix,
    px: Parts,
    py: Parts,
) -> Result<CoeffMatrix, GammaError> {
    let (x, y) = (s.source(), s.target());
    let phi_x = x.compositor_from(beta, alpha, px.2, px.0, px.1)?;
    let phi_y = y.compositor_from(beta, alpha, py.2, py.0, py.1)?;
    let out = phi_y
        .right_mul(&wedge_of(fab, alpha.source()))?
        .sub(&phi_x.left_mul(&wedge_of(fab, beta.target()))?)?
        .add(&gb.right_mul(&px.1.tilde)?)?
        .add(&ga.left_mul(&py.0.tilde)?)?;
    Ok(out)
}

/// `Γ_α` as a typed track of the split model.
pub fn interchange_track<S: InterchangeStructure + ?Sized>(s: &S, alpha: &Nil2Hom) -> Result<SplitTrack, GammaError> {
    let f = s.base_map();
    Ok(SplitTrack {
        source: f.wedge_power(alpha.target()).compose(&s.source().map(alpha))?,
        target: s.target().map(alpha).compose(&f.wedge_power(alpha.source()))?,
        coord: s.gamma(alpha)?,
    })
}

/// `Γ_β ⊠ Γ_α` evaluated as a pasting of typed tracks: `(f_p)_* φ^X⊟`,
/// then `Γ_β` whiskered by `F_X(α)`, then `F_Y(β)_* Γ_α`, then `φ^Y`
/// whiskered by `f_n`. Every vertical composite is type-checked.
pub fn boxbox_typed<S: InterchangeStructure + ?Sized>(
    s: &S,
    beta: &Nil2Hom,
    tb: &SplitTrack,
    alpha: &Nil2Hom,
    ta: &SplitTrack,
) -> Result<SplitTrack, GammaError> {
    let (x, y, f) = (s.source(), s.target(), s.base_map());
    let model = SplitModel::new((**x.coeff()).clone(), 0);
    let inputs = [x.compositor_track(beta, alpha)?, tb.clone(), ta.clone(), y.compositor_track(beta, alpha)?];
    let mut p = PastingScheme::new();
    let k = inputs.len();
    let inv = p.push(k, Step::Invert(0));
    let a = p.push(k, Step::LeftWhisker { map: f.wedge_power(beta.target()), track: inv });
    let b = p.push(k, Step::RightWhisker { track: 1, map: x.map(alpha) });
    let c = p.push(k, Step::LeftWhisker { map: y.map(beta), track: 2 });
    let d = p.push(k, Step::RightWhisker { track: 3, map: f.wedge_power(alpha.source()) });
    let ab = p.push(k, Step::VerticalCompose { second: b, first: a });
    let abc = p.push(k, Step::VerticalCompose { second: c, first: ab });
    p.push(k, Step::VerticalCompose { second: d, first: abc });
    Ok(paste(&model, &p, &inputs)?)
}

/// The canonical Γ-structure of `f: X → Y`, built from additivity,
/// negative and multiplication tracks. Multiplication tracks are
/// memoized; general tracks are computed on demand.
#[derive(Debug)]
pub struct CanonicalGamma {
    x: WeakCogroup,
    y: WeakCogroup,
    f: Nil2Hom,
    fab: IntMatrix,
    mu: Mutex<HashMap<i64, CoeffMatrix>>,
}

impl Clone for CanonicalGamma {
    fn clone(&self) -> Self {
        CanonicalGamma {
            x: self.x.clone(),
            y: self.y.clone(),
            f: self.f.clone(),
            fab: self.fab.clone(),
            mu: Mutex::new(self.mu.lock().expect("memo").clone()),
        }
    }
}

impl CanonicalGamma {
    pub fn new(x: WeakCogroup, y: WeakCogroup, f: Nil2Hom) -> Result<Self, GammaError> {
        if f.source() != x.rank() || f.target() != y.rank() {
            return Err(GammaError::Mismatch(format!(
                "map {} → {} between objects of rank {} and {}",
                f.source(),
                f.target(),
                x.rank(),
                y.rank()
            )));
        }
        if x.coeff() != y.coeff() {
            return Err(GammaError::Mismatch(format!("coefficients {} and {}", x.coeff(), y.coeff())));
        }
        let fab = f.abelianize()?;
        Ok(CanonicalGamma {
            x,
            y,
            f,
            fab,
            mu: Mutex::new(HashMap::new()),
        })
    }

    fn zeros(&self, m: usize, n: usize) -> CoeffMatrix {
        CoeffMatrix::zeros(m * self.y.rank(), n * self.x.rank(), self.x.coeff().clone())
    }

    /// `F_p φ^X_{β,α} - φ^Y_{β,α} F_n`.
    fn correction(&self, beta: &Nil2Hom, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        let ba = beta.compose(alpha)?;
        let px = self.x.compositor_with(beta, alpha, &ba)?;
        let py = self.y.compositor_with(beta, alpha, &ba)?;
        Ok(px
            .left_mul(&wedge_of(&self.fab, beta.target()))?
            .sub(&py.right_mul(&wedge_of(&self.fab, alpha.source()))?)?)
    }

    /// `Γ_n: f_n α_n ⇒ α_n f`, the track whose restriction along each `r_e`
    /// is trivial: row block `e` is `F φ^X_{r_e,α_n} - φ^Y_{r_e,α_n} F`.
    pub fn additivity_track(&self, n: usize) -> Result<CoeffMatrix, GammaError> {
        let an = Nil2Hom::alpha(n);
        let mut out = self.zeros(n, 1);
        for e in 0..n {
            let block = self.correction(&Nil2Hom::retraction(n, e)?, &an)?;
            out.write_block(e * self.y.rank(), 0, &block);
        }
        Ok(out)
    }

    /// `μ_{-1}`: with `c = (1, ξ_{-1}): 2 → 1`, the unique track with
    /// `(0^□, μ_{-1}) ⊠ Γ_2 = 0^□`.
    pub fn negative_track(&self) -> Result<CoeffMatrix, GammaError> {
        self.multiplication_track(-1)
    }

    fn negative_uncached(&self) -> Result<CoeffMatrix, GammaError> {
        let c = negation_copair();
        let g2 = self.additivity_track(2)?;
        Ok(self
            .correction(&c, &Nil2Hom::alpha(2))?
            .sub(&g2.left_mul(&self.y.tilde(&c)?)?)?)
    }

    /// `μ_k: f ξ_k ⇒ ξ_k f`; `μ_n = Γ_{β_n} ⊠ Γ_n` and
    /// `μ_{-n} = μ_{-1} ⊠ μ_n`.
    pub fn multiplication_track(&self, k: i64) -> Result<CoeffMatrix, GammaError> {
        if let Some(m) = self.mu.lock().expect("memo").get(&k) {
            return Ok(m.clone());
        }
        let value = if k >= 0 {
            let n = usize::try_from(k).map_err(|_| GammaError::Overflow(k.to_string()))?;
            let (bn, an) = (Nil2Hom::beta(n), Nil2Hom::alpha(n));
            let gb = self.zeros(1, n);
            boxbox_with(self, &self.fab, &bn, &gb, &an, &self.additivity_track(n)?, &Nil2Hom::power(k))?
        } else if k == -1 {
            self.negative_uncached()?
        } else {
            let n = k.checked_neg().ok_or_else(|| GammaError::Overflow(k.to_string()))?;
            let neg = self.multiplication_track(-1)?;
            let mn = self.multiplication_track(n)?;
            boxbox_with(self, &self.fab, &Nil2Hom::power(-1), &neg, &Nil2Hom::power(n), &mn, &Nil2Hom::power(k))?
        };
        self.mu.lock().expect("memo").insert(k, value.clone());
        Ok(value)
    }

    /// `Γ_α` for `α: n → m`: the track whose `(g, e)` corestriction
    /// `(r_g)_* (i_e)^*` is `μ_{α(e,g)}`, corrected by compositors.
    pub fn general(&self, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        let (n, m) = (alpha.source(), alpha.target());
        if n == 1 && m == 1 {
            return self.multiplication_track(small(alpha.coefficient(0, 0))?);
        }
        if alpha.is_letter_map() {
            return Ok(self.zeros(m, n));
        }
        let (rx, ry) = (self.x.rank(), self.y.rank());
        let mut out = self.zeros(m, n);
        for g in 0..m {
            let rg = Nil2Hom::retraction(m, g)?;
            let gamma_g = rg.compose(alpha)?;
            let row = self.correction(&rg, alpha)?;
            for e in 0..n {
                let ie = Nil2Hom::inclusion(n, e)?;
                let block = self
                    .multiplication_track(small(alpha.coefficient(e, g))?)?
                    .add(&self.correction(&gamma_g, &ie)?)?
                    .add(&row.block(0, e * rx, ry, rx))?;
                out.write_block(g * ry, e * rx, &block);
            }
        }
        Ok(out)
    }
}

fn small(k: &crate::nilgroup::Int) -> Result<i64, GammaError> {
    k.to_i64()
        .filter(|v| v.unsigned_abs() <= 1 << 20)
        .ok_or_else(|| GammaError::Overflow(k.to_string()))
}

/// `(1, ξ_{-1}): 2 → 1`, `x1 ↦ x`, `x2 ↦ x⁻¹`.
pub(crate) fn negation_copair() -> Nil2Hom {
    Nil2Hom::new(
        2,
        1,
        vec![Nil2Element::from_i64(1, &[1], &[]).expect("rank"), Nil2Element::from_i64(1, &[-1], &[]).expect("rank")],
    )
    .expect("ranks")
}

impl InterchangeStructure for CanonicalGamma {
    fn source(&self) -> &WeakCogroup {
        &self.x
    }

    fn target(&self) -> &WeakCogroup {
        &self.y
    }

    fn base_map(&self) -> &Nil2Hom {
        &self.f
    }

    fn gamma(&self, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        self.general(alpha)
    }

    fn base_ab(&self) -> IntMatrix {
        self.fab.clone()
    }
}

/// `inner` with `Γ_α` replaced by `Γ_α + d` for one `α`.
pub struct Perturbed<'a, S: InterchangeStructure + ?Sized> {
    pub inner: &'a S,
    pub alpha: Nil2Hom,
    pub d: CoeffMatrix,
}

impl<S: InterchangeStructure + ?Sized> InterchangeStructure for Perturbed<'_, S> {
    fn source(&self) -> &WeakCogroup {
        self.inner.source()
    }

    fn target(&self) -> &WeakCogroup {
        self.inner.target()
    }

    fn base_map(&self) -> &Nil2Hom {
        self.inner.base_map()
    }

    fn gamma(&self, alpha: &Nil2Hom) -> Result<CoeffMatrix, GammaError> {
        let g = self.inner.gamma(alpha)?;
        if alpha == &self.alpha {
            Ok(g.add(&self.d)?)
        } else {
            Ok(g)
        }
    }

    fn base_ab(&self) -> IntMatrix {
        self.inner.base_ab()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catcore::AbGroupPresentation;
    use std::sync::Arc;

    fn coeff(s: &str) -> Arc<AbGroupPresentation> {
        Arc::new(s.parse().unwrap())
    }

    fn structure(m: &str, k: i64, sx: u64, sy: u64) -> CanonicalGamma {
        let c = coeff(m);
        CanonicalGamma::new(
            WeakCogroup::twisted(c.clone(), 1, sx),
            WeakCogroup::twisted(c, 1, sy),
            Nil2Hom::power(k),
        )
        .unwrap()
    }

    /// Independent closed form: `Γ_α = ξ^Y_α F_n - F_m ξ^X_α`.
    fn oracle(s: &CanonicalGamma, a: &Nil2Hom) -> CoeffMatrix {
        let fab = s.base_ab();
        s.target()
            .xi(a)
            .right_mul(&wedge_of(&fab, a.source()))
            .unwrap()
            .sub(&s.source().xi(a).left_mul(&wedge_of(&fab, a.target())).unwrap())
            .unwrap()
    }

    #[test]
    fn small_tracks_are_trivial() {
        let s = structure("Z/4", 2, 1, 2);
        assert!(s.multiplication_track(1).unwrap().is_zero());
        assert!(s.multiplication_track(0).unwrap().is_zero());
        assert!(s.additivity_track(1).unwrap().is_zero());
        assert_eq!(s.additivity_track(0).unwrap().rows(), 0);
        for h in SplitModel::letter_maps(2) {
            assert!(s.gamma(&h).unwrap().is_zero());
        }
    }

    #[test]
    fn construction_matches_closed_form() {
        for m in ["Z/2", "Z/4", "Z+Z/2"] {
            for k in [2, 3, -1] {
                let s = structure(m, k, 10, 20);
                for a in crate::gamma::sample_homs() {
                    assert_eq!(s.gamma(&a).unwrap(), oracle(&s, &a), "{m} ξ_{k} at {a:?}");
                }
                for j in -5..=5 {
                    assert_eq!(s.multiplication_track(j).unwrap(), oracle(&s, &Nil2Hom::power(j)));
                }
            }
        }
    }

    #[test]
    fn twisted_structures_have_nonzero_tracks() {
        let s = structure("Z/4", 3, 10, 20);
        let tracks: Vec<_> = (2..=5).map(|k| s.multiplication_track(k).unwrap()).collect();
        assert!(tracks.iter().any(|t| !t.is_zero()), "{tracks:?} {:?}", (2..=5).map(|k| s.source().xi(&Nil2Hom::power(k))).collect::<Vec<_>>());
    }

    #[test]
    fn typed_pasting_agrees_with_coordinates() {
        let c = coeff("Z/4");
        let s = CanonicalGamma::new(
            WeakCogroup::twisted(c.clone(), 2, 3),
            WeakCogroup::twisted(c, 1, 4),
            Nil2Hom::parse(2, 1, &["x1^2", "x1^-1"]).unwrap(),
        )
        .unwrap();
        let a = Nil2Hom::parse(1, 2, &["x1 x2^2"]).unwrap();
        let b = Nil2Hom::parse(2, 2, &["x2 x1", "x1^-1"]).unwrap();
        let t = boxbox_typed(&s, &b, &interchange_track(&s, &b).unwrap(), &a, &interchange_track(&s, &a).unwrap())
            .unwrap();
        let ba = b.compose(&a).unwrap();
        assert_eq!(t.source, s.base_map().wedge_power(2).compose(&s.source().map(&ba)).unwrap());
        let coord = boxbox(&s, &b, &s.gamma(&b).unwrap(), &a, &s.gamma(&a).unwrap()).unwrap();
        assert_eq!(t.coord, coord);
        assert_eq!(coord, s.gamma(&ba).unwrap());
    }

    #[test]
    fn perturbation_changes_one_track() {
        let s = structure("Z/2", 3, 1, 2);
        let a = Nil2Hom::power(2);
        let mut d = CoeffMatrix::zeros(1, 1, s.source().coeff().clone());
        d.set(0, 0, &[1]);
        let p = Perturbed { inner: &s, alpha: a.clone(), d };
        assert_ne!(p.gamma(&a).unwrap(), s.gamma(&a).unwrap());
        assert_eq!(p.gamma(&Nil2Hom::power(3)).unwrap(), s.gamma(&Nil2Hom::power(3)).unwrap());
    }

    #[test]
    fn shape_errors_are_reported() {
        let s = structure("Z/2", 2, 1, 2);
        let z = CoeffMatrix::zeros(1, 1, s.source().coeff().clone());
        assert!(boxbox(&s, &Nil2Hom::alpha(2), &z, &Nil2Hom::power(2), &z).is_err());
        assert!(CanonicalGamma::new(
            WeakCogroup::strict(coeff("Z/2"), 2),
            WeakCogroup::strict(coeff("Z/2"), 1),
            Nil2Hom::power(2)
        )
        .is_err());
    }
}
