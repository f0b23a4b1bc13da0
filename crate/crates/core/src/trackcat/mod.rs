//! Track categories and linear track extensions.
//!
//! Two representations share the [`TrackExtension`] interface:
//!
//! * [`SplitModel`]: maps are nil₂ homomorphisms, a track `u ⇒ v` exists
//!   when `u` and `v` have the same abelianization and is an `M`-valued
//!   matrix. Vertical composition adds matrices; whiskering multiplies by
//!   abelianizations.
//! * [`TableExtension`]: finite track sets with explicit composition,
//!   whisker and `σ` tables.
//!
//! Tracks are written `source ⇒ target`. `vcomp(b, a)` is `b □ a` (first
//! `a`), `whisker_left(k, t)` is `k_* t` and `whisker_right(t, h)` is
//! `h^* t`.

mod fixtures;
mod pasting;
mod split;
mod table;

pub use fixtures::{arrow_trivial, crossed_module, letter_export, table_fixtures};
pub use pasting::{paste, PastingScheme, Step};
pub use split::{random_hom, twist_centrally, MatrixCategory, SplitModel, SplitTrack};
pub use table::{Sum, SumKind, TableExtension, TableParts, TableTrack, MAX_GROUP_ORDER, MAX_MAPS};

use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::catcore::{CatError, FinCategory, MorId, NaturalSystem};
use crate::linalg::LinalgError;
use crate::nilgroup::NilError;
use crate::report::Report;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("no track between {0}")]
    NoTrack(String),
    #[error("not a self-track: {0}")]
    NotSelfTrack(String),
    #[error("outside the model: {0}")]
    Outside(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pasting step {step}: {message}")]
    Pasting { step: usize, message: String },
    #[error("{path}: {message}")]
    Structure { path: String, message: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

impl TrackError {
    pub(crate) fn structure(path: impl Into<String>, message: impl Into<String>) -> Self {
        TrackError::Structure {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// A category enriched in groupoids.
pub trait TrackExtension {
    type Map: Clone + PartialEq + std::fmt::Debug;
    type Track: Clone + PartialEq + std::fmt::Debug;

    /// `f ∘ g`.
    fn compose(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map, TrackError>;
    fn source_of(&self, t: &Self::Track) -> Self::Map;
    fn target_of(&self, t: &Self::Track) -> Self::Map;
    /// `0^□` on `f`.
    fn identity_track(&self, f: &Self::Map) -> Self::Track;
    /// `second □ first`.
    fn vcomp(&self, second: &Self::Track, first: &Self::Track) -> Result<Self::Track, TrackError>;
    fn inverse(&self, t: &Self::Track) -> Self::Track;
    /// `k_* t`.
    fn whisker_left(&self, k: &Self::Map, t: &Self::Track) -> Result<Self::Track, TrackError>;
    /// `h^* t`.
    fn whisker_right(&self, t: &Self::Track, h: &Self::Map) -> Result<Self::Track, TrackError>;
    fn describe_map(&self, f: &Self::Map) -> Value;
    fn describe_track(&self, t: &Self::Track) -> Value;
}

/// A track extension of a finite category `C` by a natural system `D`.
pub trait LinearExtension: TrackExtension {
    fn base(&self) -> &FinCategory;
    fn system(&self) -> &NaturalSystem;
    /// `p(f)`, or `None` when `f` lies over no morphism of the base.
    fn project(&self, f: &Self::Map) -> Option<MorId>;
    /// Deterministic lift: the first preimage in the model's order.
    fn canonical_lift(&self, f: MorId) -> Self::Map;
    fn random_lift(&self, f: MorId, rng: &mut dyn rand::RngCore) -> Self::Map;
    /// A deterministic track `f ⇒ g`, if one exists.
    fn some_track(&self, f: &Self::Map, g: &Self::Map) -> Option<Self::Track>;
    /// `σ_f(a)`.
    fn sigma(&self, f: &Self::Map, a: &[i64]) -> Result<Self::Track, TrackError>;
    /// `σ_f^{-1}` on a self-track of `f`.
    fn sigma_inv(&self, t: &Self::Track) -> Result<Vec<i64>, TrackError>;
}

/// Horizontal composite `β α: g0 f0 ⇒ g1 f1` of `α: f0 ⇒ f1` and
/// `β: g0 ⇒ g1`, as `(g1)_* α □ f0^* β`.
pub fn hcomp<E: TrackExtension + ?Sized>(
    ext: &E,
    beta: &E::Track,
    alpha: &E::Track,
) -> Result<E::Track, TrackError> {
    let g1 = ext.target_of(beta);
    let f0 = ext.source_of(alpha);
    let a = ext.whisker_left(&g1, alpha)?;
    let b = ext.whisker_right(beta, &f0)?;
    ext.vcomp(&a, &b)
}

/// A uniformly random track `f ⇒ g`: a deterministic one shifted by a
/// random element of `D(pf)`.
pub fn random_track<E: LinearExtension + ?Sized>(
    ext: &E,
    f: &E::Map,
    g: &E::Map,
    rng: &mut dyn rand::RngCore,
) -> Result<E::Track, TrackError> {
    let base = ext
        .some_track(f, g)
        .ok_or_else(|| TrackError::NoTrack(format!("{} and {}", ext.describe_map(f), ext.describe_map(g))))?;
    let p = ext
        .project(g)
        .ok_or_else(|| TrackError::Outside(ext.describe_map(g).to_string()))?;
    let grp = ext.system().group(p);
    let a: Vec<i64> = (0..grp.dim())
        .map(|k| match grp.modulus(k) {
            0 => rng.gen_range(-3..=3),
            d => rng.gen_range(0..d),
        })
        .collect();
    let s = ext.sigma(g, &a)?;
    ext.vcomp(&s, &base)
}

/// Checks the linear-extension axioms that every representation shares on
/// a list of sample maps.
pub(crate) fn check_sigma_axioms<E: LinearExtension + ?Sized>(
    ext: &E,
    maps: &[E::Map],
    report: &mut Report,
) -> Result<(), TrackError> {
    let base = ext.base();
    let sys = ext.system();
    // σ is a homomorphism onto the self-tracks and commutes with tracks
    {
        let chk = report.check("σ_f is a group isomorphism D(pf) → Track(f, f)");
        for f in maps {
            let Some(p) = ext.project(f) else { continue };
            let grp = sys.group(p);
            let gens = grp.generators();
            for a in &gens {
                for b in &gens {
                    let lhs = ext.vcomp(&ext.sigma(f, a)?, &ext.sigma(f, b)?)?;
                    let rhs = ext.sigma(f, &grp.add(a, b))?;
                    chk.record((lhs != rhs).then(|| {
                        serde_json::json!({"map": ext.describe_map(f), "a": a, "b": b})
                    }));
                }
                let back = ext.sigma_inv(&ext.sigma(f, a)?)?;
                chk.record((grp.reduce(&back) != grp.reduce(a)).then(|| {
                    serde_json::json!({"map": ext.describe_map(f), "a": a, "sigma_inv": back})
                }));
            }
        }
    }
    {
        let chk = report.check("σ_f(a) □ H = H □ σ_g(a)");
        for f in maps {
            for g in maps {
                let Some(h) = ext.some_track(f, g) else { continue };
                let p = ext.project(f).expect("tracked maps project");
                for a in sys.group(p).generators() {
                    let lhs = ext.vcomp(&ext.sigma(g, &a)?, &h)?;
                    let rhs = ext.vcomp(&h, &ext.sigma(f, &a)?)?;
                    chk.record((lhs != rhs).then(|| {
                        serde_json::json!({"f": ext.describe_map(f), "g": ext.describe_map(g), "a": a})
                    }));
                }
            }
        }
    }
    {
        let chk = report.check("g^* σ_f(a) = σ_{fg}(g^* a) and f_* σ_g(b) = σ_{fg}(f_* b)");
        for f in maps {
            for g in maps {
                let Ok(fg) = ext.compose(f, g) else { continue };
                let (Some(pf), Some(pg)) = (ext.project(f), ext.project(g)) else { continue };
                for a in sys.group(pf).generators() {
                    let lhs = ext.whisker_right(&ext.sigma(f, &a)?, g)?;
                    let rhs = ext.sigma(&fg, &sys.pull(base, pf, pg, &a))?;
                    chk.record((lhs != rhs).then(|| {
                        serde_json::json!({"f": ext.describe_map(f), "g": ext.describe_map(g), "pull": a})
                    }));
                }
                for b in sys.group(pg).generators() {
                    let lhs = ext.whisker_left(f, &ext.sigma(g, &b)?)?;
                    let rhs = ext.sigma(&fg, &sys.push(base, pf, pg, &b))?;
                    chk.record((lhs != rhs).then(|| {
                        serde_json::json!({"f": ext.describe_map(f), "g": ext.describe_map(g), "push": b})
                    }));
                }
            }
        }
    }
    Ok(())
}

/// Homotopy category of an extension.
#[derive(Debug, Clone)]
pub enum HomotopyCategory {
    /// Integer matrices; the finite truncation has ranks up to `max_rank`.
    IntegerMatrices { max_rank: usize, truncation: FinCategory },
    Finite(FinCategory),
}

impl HomotopyCategory {
    /// The finite category used as a cohomology base.
    pub fn category(&self) -> &FinCategory {
        match self {
            HomotopyCategory::IntegerMatrices { truncation, .. } => truncation,
            HomotopyCategory::Finite(c) => c,
        }
    }
}

/// A linear track extension in either representation.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum LinearTrackExtension {
    Split(SplitModel),
    Table(TableExtension),
}

impl LinearTrackExtension {
    pub fn name(&self) -> String {
        match self {
            LinearTrackExtension::Split(m) => format!("split model over {} up to rank {}", m.coeff(), m.max_rank()),
            LinearTrackExtension::Table(t) => t.name().to_string(),
        }
    }

    /// Axiom check: sampled on split models, exhaustive on tables.
    pub fn verify(&self, seed: u64, samples: usize) -> Result<Report, TrackError> {
        match self {
            LinearTrackExtension::Split(m) => m.verify(seed, samples),
            LinearTrackExtension::Table(t) => t.verify(),
        }
    }

    pub fn verify_strict_coproducts(&self, seed: u64, samples: usize) -> Result<Report, TrackError> {
        match self {
            LinearTrackExtension::Split(m) => m.verify_strict_coproducts(seed, samples),
            LinearTrackExtension::Table(t) => Ok(t.verify_strict_coproducts()),
        }
    }

    /// Only tables dualize; export a split model with [`letter_export`]
    /// first.
    pub fn dualize(&self) -> Result<LinearTrackExtension, TrackError> {
        match self {
            LinearTrackExtension::Split(_) => Err(TrackError::Unsupported(
                "split models cannot be dualized; export a table first".into(),
            )),
            LinearTrackExtension::Table(t) => Ok(LinearTrackExtension::Table(t.dualize())),
        }
    }

    pub fn homotopy_quotient(&self) -> HomotopyCategory {
        match self {
            LinearTrackExtension::Split(m) => HomotopyCategory::IntegerMatrices {
                max_rank: m.max_rank(),
                truncation: m.truncation().category().clone(),
            },
            LinearTrackExtension::Table(t) => HomotopyCategory::Finite(t.homotopy_quotient()),
        }
    }

    /// A table document, or `{"split_model": {"coefficients": "Z/4", "max_rank": 3}}`.
    pub fn from_value(v: &Value) -> Result<Self, TrackError> {
        if let Some(s) = v.get("split_model") {
            let coeff = s
                .get("coefficients")
                .and_then(Value::as_str)
                .ok_or_else(|| TrackError::structure("/split_model/coefficients", "expected a group such as \"Z/4\""))?
                .parse()
                .map_err(|e: crate::catcore::CatError| TrackError::structure("/split_model/coefficients", e.to_string()))?;
            let max_rank = s
                .get("max_rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| TrackError::structure("/split_model/max_rank", "expected a positive integer"))?;
            if !(1..=4).contains(&max_rank) {
                return Err(TrackError::structure("/split_model/max_rank", "must lie in 1..=4"));
            }
            return Ok(LinearTrackExtension::Split(SplitModel::new(coeff, max_rank as usize)));
        }
        TableExtension::from_value(v).map(LinearTrackExtension::Table)
    }

    pub fn to_value(&self) -> Value {
        match self {
            LinearTrackExtension::Split(m) => serde_json::json!({
                "split_model": {"coefficients": m.coeff().to_string(), "max_rank": m.max_rank()}
            }),
            LinearTrackExtension::Table(t) => t.to_value(),
        }
    }
}
