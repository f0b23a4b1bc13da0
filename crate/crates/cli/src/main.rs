//! `trackwork`: command-line front end.
//!
//! Exit codes: 0 success or all checks passed, 1 a verified negative
//! result, 2 unparseable input or usage, 3 input that fails validation.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trackwork::catcore::json::{parse_category_document, parse_value};
use trackwork::catcore::{AbGroupPresentation, CatError};
use trackwork::cohomology::{
    canonical_section, class_of, class_vanishes, extension_cocycle, section_to_value, solve_pseudosection,
    verify_pseudofunctor_section, CochainComplex, CohomologyError, CohomologyGroup, Pseudosection,
};
use trackwork::gamma::{
    interchange_track, sample_homs, verify_gamma_grid, verify_naturality, verify_unit_isomorphism, CanonicalGamma,
    GammaError, GammaFunctorPair, Grid, Theory, WeakCogroup,
};
use trackwork::nilgroup::{Nil2Element, Nil2Hom, NilError};
use trackwork::report::Report;
use trackwork::trackcat::{table_fixtures, LinearExtension, SplitModel, TableExtension, TrackError};

#[derive(Parser)]
#[command(name = "trackwork", version, about = "Additive track categories, their cohomology and Γ-structures")]
struct Cli {
    /// Render aligned text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Seed for every randomized step; echoed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Arithmetic in free class-2 nilpotent groups.
    #[command(subcommand)]
    Nil2(Nil2Cmd),
    /// Cohomology of a category with a natural system.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Linear track extensions.
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Weak cogroups and canonical Γ-structures.
    #[command(subcommand)]
    Gamma(GammaCmd),
}

#[derive(Subcommand)]
enum Nil2Cmd {
    /// Product of two elements.
    Mul {
        #[arg(long)]
        rank: usize,
        a: String,
        b: String,
    },
    /// Normal form `x^a ∏ [xi,xj]^c` of a word.
    Normalize {
        #[arg(long)]
        rank: usize,
        word: String,
    },
    /// `second ∘ first`; maps are written `SOURCE:TARGET:IMG;IMG;..`.
    Compose { first: String, second: String },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// `H^n(C, D)` as invariant factors.
    Group {
        input: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// `δσ` of a cochain document.
    Coboundary {
        input: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
    },
}

#[derive(Args)]
struct ExtensionInput {
    /// Table extension or split-model descriptor.
    input: Option<PathBuf>,
    /// Built-in table fixture instead of a file.
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// Sampled instances for split models.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum ExtensionCmd {
    /// Track-category and linear-extension axioms.
    Verify(ExtensionInput),
    /// Class in `H^3`.
    Class(ExtensionInput),
    /// A section with vanishing obstruction, or the class witness.
    Pseudosection(ExtensionInput),
    /// The dual table extension.
    Dualize(ExtensionInput),
}

#[derive(Args)]
struct GammaCommon {
    #[arg(long, default_value = "Z")]
    coefficients: String,
    /// Twist seed of the source cogroup; strict when absent.
    #[arg(long)]
    twist_x: Option<u64>,
    /// Twist seed of the target cogroup.
    #[arg(long)]
    twist_y: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Nil1,
    Nil2,
}

#[derive(Subcommand)]
enum GammaCmd {
    /// `Γ_α` for a map `f` and an operation `α`.
    Build {
        #[command(flatten)]
        common: GammaCommon,
        #[arg(long)]
        map: String,
        #[arg(long)]
        alpha: String,
    },
    /// Property (Γ) of the canonical structure on a word grid.
    Verify {
        #[command(flatten)]
        common: GammaCommon,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Naturality of canonical structures in composable `f`, `g`.
    Naturality {
        #[arg(long, default_value = "Z")]
        coefficients: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// `G T = 1` and the unit isomorphism.
    Equivalence {
        #[arg(long, default_value = "Z")]
        coefficients: String,
        #[arg(long, value_enum, default_value_t = TheoryArg::Nil2)]
        theory: TheoryArg,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// Failure before a result exists.
enum Failure {
    Parse(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) => m,
        }
    }
}

impl From<CatError> for Failure {
    fn from(e: CatError) -> Self {
        match e {
            CatError::Json { .. } | CatError::Group(_) => Failure::Parse(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<NilError> for Failure {
    fn from(e: NilError) -> Self {
        match e {
            NilError::Parse { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<TrackError> for Failure {
    fn from(e: TrackError) -> Self {
        match e {
            TrackError::Cat(c) => c.into(),
            TrackError::Nil(n) => n.into(),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::Track(t) => t.into(),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<GammaError> for Failure {
    fn from(e: GammaError) -> Self {
        match e {
            GammaError::Nil(n) => n.into(),
            GammaError::Track(t) => t.into(),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

/// A result document and whether it is positive.
struct Outcome {
    value: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn plain(value: Value) -> Self {
        let text = render(&value, 0);
        Outcome { value, text, ok: true }
    }

    fn report(r: Report) -> Self {
        let ok = r.passed();
        let text = r.to_text();
        Outcome {
            value: serde_json::to_value(&r).expect("reports serialize"),
            text,
            ok,
        }
    }
}

fn render(v: &Value, indent: usize) -> String {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            let mut out = String::new();
            for (k, x) in m {
                match x {
                    Value::Object(_) => out += &format!("{pad}{k}:\n{}", render(x, indent + 2)),
                    _ => out += &format!("{pad}{k:<width$}  {}\n", scalar(x)),
                }
            }
            out
        }
        _ => format!("{pad}{}\n", scalar(v)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn group(text: &str) -> Result<Arc<AbGroupPresentation>, Failure> {
    text.parse::<AbGroupPresentation>()
        .map(Arc::new)
        .map_err(|e| Failure::Parse(format!("--coefficients: {e}")))
}

fn map_spec(text: &str) -> Result<Nil2Hom, Failure> {
    let mut parts = text.splitn(3, ':');
    let bad = || Failure::Parse(format!("map {text:?}: expected SOURCE:TARGET:IMG;IMG;.."));
    let n: usize = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
    let m: usize = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
    let images: Vec<&str> = match parts.next() {
        Some(s) if !s.trim().is_empty() => s.split(';').map(str::trim).collect(),
        _ => Vec::new(),
    };
    if images.len() != n {
        return Err(Failure::Invalid(format!("map {text:?}: {n} images expected, {} given", images.len())));
    }
    Ok(Nil2Hom::parse(n, m, &images)?)
}

fn cogroup(coeff: &Arc<AbGroupPresentation>, rank: usize, twist: Option<u64>) -> WeakCogroup {
    match twist {
        Some(s) => WeakCogroup::twisted(coeff.clone(), rank, s),
        None => WeakCogroup::strict(coeff.clone(), rank),
    }
}

enum Model {
    Table(Box<TableExtension>),
    Split(Box<SplitModel>),
}

fn load_model(input: &ExtensionInput) -> Result<Model, Failure> {
    if let Some(name) = &input.fixture {
        return table_fixtures()
            .into_iter()
            .find(|t| t.name() == name)
            .map(|t| Model::Table(Box::new(t)))
            .ok_or_else(|| {
                let names: Vec<String> = table_fixtures().iter().map(|t| t.name().to_string()).collect();
                Failure::Parse(format!("unknown fixture {name:?}; known: {}", names.join(", ")))
            });
    }
    let path = input
        .input
        .as_ref()
        .ok_or_else(|| Failure::Parse("an input file or --fixture is required".into()))?;
    let v = parse_value(&read(path)?)?;
    if let Some(s) = v.get("split_model") {
        let coeff = s
            .get("coefficients")
            .and_then(Value::as_str)
            .ok_or_else(|| Failure::Invalid("/split_model/coefficients: expected a group".into()))?;
        let max_rank = s
            .get("max_rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Failure::Invalid("/split_model/max_rank: expected a nonnegative integer".into()))?;
        let coeff: AbGroupPresentation = coeff
            .parse()
            .map_err(|e: CatError| Failure::Invalid(format!("/split_model/coefficients: {e}")))?;
        return Ok(Model::Split(Box::new(SplitModel::new(coeff, max_rank as usize))));
    }
    Ok(Model::Table(Box::new(TableExtension::from_value(&v)?)))
}

fn class<E: LinearExtension>(ext: &E) -> Result<Outcome, Failure> {
    // a strict canonical section settles the zero class without H^3
    let cx = CochainComplex::new(ext.base(), ext.system(), 3);
    let z = extension_cocycle(ext, &cx, &canonical_section(ext)?)?;
    if cx.first_nonzero(&z).is_none() || class_vanishes(ext)? {
        return Ok(Outcome::plain(json!({"H3_class": "0"})));
    }
    let (c, _) = class_of(ext)?;
    Ok(Outcome::plain(
        json!({"H3_class": format!("{:?}", c.coordinates), "group": c.group, "coordinates": c.coordinates}),
    ))
}

fn pseudosection<E: LinearExtension>(ext: &E) -> Result<Outcome, Failure> {
    let cx = CochainComplex::new(ext.base(), ext.system(), 3);
    match solve_pseudosection(ext, &cx)? {
        Pseudosection::Solved(s) => {
            let r = verify_pseudofunctor_section(ext, &s)?;
            let ok = r.passed();
            let value = json!({"status": "solved", "section": section_to_value(ext, &s)?, "report": r});
            Ok(Outcome {
                text: format!("status  solved\n{}", r.to_text()),
                value,
                ok,
            })
        }
        Pseudosection::NoSolution { cocycle, key } => {
            let value = json!({
                "status": "no_solution",
                "class_witness": {"cocycle": cx.to_json(&cocycle), "key": key},
            });
            Ok(Outcome {
                text: render(&value, 0),
                value,
                ok: false,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let seed = cli.seed;
    match &cli.verb {
        Verb::Nil2(cmd) => match cmd {
            Nil2Cmd::Mul { rank, a, b } => {
                let x = Nil2Element::parse(*rank, a)?;
                let y = Nil2Element::parse(*rank, b)?;
                Ok(Outcome::plain(json!({"product": x.mul(&y)?.to_string()})))
            }
            Nil2Cmd::Normalize { rank, word } => {
                let x = Nil2Element::parse(*rank, word)?;
                Ok(Outcome::plain(json!({
                    "normal_form": x.to_string(),
                    "generator_exponents": x.gen_exp().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "commutator_exponents": x.comm_exp().iter().map(ToString::to_string).collect::<Vec<_>>(),
                })))
            }
            Nil2Cmd::Compose { first, second } => {
                let (f, g) = (map_spec(first)?, map_spec(second)?);
                let gf = g.compose(&f)?;
                Ok(Outcome::plain(json!({"source": gf.source(), "target": gf.target(), "images": gf.to_strings()})))
            }
        },
        Verb::Cohomology(cmd) => match cmd {
            CohomologyCmd::Group { input, degree } => {
                let (c, d) = parse_category_document(&read(input)?)?;
                let cx = CochainComplex::new(&c, &d, degree + 1);
                let h = CohomologyGroup::compute(&cx, *degree)?;
                let s = h.summary(&cx);
                Ok(Outcome {
                    text: format!("H^{} = {}\n", s.degree, s.group),
                    value: serde_json::to_value(&s).expect("summaries serialize"),
                    ok: true,
                })
            }
            CohomologyCmd::Coboundary { input, cochain } => {
                let (c, d) = parse_category_document(&read(input)?)?;
                let v = parse_value(&read(cochain)?)?;
                let degree = v.get("degree").and_then(Value::as_u64).unwrap_or(0) as usize;
                let cx = CochainComplex::new(&c, &d, degree + 1);
                let sigma = cx.from_json(&v)?;
                Ok(Outcome::plain(cx.to_json(&cx.coboundary(&sigma)?)))
            }
        },
        Verb::Extension(cmd) => match cmd {
            ExtensionCmd::Verify(input) => {
                let r = match load_model(input)? {
                    Model::Table(t) => t.verify()?,
                    Model::Split(s) => s.verify(seed, input.samples)?,
                };
                Ok(Outcome::report(r))
            }
            ExtensionCmd::Class(input) => match load_model(input)? {
                Model::Table(t) => class(&*t),
                Model::Split(s) => class(&*s),
            },
            ExtensionCmd::Pseudosection(input) => match load_model(input)? {
                Model::Table(t) => pseudosection(&*t),
                Model::Split(s) => pseudosection(&*s),
            },
            ExtensionCmd::Dualize(input) => match load_model(input)? {
                Model::Table(t) => Ok(Outcome::plain(t.dualize().to_value())),
                Model::Split(_) => Err(Failure::Invalid("dualize needs a table extension".into())),
            },
        },
        Verb::Gamma(cmd) => gamma(cmd, seed),
    }
}

fn gamma(cmd: &GammaCmd, seed: u64) -> Result<Outcome, Failure> {
    match cmd {
        GammaCmd::Build { common, map, alpha } => {
            let coeff = group(&common.coefficients)?;
            let f = map_spec(map)?;
            let a = map_spec(alpha)?;
            let s = CanonicalGamma::new(
                cogroup(&coeff, f.source(), common.twist_x),
                cogroup(&coeff, f.target(), common.twist_y),
                f.clone(),
            )?;
            let t = interchange_track(&s, &a)?;
            Ok(Outcome::plain(json!({
                "coefficients": coeff.to_string(),
                "map": f,
                "alpha": a,
                "source": t.source,
                "target": t.target,
                "gamma": t.coord,
            })))
        }
        GammaCmd::Verify {
            common,
            map,
            max_rank,
            max_length,
            samples,
        } => {
            let coeff = group(&common.coefficients)?;
            let f = map_spec(map)?;
            let s = CanonicalGamma::new(
                cogroup(&coeff, f.source(), common.twist_x),
                cogroup(&coeff, f.target(), common.twist_y),
                f,
            )?;
            let (r, stats) = verify_gamma_grid(&s, &Grid::new(*max_rank, *max_length), seed, *samples)?;
            let mut out = Outcome::report(r);
            out.value["grid"] = serde_json::to_value(&stats).expect("stats serialize");
            out.text += &render(&out.value["grid"], 0);
            Ok(out)
        }
        GammaCmd::Naturality { coefficients, f, g } => {
            let coeff = group(coefficients)?;
            let (f, g) = (map_spec(f)?, map_spec(g)?);
            let gf = g.compose(&f)?;
            let obj = |r| WeakCogroup::strict(coeff.clone(), r);
            let sf = CanonicalGamma::new(obj(f.source()), obj(f.target()), f.clone())?;
            let sg = CanonicalGamma::new(obj(g.source()), obj(g.target()), g.clone())?;
            let sgf = CanonicalGamma::new(obj(f.source()), obj(g.target()), gf)?;
            Ok(Outcome::report(verify_naturality(&sf, &sg, &sgf, &sample_homs())?))
        }
        GammaCmd::Equivalence {
            coefficients,
            theory,
            count,
        } => {
            let coeff = group(coefficients)?;
            let theory = match theory {
                TheoryArg::Nil1 => Theory::Nil1,
                TheoryArg::Nil2 => Theory::Nil2,
            };
            let pair = GammaFunctorPair::new(coeff.clone(), theory)?;
            let mut r = pair.verify_round_trip(seed, *count)?;
            let homs = sample_homs();
            for (i, rank) in [1usize, 2].into_iter().enumerate() {
                let f = WeakCogroup::strict(coeff.clone(), rank).reduce(seed.wrapping_add(i as u64)).0;
                r.merge(verify_unit_isomorphism(&pair, &f, &homs)?);
            }
            Ok(Outcome::report(r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.text {
                out.text.trim_end().to_string()
            } else {
                let mut v = out.value;
                // reports always carry the seed
                if let Some(m) = v.as_object_mut().filter(|m| m.contains_key("checks") || m.contains_key("report")) {
                    m.entry("seed").or_insert(json!(cli.seed));
                }
                serde_json::to_string(&v).expect("values serialize")
            };
            // a closed pipe is not an error
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
