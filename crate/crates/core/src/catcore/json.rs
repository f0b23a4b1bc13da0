//! JSON documents for categories with natural systems.
//!
//! ```json
//! {
//!   "objects": ["X", "Y"],
//!   "morphisms": [{"id": "f", "src": "X", "tgt": "Y"}, ...],
//!   "identities": {"X": "1X", "Y": "1Y"},
//!   "compose": [["g", "f", "fg"], ...],
//!   "natural_system": {"constant": "Z/2"}
//! }
//! ```
//!
//! A composition triple `[g, f, h]` reads "first `g`, then `f`", i.e.
//! `f ∘ g = h`. Composites with identities may be omitted.
//!
//! The natural system is one of
//! * `{"constant": "<group>"}`: identity actions;
//! * `{"groups": {"<mor>": "<group>", ...}, "push": [...], "pull": [...]}`
//!   where each action entry is `{"f": .., "g": .., "matrix": [[..]]}`
//!   giving `f_*: D(g) → D(fg)` (push) or `g^*: D(f) → D(fg)` (pull);
//!   omitted actions are identities (zero between groups of different
//!   dimension);
//! * `{"bimodule": {"coefficients": "<group>", "matrices": {"<mor>": [[..]]}}}`.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use super::{AbGroupPresentation, CatError, CategoryBuilder, FinCategory, NaturalSystem};
use crate::linalg::IntMatrix;

fn err(path: &str, msg: impl Into<String>) -> CatError {
    CatError::structure(path, msg)
}

pub(crate) fn get<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, CatError> {
    v.get(key)
        .ok_or_else(|| err(path, format!("missing field {key:?}")))
}

pub(crate) fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, CatError> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

pub(crate) fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CatError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

pub(crate) fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CatError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

pub(crate) fn as_int(v: &Value, path: &str) -> Result<i64, CatError> {
    v.as_i64().ok_or_else(|| err(path, "expected an integer"))
}

pub(crate) fn as_matrix(v: &Value, path: &str) -> Result<IntMatrix, CatError> {
    let rows = as_array(v, path)?;
    let mut data = Vec::new();
    let mut cols = None;
    for (i, r) in rows.iter().enumerate() {
        let rp = format!("{path}/{i}");
        let r = as_array(r, &rp)?;
        match cols {
            None => cols = Some(r.len()),
            Some(c) if c != r.len() => return Err(err(&rp, "ragged matrix row")),
            _ => {}
        }
        for (j, x) in r.iter().enumerate() {
            data.push(as_int(x, &format!("{rp}/{j}"))?);
        }
    }
    IntMatrix::from_vec(rows.len(), cols.unwrap_or(0), data).map_err(|e| err(path, e.to_string()))
}

pub(crate) fn as_group(v: &Value, path: &str) -> Result<AbGroupPresentation, CatError> {
    as_str(v, path)?
        .parse()
        .map_err(|e: CatError| err(path, e.to_string()))
}

/// Parses text into a JSON value, reporting line and column on failure.
pub fn parse_value(text: &str) -> Result<Value, CatError> {
    serde_json::from_str(text).map_err(|e| CatError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Reads the category part of a document located at `base`.
pub fn category_from_value(v: &Value, base: &str) -> Result<FinCategory, CatError> {
    let mut b = CategoryBuilder::new();
    let p = format!("{base}/objects");
    for (i, o) in as_array(get(v, base, "objects")?, &p)?.iter().enumerate() {
        b.object(as_str(o, &format!("{p}/{i}"))?);
    }
    let p = format!("{base}/morphisms");
    for (i, m) in as_array(get(v, base, "morphisms")?, &p)?.iter().enumerate() {
        let mp = format!("{p}/{i}");
        b.morphism(
            as_str(get(m, &mp, "id")?, &format!("{mp}/id"))?,
            as_str(get(m, &mp, "src")?, &format!("{mp}/src"))?,
            as_str(get(m, &mp, "tgt")?, &format!("{mp}/tgt"))?,
        );
    }
    let p = format!("{base}/identities");
    for (o, m) in as_object(get(v, base, "identities")?, &p)? {
        b.identity(o, as_str(m, &format!("{p}/{o}"))?);
    }
    if let Some(c) = v.get("compose") {
        let p = format!("{base}/compose");
        for (i, t) in as_array(c, &p)?.iter().enumerate() {
            let tp = format!("{p}/{i}");
            let t = as_array(t, &tp)?;
            if t.len() != 3 {
                return Err(err(&tp, "composition entries are [g, f, gf] triples"));
            }
            b.composite(
                as_str(&t[0], &format!("{tp}/0"))?,
                as_str(&t[1], &format!("{tp}/1"))?,
                as_str(&t[2], &format!("{tp}/2"))?,
            );
        }
    }
    b.build().map_err(|e| match e {
        CatError::Structure { path, message } if !base.is_empty() => CatError::Structure {
            path: format!("{base}{path}"),
            message,
        },
        other => other,
    })
}

fn morphism(c: &FinCategory, v: &Value, path: &str) -> Result<usize, CatError> {
    let id = as_str(v, path)?;
    c.find_morphism(id)
        .ok_or_else(|| err(path, format!("unknown morphism {id:?}")))
}

/// Reads a natural system description over `c`.
pub fn natural_system_from_value(
    c: &FinCategory,
    v: &Value,
    path: &str,
) -> Result<NaturalSystem, CatError> {
    if let Some(g) = v.get("constant") {
        return Ok(NaturalSystem::constant(c, as_group(g, &format!("{path}/constant"))?));
    }
    if let Some(bm) = v.get("bimodule") {
        let bp = format!("{path}/bimodule");
        let coeff = as_group(get(bm, &bp, "coefficients")?, &format!("{bp}/coefficients"))?;
        let mp = format!("{bp}/matrices");
        let given = as_object(get(bm, &bp, "matrices")?, &mp)?;
        let mut mats = Vec::with_capacity(c.morphism_count());
        for f in 0..c.morphism_count() {
            let id = c.morphism_id(f);
            let m = given
                .get(id)
                .ok_or_else(|| err(&mp, format!("no matrix for morphism {id:?}")))?;
            mats.push(as_matrix(m, &format!("{mp}/{id}"))?);
        }
        return Ok(NaturalSystem::bimodule(coeff, mats));
    }
    let gp = format!("{path}/groups");
    let given = as_object(get(v, path, "groups")?, &gp)?;
    let mut groups = Vec::with_capacity(c.morphism_count());
    for f in 0..c.morphism_count() {
        let id = c.morphism_id(f);
        let g = given
            .get(id)
            .ok_or_else(|| err(&gp, format!("no group for morphism {id:?}")))?;
        groups.push(as_group(g, &format!("{gp}/{id}"))?);
    }
    let mut tables: [HashMap<(usize, usize), IntMatrix>; 2] = [HashMap::new(), HashMap::new()];
    for (slot, key) in ["push", "pull"].iter().enumerate() {
        let Some(list) = v.get(*key) else { continue };
        let lp = format!("{path}/{key}");
        for (i, e) in as_array(list, &lp)?.iter().enumerate() {
            let ep = format!("{lp}/{i}");
            let f = morphism(c, get(e, &ep, "f")?, &format!("{ep}/f"))?;
            let g = morphism(c, get(e, &ep, "g")?, &format!("{ep}/g"))?;
            if c.compose(f, g).is_none() {
                return Err(err(&ep, "f and g are not composable"));
            }
            let m = as_matrix(get(e, &ep, "matrix")?, &format!("{ep}/matrix"))?;
            tables[slot].insert((f, g), m);
        }
    }
    let [push, pull] = tables;
    Ok(NaturalSystem::from_tables(groups, push, pull))
}

/// Parses a category document with its natural system.
pub fn parse_category_document(text: &str) -> Result<(FinCategory, NaturalSystem), CatError> {
    let v = parse_value(text)?;
    let c = category_from_value(&v, "")?;
    let d = match v.get("natural_system") {
        Some(ns) => natural_system_from_value(&c, ns, "/natural_system")?,
        None => NaturalSystem::constant(&c, AbGroupPresentation::trivial()),
    };
    Ok((c, d))
}

/// Category fields of a document.
pub fn category_to_value(c: &FinCategory) -> Value {
    let morphisms: Vec<Value> = c
        .morphisms()
        .iter()
        .map(|m| json!({"id": m.id, "src": c.object_id(m.src), "tgt": c.object_id(m.tgt)}))
        .collect();
    let identities: Map<String, Value> = (0..c.object_count())
        .map(|o| (c.object_id(o).to_string(), json!(c.morphism_id(c.identity(o)))))
        .collect();
    let mut compose = Vec::new();
    for f in 0..c.morphism_count() {
        for &g in c.into_object(c.src(f)) {
            if c.is_identity(f) || c.is_identity(g) {
                continue;
            }
            if let Some(h) = c.compose(f, g) {
                compose.push(json!([c.morphism_id(g), c.morphism_id(f), c.morphism_id(h)]));
            }
        }
    }
    json!({
        "objects": c.objects(),
        "morphisms": morphisms,
        "identities": identities,
        "compose": compose,
    })
}

/// Natural system as explicit tables, identity actions omitted.
pub fn natural_system_to_value(c: &FinCategory, d: &NaturalSystem) -> Value {
    let groups: Map<String, Value> = (0..c.morphism_count())
        .map(|f| (c.morphism_id(f).to_string(), json!(d.group(f).to_string())))
        .collect();
    let (push, pull) = d.to_tables(c);
    let list = |t: &HashMap<(usize, usize), IntMatrix>| {
        let mut keys: Vec<&(usize, usize)> = t.keys().collect();
        keys.sort();
        keys.into_iter()
            .filter(|k| !t[k].is_identity() || t[k].rows() == 0)
            .filter(|k| t[k].rows() > 0 && t[k].cols() > 0)
            .map(|k| {
                json!({"f": c.morphism_id(k.0), "g": c.morphism_id(k.1), "matrix": t[k].to_rows()})
            })
            .collect::<Vec<_>>()
    };
    json!({"groups": groups, "push": list(&push), "pull": list(&pull)})
}

pub fn category_document(c: &FinCategory, d: &NaturalSystem) -> Value {
    let mut v = category_to_value(c);
    v["natural_system"] = natural_system_to_value(c, d);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: &str = r#"{
        "objects": ["*"],
        "morphisms": [{"id": "e", "src": "*", "tgt": "*"}, {"id": "t", "src": "*", "tgt": "*"}],
        "identities": {"*": "e"},
        "compose": [["t", "t", "e"]],
        "natural_system": {"constant": "Z/2"}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let (c, d) = parse_category_document(Z2).unwrap();
        assert!(c.validate().passed());
        assert!(d.validate(&c).passed());
        let text = category_document(&c, &d).to_string();
        let (c2, d2) = parse_category_document(&text).unwrap();
        assert_eq!(c2.morphism_count(), 2);
        assert_eq!(d2.group(1).to_string(), "Z/2");
    }

    #[test]
    fn diagnostics_carry_pointers() {
        let bad = Z2.replace(r#"["t", "t", "e"]"#, r#"["t", "u", "e"]"#);
        let e = parse_category_document(&bad).unwrap_err();
        assert!(e.to_string().contains("/compose/0/1"), "{e}");
        let e = parse_category_document("{\"objects\": [").unwrap_err();
        assert!(matches!(e, CatError::Json { line: 1, .. }));
        let bad = Z2.replace("Z/2", "Z/2+Z/3");
        let e = parse_category_document(&bad).unwrap_err();
        assert!(e.to_string().contains("/natural_system/constant"), "{e}");
    }
}
