use std::collections::HashMap;

use rand::Rng;
use serde_json::{json, Map, Value};

use super::CohomologyError;
use crate::catcore::{Chain, FinCategory, MorId, NaturalSystem};
use crate::linalg::SparseVec;

struct Level {
    chains: Vec<Chain>,
    index: HashMap<Vec<MorId>, usize>,
    offsets: Vec<usize>,
    dim: usize,
}

/// Normalized Baues-Wirsching cochain complex `F^n(C, D)`, materialized up
/// to a maximal degree.
///
/// An `n`-cochain assigns to every chain `(f_1, ..., f_n)` without
/// identities a value in `D(f_1 ∘ ... ∘ f_n)`; chains containing an
/// identity carry 0. The differential is
///
/// ```text
/// (δσ)(f_1..f_{n+1}) = (f_1)_* σ(f_2..f_{n+1})
///                    + Σ_{i=1..n} (-1)^i σ(.., f_i f_{i+1}, ..)
///                    + (-1)^{n+1} (f_{n+1})^* σ(f_1..f_n).
/// ```
pub struct CochainComplex<'a> {
    cat: &'a FinCategory,
    sys: &'a NaturalSystem,
    levels: Vec<Level>,
}

/// An `n`-cochain: one value per nondegenerate chain, in nerve order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Vec<i64>>,
}

impl<'a> CochainComplex<'a> {
    pub fn new(cat: &'a FinCategory, sys: &'a NaturalSystem, max_degree: usize) -> Self {
        let levels = (0..=max_degree)
            .map(|n| {
                let chains = cat.nondegenerate_nerve(n);
                let index = chains
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| n > 0 || c.morphisms.is_empty())
                    .map(|(i, c)| (c.morphisms.clone(), i))
                    .collect();
                let mut offsets = Vec::with_capacity(chains.len());
                let mut dim = 0;
                for c in &chains {
                    offsets.push(dim);
                    dim += sys.group(c.composite(cat)).dim();
                }
                Level {
                    chains,
                    index,
                    offsets,
                    dim,
                }
            })
            .collect();
        CochainComplex { cat, sys, levels }
    }

    pub fn category(&self) -> &'a FinCategory {
        self.cat
    }

    pub fn system(&self) -> &'a NaturalSystem {
        self.sys
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    fn level(&self, n: usize) -> Result<&Level, CohomologyError> {
        self.levels.get(n).ok_or(CohomologyError::DegreeTooHigh {
            degree: n,
            max: self.max_degree(),
        })
    }

    pub fn chains(&self, n: usize) -> Result<&[Chain], CohomologyError> {
        Ok(&self.level(n)?.chains)
    }

    /// Number of integer coordinates of `F^n`.
    pub fn dim(&self, n: usize) -> Result<usize, CohomologyError> {
        Ok(self.level(n)?.dim)
    }

    /// Per-coordinate moduli of `F^n` (0 for free coordinates).
    pub fn moduli(&self, n: usize) -> Result<Vec<i64>, CohomologyError> {
        let lvl = self.level(n)?;
        let mut out = Vec::with_capacity(lvl.dim);
        for c in &lvl.chains {
            let g = self.sys.group(c.composite(self.cat));
            out.extend((0..g.dim()).map(|k| g.modulus(k)));
        }
        Ok(out)
    }

    pub fn zero(&self, n: usize) -> Result<Cochain, CohomologyError> {
        let lvl = self.level(n)?;
        Ok(Cochain {
            degree: n,
            values: lvl
                .chains
                .iter()
                .map(|c| self.sys.group(c.composite(self.cat)).zero())
                .collect(),
        })
    }

    /// Uniformly random values; free coordinates drawn from `-bound..=bound`.
    pub fn random<R: Rng>(&self, n: usize, rng: &mut R, bound: i64) -> Result<Cochain, CohomologyError> {
        let lvl = self.level(n)?;
        let values = lvl
            .chains
            .iter()
            .map(|c| {
                let g = self.sys.group(c.composite(self.cat));
                (0..g.dim())
                    .map(|k| match g.modulus(k) {
                        0 => rng.gen_range(-bound..=bound),
                        d => rng.gen_range(0..d),
                    })
                    .collect()
            })
            .collect();
        Ok(Cochain { degree: n, values })
    }

    /// Position of a nondegenerate chain; `None` when it contains an identity.
    pub fn chain_index(&self, n: usize, morphisms: &[MorId]) -> Option<usize> {
        self.levels.get(n)?.index.get(morphisms).copied()
    }

    /// Value on an arbitrary chain (0 on degenerate chains). For degree 0,
    /// `object` selects the chain.
    fn value_at(&self, sigma: &Cochain, morphisms: &[MorId], object: usize) -> Vec<i64> {
        if morphisms.is_empty() {
            return sigma.values[object].clone();
        }
        match self.chain_index(sigma.degree, morphisms) {
            Some(i) => sigma.values[i].clone(),
            None => {
                let comp = self.cat.compose_all(morphisms).expect("composable");
                self.sys.group(comp).zero()
            }
        }
    }

    /// Value on a chain given by morphism identifiers order.
    pub fn value(&self, sigma: &Cochain, chain: &Chain) -> Vec<i64> {
        self.value_at(sigma, &chain.morphisms, chain.object)
    }

    fn check(&self, sigma: &Cochain) -> Result<(), CohomologyError> {
        let lvl = self.level(sigma.degree)?;
        if sigma.values.len() != lvl.chains.len() {
            return Err(CohomologyError::Malformed(format!(
                "degree-{} cochain has {} values for {} chains",
                sigma.degree,
                sigma.values.len(),
                lvl.chains.len()
            )));
        }
        Ok(())
    }

    /// The differential `δ: F^n → F^{n+1}`.
    pub fn coboundary(&self, sigma: &Cochain) -> Result<Cochain, CohomologyError> {
        self.check(sigma)?;
        let n = sigma.degree;
        let next = self.level(n + 1)?;
        let (c, d) = (self.cat, self.sys);
        let values = next
            .chains
            .iter()
            .map(|ch| {
                let f = &ch.morphisms;
                let target = d.group(ch.composite(c));
                let mut acc = target.zero();
                let mut add = |v: Vec<i64>, sign: i64| {
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += sign * x;
                    }
                };
                // d^0
                let rest = &f[1..];
                let rest_obj = c.src(f[0]);
                let inner = self.value_at(sigma, rest, rest_obj);
                let g = c.compose_all(rest).unwrap_or_else(|| c.identity(rest_obj));
                add(d.push(c, f[0], g, &inner), 1);
                // inner faces
                for i in 0..n {
                    let mut merged = Vec::with_capacity(n);
                    merged.extend_from_slice(&f[..i]);
                    merged.push(c.comp(f[i], f[i + 1]));
                    merged.extend_from_slice(&f[i + 2..]);
                    let v = self.value_at(sigma, &merged, 0);
                    add(v, if (i + 1) % 2 == 0 { 1 } else { -1 });
                }
                // d^{n+1}
                let head = &f[..n];
                let head_obj = c.tgt(f[n]);
                let inner = self.value_at(sigma, head, head_obj);
                let h = c.compose_all(head).unwrap_or_else(|| c.identity(head_obj));
                add(
                    d.pull(c, h, f[n], &inner),
                    if (n + 1).is_multiple_of(2) { 1 } else { -1 },
                );
                target.reduce(&acc)
            })
            .collect();
        Ok(Cochain {
            degree: n + 1,
            values,
        })
    }

    /// Columns of `δ: Z^{dim F^n} → Z^{dim F^{n+1}}` on coordinate lifts,
    /// computed face by face from the `(n+1)`-chains.
    pub fn coboundary_columns(&self, n: usize) -> Result<Vec<SparseVec>, CohomologyError> {
        let cur = self.level(n)?;
        let next = self.level(n + 1)?;
        let (c, d) = (self.cat, self.sys);
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cur.dim];
        // contribution: rows of chain `row_chain` from chain `src` (index) via
        // a linear map given by its action on unit vectors.
        for (mi, ch) in next.chains.iter().enumerate() {
            let f = &ch.morphisms;
            let row0 = next.offsets[mi];
            let mut face = |src_morphs: &[MorId], src_obj: usize, sign: i64, act: &dyn Fn(&[i64]) -> Vec<i64>| {
                let idx = if src_morphs.is_empty() {
                    Some(src_obj)
                } else {
                    cur.index.get(src_morphs).copied()
                };
                let Some(si) = idx else { return };
                let sdim = d.group(cur.chains[si].composite(c)).dim();
                for k in 0..sdim {
                    let mut e = vec![0; sdim];
                    e[k] = 1;
                    for (r, x) in act(&e).into_iter().enumerate() {
                        if x != 0 {
                            cols[cur.offsets[si] + k].push((row0 + r, sign * x));
                        }
                    }
                }
            };
            let rest_obj = c.src(f[0]);
            let g = c.compose_all(&f[1..]).unwrap_or_else(|| c.identity(rest_obj));
            face(&f[1..], rest_obj, 1, &|x| d.push(c, f[0], g, x));
            for i in 0..n {
                let mut merged = Vec::with_capacity(n);
                merged.extend_from_slice(&f[..i]);
                merged.push(c.comp(f[i], f[i + 1]));
                merged.extend_from_slice(&f[i + 2..]);
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                face(&merged, 0, sign, &|x| x.to_vec());
            }
            let head_obj = c.tgt(f[n]);
            let h = c.compose_all(&f[..n]).unwrap_or_else(|| c.identity(head_obj));
            let sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
            face(&f[..n], head_obj, sign, &|x| d.pull(c, h, f[n], x));
        }
        cols.into_iter()
            .map(|v| SparseVec::from_pairs(v).map_err(CohomologyError::from))
            .collect()
    }

    pub fn to_flat(&self, sigma: &Cochain) -> Result<Vec<i64>, CohomologyError> {
        self.check(sigma)?;
        Ok(sigma.values.concat())
    }

    pub fn from_flat(&self, n: usize, v: &[i64]) -> Result<Cochain, CohomologyError> {
        let lvl = self.level(n)?;
        if v.len() != lvl.dim {
            return Err(CohomologyError::Malformed(format!(
                "expected {} coordinates, found {}",
                lvl.dim,
                v.len()
            )));
        }
        let values = lvl
            .chains
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                let g = self.sys.group(ch.composite(self.cat));
                g.reduce(&v[lvl.offsets[i]..lvl.offsets[i] + g.dim()])
            })
            .collect();
        Ok(Cochain { degree: n, values })
    }

    pub fn add(&self, a: &Cochain, b: &Cochain) -> Result<Cochain, CohomologyError> {
        self.combine(a, b, 1)
    }

    pub fn sub(&self, a: &Cochain, b: &Cochain) -> Result<Cochain, CohomologyError> {
        self.combine(a, b, -1)
    }

    pub fn scale(&self, a: &Cochain, k: i64) -> Result<Cochain, CohomologyError> {
        let z = self.zero(a.degree)?;
        self.combine(&z, a, k)
    }

    fn combine(&self, a: &Cochain, b: &Cochain, k: i64) -> Result<Cochain, CohomologyError> {
        self.check(a)?;
        self.check(b)?;
        if a.degree != b.degree {
            return Err(CohomologyError::Malformed("degree mismatch".into()));
        }
        let lvl = self.level(a.degree)?;
        let values = lvl
            .chains
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                let g = self.sys.group(ch.composite(self.cat));
                let v: Vec<i64> = a.values[i].iter().zip(&b.values[i]).map(|(x, y)| x + k * y).collect();
                g.reduce(&v)
            })
            .collect();
        Ok(Cochain {
            degree: a.degree,
            values,
        })
    }

    pub fn is_zero(&self, a: &Cochain) -> bool {
        a.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// First chain with a nonzero value, as identifiers.
    pub fn first_nonzero(&self, a: &Cochain) -> Option<(Vec<String>, Vec<i64>)> {
        let lvl = self.levels.get(a.degree)?;
        a.values
            .iter()
            .position(|v| v.iter().any(|&x| x != 0))
            .map(|i| (lvl.chains[i].ids(self.cat), a.values[i].clone()))
    }

    /// JSON: map from chain (identifiers joined by `,`) to coordinates;
    /// zero values are omitted.
    pub fn to_json(&self, a: &Cochain) -> Value {
        let lvl = &self.levels[a.degree];
        let mut map = Map::new();
        for (i, v) in a.values.iter().enumerate() {
            if v.iter().any(|&x| x != 0) {
                map.insert(lvl.chains[i].ids(self.cat).join(","), json!(v));
            }
        }
        json!({"degree": a.degree, "values": map})
    }

    /// Inverse of [`Self::to_json`]; absent chains are 0.
    pub fn from_json(&self, v: &Value) -> Result<Cochain, CohomologyError> {
        let bad = |m: String| CohomologyError::Malformed(m);
        let n = v
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("/degree: expected a nonnegative integer".into()))? as usize;
        let mut out = self.zero(n)?;
        let values = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("/values: expected an object".into()))?;
        for (key, val) in values {
            let path = format!("/values/{key}");
            let idx = if n == 0 {
                self.cat.find_object(key)
            } else {
                let ids: Option<Vec<MorId>> =
                    key.split(',').map(|s| self.cat.find_morphism(s.trim())).collect();
                ids.and_then(|m| self.chain_index(n, &m))
            };
            let i = idx.ok_or_else(|| bad(format!("{path}: not a nondegenerate chain")))?;
            let coords: Vec<i64> = val
                .as_array()
                .and_then(|a| a.iter().map(Value::as_i64).collect())
                .ok_or_else(|| bad(format!("{path}: expected an integer list")))?;
            let g = self.sys.group(self.levels[n].chains[i].composite(self.cat));
            if coords.len() != g.dim() {
                return Err(bad(format!("{path}: expected {} coordinates", g.dim())));
            }
            out.values[i] = g.reduce(&coords);
        }
        Ok(out)
    }
}
