use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Int, NilError};

/// Position of the basic commutator `[x_i, x_j]`, `i < j`, in the
/// commutator exponent vector of a rank-`n` element.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Element of the free class-2 nilpotent group in collected normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nil2Element {
    rank: usize,
    gen: Vec<Int>,
    comm: Vec<Int>,
}

impl Nil2Element {
    pub fn identity(rank: usize) -> Self {
        Nil2Element {
            rank,
            gen: vec![Int::ZERO; rank],
            comm: vec![Int::ZERO; rank * rank.saturating_sub(1) / 2],
        }
    }

    pub fn generator(rank: usize, i: usize) -> Result<Self, NilError> {
        if i >= rank {
            return Err(NilError::GeneratorOutOfRange { index: i + 1, rank });
        }
        let mut e = Self::identity(rank);
        e.gen[i] = Int::ONE;
        Ok(e)
    }

    /// The basic commutator `[x_i, x_j]`, `i < j`.
    pub fn basic_commutator(rank: usize, i: usize, j: usize) -> Result<Self, NilError> {
        if j >= rank || i >= j {
            return Err(NilError::InvalidParameters {
                kind: "basic commutator".into(),
                reason: format!("need 1 <= i < j <= {rank}, got ({}, {})", i + 1, j + 1),
            });
        }
        let mut e = Self::identity(rank);
        e.comm[pair_index(rank, i, j)] = Int::ONE;
        Ok(e)
    }

    pub fn from_parts(rank: usize, gen: Vec<Int>, comm: Vec<Int>) -> Result<Self, NilError> {
        if gen.len() != rank {
            return Err(NilError::RankMismatch {
                expected: rank,
                found: gen.len(),
            });
        }
        let pairs = rank * rank.saturating_sub(1) / 2;
        if comm.len() != pairs {
            return Err(NilError::InvalidParameters {
                kind: "commutator exponents".into(),
                reason: format!("expected {pairs} entries, found {}", comm.len()),
            });
        }
        Ok(Nil2Element { rank, gen, comm })
    }

    pub fn from_i64(rank: usize, gen: &[i64], comm: &[i64]) -> Result<Self, NilError> {
        Self::from_parts(
            rank,
            gen.iter().map(|&x| x.into()).collect(),
            comm.iter().map(|&x| x.into()).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gen_exp(&self) -> &[Int] {
        &self.gen
    }

    pub fn comm_exp(&self) -> &[Int] {
        &self.comm
    }

    pub fn comm_at(&self, i: usize, j: usize) -> &Int {
        &self.comm[pair_index(self.rank, i, j)]
    }

    pub fn is_identity(&self) -> bool {
        self.gen.iter().all(Int::is_zero) && self.comm.iter().all(Int::is_zero)
    }

    pub fn is_central(&self) -> bool {
        self.gen.iter().all(Int::is_zero)
    }

    fn check_rank(&self, other: &Self) -> Result<(), NilError> {
        if self.rank != other.rank {
            return Err(NilError::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NilError> {
        self.check_rank(other)?;
        let n = self.rank;
        let gen = self.gen.iter().zip(&other.gen).map(|(a, b)| a + b).collect();
        let mut comm: Vec<Int> = self.comm.iter().zip(&other.comm).map(|(a, b)| a + b).collect();
        for i in 0..n {
            if other.gen[i].is_zero() {
                continue;
            }
            for j in i + 1..n {
                if self.gen[j].is_zero() {
                    continue;
                }
                let k = pair_index(n, i, j);
                comm[k] = &comm[k] - &(&self.gen[j] * &other.gen[i]);
            }
        }
        Ok(Nil2Element { rank: n, gen, comm })
    }

    pub fn inv(&self) -> Self {
        self.pow(&Int::from(-1))
    }

    /// `g^k` for any integer `k`: `(k a, k c + C(k,2) κ(a, a))`.
    pub fn pow(&self, k: &Int) -> Self {
        let n = self.rank;
        let gen: Vec<Int> = self.gen.iter().map(|a| a * k).collect();
        let mut comm: Vec<Int> = self.comm.iter().map(|c| c * k).collect();
        let ck = k.choose2();
        if !ck.is_zero() {
            for i in 0..n {
                if self.gen[i].is_zero() {
                    continue;
                }
                for j in i + 1..n {
                    if self.gen[j].is_zero() {
                        continue;
                    }
                    let idx = pair_index(n, i, j);
                    comm[idx] = &comm[idx] - &(&ck * &(&self.gen[i] * &self.gen[j]));
                }
            }
        }
        Nil2Element { rank: n, gen, comm }
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`; bilinear in the abelianizations.
    pub fn commutator(&self, other: &Self) -> Result<Self, NilError> {
        self.check_rank(other)?;
        let n = self.rank;
        let mut out = Self::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = &(&self.gen[i] * &other.gen[j]) - &(&self.gen[j] * &other.gen[i]);
                out.comm[pair_index(n, i, j)] = v;
            }
        }
        Ok(out)
    }

    /// Total word length of the collected form, counting each commutator
    /// exponent with weight 4.
    pub fn collected_length(&self) -> Int {
        let mut total = Int::ZERO;
        for a in &self.gen {
            total = total + a.abs();
        }
        for c in &self.comm {
            total = total + &Int::from(4) * &c.abs();
        }
        total
    }

    /// Parses the text form, e.g. `x1^2 x2^-1 [x1,x2]^3`; `1` is the identity.
    ///
    /// Letters may appear in any order; the result is their product.
    pub fn parse(rank: usize, text: &str) -> Result<Self, NilError> {
        let mut acc = Self::identity(rank);
        let tokens = tokenize(text);
        for (position, token) in tokens.iter().enumerate() {
            let err = |reason: &str| NilError::Parse {
                position,
                token: token.clone(),
                reason: reason.to_string(),
            };
            if token == "1" {
                continue;
            }
            let (base, exp) = match token.rfind('^') {
                Some(k) if !token[k..].contains(']') => (&token[..k], Some(&token[k + 1..])),
                _ => (token.as_str(), None),
            };
            let exp: Int = match exp {
                Some(e) => e.parse().map_err(|_| err("bad exponent"))?,
                None => Int::ONE,
            };
            let factor = if let Some(inner) = base.strip_prefix('[') {
                let inner = inner.strip_suffix(']').ok_or_else(|| err("unclosed bracket"))?;
                let mut parts = inner.split(',');
                let a = parse_generator(parts.next().unwrap_or(""), rank).map_err(|r| err(&r))?;
                let b = parse_generator(parts.next().unwrap_or(""), rank).map_err(|r| err(&r))?;
                if parts.next().is_some() {
                    return Err(err("commutator takes two generators"));
                }
                let ga = Self::generator(rank, a)?;
                let gb = Self::generator(rank, b)?;
                ga.commutator(&gb)?
            } else {
                let g = parse_generator(base, rank).map_err(|r| err(&r))?;
                Self::generator(rank, g)?
            };
            acc = acc.mul(&factor.pow(&exp))?;
        }
        Ok(acc)
    }
}

fn tokenize(text: &str) -> Vec<String> {
    // brackets may contain spaces after the comma
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn parse_generator(s: &str, rank: usize) -> Result<usize, String> {
    let digits = s
        .trim()
        .strip_prefix('x')
        .ok_or_else(|| format!("expected a generator like x1, found {s:?}"))?;
    let i: usize = digits
        .parse()
        .map_err(|_| format!("bad generator index {digits:?}"))?;
    if i == 0 || i > rank {
        return Err(format!("generator x{i} out of range for rank {rank}"));
    }
    Ok(i - 1)
}

fn power(base: String, e: &Int) -> String {
    if *e == Int::ONE {
        base
    } else {
        format!("{base}^{e}")
    }
}

impl fmt::Display for Nil2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, a) in self.gen.iter().enumerate() {
            if !a.is_zero() {
                parts.push(power(format!("x{}", i + 1), a));
            }
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let c = self.comm_at(i, j);
                if !c.is_zero() {
                    parts.push(power(format!("[x{},x{}]", i + 1, j + 1), c));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for Nil2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {})", self, self.rank)
    }
}

/// Serialized as `{"rank": n, "element": "<text>"}`.
impl Serialize for Nil2Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rank: usize,
            element: String,
        }
        Repr {
            rank: self.rank,
            element: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nil2Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rank: usize,
            element: String,
        }
        let r = Repr::deserialize(d)?;
        Nil2Element::parse(r.rank, &r.element).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(rank: usize, s: &str) -> Nil2Element {
        Nil2Element::parse(rank, s).unwrap()
    }

    #[test]
    fn swapped_generators_differ_by_one_commutator() {
        let ab = el(2, "x1 x2");
        let ba = el(2, "x2 x1");
        assert_eq!(ab.gen_exp(), ba.gen_exp());
        assert_eq!(*ab.comm_at(0, 1), Int::ZERO);
        assert_eq!(*ba.comm_at(0, 1), Int::from(-1));
        assert_eq!(ba.to_string(), "x1 x2 [x1,x2]^-1");
    }

    #[test]
    fn commutator_word_is_basic_commutator() {
        let c = el(2, "x1^-1 x2^-1 x1 x2");
        assert_eq!(c, Nil2Element::basic_commutator(2, 0, 1).unwrap());
        assert_eq!(el(2, "[x1,x2]"), c);
    }

    #[test]
    fn inverse_of_product() {
        let g = el(2, "x1 x2");
        let inv = g.inv();
        assert_eq!(inv, el(2, "x2^-1 x1^-1"));
        assert_eq!(inv.to_string(), "x1^-1 x2^-1 [x1,x2]^-1");
        assert!(g.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "x1^2 x2^-1 [x1,x2]^3", "x3 [x1,x3]^-2 [x2,x3]"] {
            let e = el(3, s);
            assert_eq!(el(3, &e.to_string()), e);
        }
        assert_eq!(el(3, "x1^2 x2^-1 [x1,x2]^3").to_string(), "x1^2 x2^-1 [x1,x2]^3");
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!(matches!(
            Nil2Element::parse(2, "x1 x3"),
            Err(NilError::Parse { position: 1, .. })
        ));
        assert!(Nil2Element::parse(2, "x1^a").is_err());
        assert!(Nil2Element::parse(2, "[x1,x2").is_err());
        assert!(Nil2Element::parse(2, "y1").is_err());
    }

    #[test]
    fn negative_powers() {
        let g = el(3, "x1 x2^2 x3^-1 [x1,x3]");
        let a = g.pow(&Int::from(-3));
        let b = g.inv().pow(&Int::from(3));
        assert_eq!(a, b);
        assert!(g.pow(&Int::from(4)).mul(&a).unwrap().mul(&g.inv()).unwrap().is_identity());
    }
}
