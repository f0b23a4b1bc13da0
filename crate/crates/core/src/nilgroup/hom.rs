use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Int, IntMatrix, Nil2Element, NilError};

/// Homomorphism `F_n → F_m` of free class-2 nilpotent groups, given by the
/// images of the generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nil2Hom {
    source: usize,
    target: usize,
    images: Vec<Nil2Element>,
}

/// Named structural maps. Summand and generator indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralMap {
    /// `F_n → F_n`.
    Identity(usize),
    /// `F_n → F_m`, everything to 1.
    Zero { source: usize, target: usize },
    /// `α_n: F_1 → F_n`, `x ↦ x1 x2 ... xn`.
    Alpha(usize),
    /// `β_n: F_n → F_1`, every generator to `x`.
    Beta(usize),
    /// `r_e: F_n → F_1`, `x_e ↦ x`, other generators to 1.
    Retraction { n: usize, e: usize },
    /// `i_e: F_1 → F_n`, `x ↦ x_e`.
    Inclusion { n: usize, e: usize },
    /// `ξ_k: F_1 → F_1`, `x ↦ x^k`.
    Power(i64),
    /// `Ψ_{n,m}: ∨_m F_n → F_n`, generator `(e, j)` at index `e n + j` to `x_j`.
    Fold { n: usize, m: usize },
    /// `F_n → F_m`, `x_i ↦ x_{inj[i]}` for an injection `inj`.
    InclusionOf { target: usize, injection: Vec<usize> },
    /// `F_m → F_n`, `x_{inj[i]} ↦ x_i`, generators outside the image to 1.
    ProjectionOf { source: usize, injection: Vec<usize> },
}

impl Nil2Hom {
    pub fn new(source: usize, target: usize, images: Vec<Nil2Element>) -> Result<Self, NilError> {
        if images.len() != source {
            return Err(NilError::RankMismatch {
                expected: source,
                found: images.len(),
            });
        }
        for im in &images {
            if im.rank() != target {
                return Err(NilError::RankMismatch {
                    expected: target,
                    found: im.rank(),
                });
            }
        }
        Ok(Nil2Hom {
            source,
            target,
            images,
        })
    }

    /// Parses an ordered list of element texts.
    pub fn parse(source: usize, target: usize, images: &[&str]) -> Result<Self, NilError> {
        let els = images
            .iter()
            .map(|s| Nil2Element::parse(target, s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, els)
    }

    pub fn identity(n: usize) -> Self {
        Nil2Hom {
            source: n,
            target: n,
            images: (0..n)
                .map(|i| Nil2Element::generator(n, i).expect("in range"))
                .collect(),
        }
    }

    pub fn zero(source: usize, target: usize) -> Self {
        Nil2Hom {
            source,
            target,
            images: vec![Nil2Element::identity(target); source],
        }
    }

    /// Sends generator `i` to generator `letters[i]`, or to 1 for `None`.
    pub fn letter_map(
        source: usize,
        target: usize,
        letters: &[Option<usize>],
    ) -> Result<Self, NilError> {
        if letters.len() != source {
            return Err(NilError::RankMismatch {
                expected: source,
                found: letters.len(),
            });
        }
        let images = letters
            .iter()
            .map(|l| match l {
                Some(j) => Nil2Element::generator(target, *j),
                None => Ok(Nil2Element::identity(target)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Nil2Hom {
            source,
            target,
            images,
        })
    }

    pub fn structural(kind: &StructuralMap) -> Result<Self, NilError> {
        let bad = |reason: String| NilError::InvalidParameters {
            kind: format!("{kind:?}"),
            reason,
        };
        match kind {
            StructuralMap::Identity(n) => Ok(Self::identity(*n)),
            StructuralMap::Zero { source, target } => Ok(Self::zero(*source, *target)),
            StructuralMap::Alpha(n) => {
                let mut acc = Nil2Element::identity(*n);
                for i in 0..*n {
                    acc = acc.mul(&Nil2Element::generator(*n, i)?)?;
                }
                Self::new(1, *n, vec![acc])
            }
            StructuralMap::Beta(n) => Self::letter_map(*n, 1, &vec![Some(0); *n]),
            StructuralMap::Retraction { n, e } => {
                if e >= n {
                    return Err(bad(format!("summand {} out of range 1..={n}", e + 1)));
                }
                let letters: Vec<_> = (0..*n).map(|i| (i == *e).then_some(0)).collect();
                Self::letter_map(*n, 1, &letters)
            }
            StructuralMap::Inclusion { n, e } => {
                if e >= n {
                    return Err(bad(format!("summand {} out of range 1..={n}", e + 1)));
                }
                Self::letter_map(1, *n, &[Some(*e)])
            }
            StructuralMap::Power(k) => Self::new(
                1,
                1,
                vec![Nil2Element::generator(1, 0)?.pow(&Int::from(*k))],
            ),
            StructuralMap::Fold { n, m } => {
                let letters: Vec<_> = (0..n * m).map(|i| Some(i % n)).collect();
                Self::letter_map(n * m, *n, &letters)
            }
            StructuralMap::InclusionOf { target, injection } => {
                check_injection(injection, *target).map_err(bad)?;
                let letters: Vec<_> = injection.iter().map(|&j| Some(j)).collect();
                Self::letter_map(injection.len(), *target, &letters)
            }
            StructuralMap::ProjectionOf { source, injection } => {
                check_injection(injection, *source).map_err(bad)?;
                let mut letters = vec![None; *source];
                for (i, &j) in injection.iter().enumerate() {
                    letters[j] = Some(i);
                }
                Self::letter_map(*source, injection.len(), &letters)
            }
        }
    }

    pub fn alpha(n: usize) -> Self {
        Self::structural(&StructuralMap::Alpha(n)).expect("valid")
    }

    pub fn beta(n: usize) -> Self {
        Self::structural(&StructuralMap::Beta(n)).expect("valid")
    }

    pub fn retraction(n: usize, e: usize) -> Result<Self, NilError> {
        Self::structural(&StructuralMap::Retraction { n, e })
    }

    pub fn inclusion(n: usize, e: usize) -> Result<Self, NilError> {
        Self::structural(&StructuralMap::Inclusion { n, e })
    }

    pub fn power(k: i64) -> Self {
        Self::structural(&StructuralMap::Power(k)).expect("valid")
    }

    pub fn fold(n: usize, m: usize) -> Self {
        Self::structural(&StructuralMap::Fold { n, m }).expect("valid")
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[Nil2Element] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Nil2Element {
        &self.images[i]
    }

    pub fn apply(&self, a: &Nil2Element) -> Result<Nil2Element, NilError> {
        if a.rank() != self.source {
            return Err(NilError::RankMismatch {
                expected: self.source,
                found: a.rank(),
            });
        }
        let n = self.source;
        let mut acc = Nil2Element::identity(self.target);
        for (i, e) in a.gen_exp().iter().enumerate() {
            if !e.is_zero() {
                acc = acc.mul(&self.images[i].pow(e))?;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let c = a.comm_at(i, j);
                if !c.is_zero() {
                    let k = self.images[i].commutator(&self.images[j])?;
                    acc = acc.mul(&k.pow(c))?;
                }
            }
        }
        Ok(acc)
    }

    /// `self ∘ g` (apply `g` first).
    pub fn compose(&self, g: &Nil2Hom) -> Result<Nil2Hom, NilError> {
        if g.target != self.source {
            return Err(NilError::RankMismatch {
                expected: self.source,
                found: g.target,
            });
        }
        let images = g
            .images
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Nil2Hom {
            source: g.source,
            target: self.target,
            images,
        })
    }

    /// `m × n` matrix whose column `j` is the exponent vector of the image
    /// of generator `j`.
    pub fn abelianize(&self) -> Result<IntMatrix, NilError> {
        let mut m = IntMatrix::zeros(self.target, self.source);
        for (j, im) in self.images.iter().enumerate() {
            for (i, a) in im.gen_exp().iter().enumerate() {
                let v = a.to_i64().ok_or_else(|| NilError::Overflow(a.to_string()))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// The integer `α(e, g)`: exponent of `x_g` in the image of `x_e`.
    pub fn coefficient(&self, e: usize, g: usize) -> &Int {
        &self.images[e].gen_exp()[g]
    }

    /// Coproduct `self ∨ other: F_{n+n'} → F_{m+m'}`.
    pub fn wedge(&self, other: &Nil2Hom) -> Nil2Hom {
        let left = Self::letter_map(
            self.target,
            self.target + other.target,
            &(0..self.target).map(Some).collect::<Vec<_>>(),
        )
        .expect("valid");
        let right = Self::letter_map(
            other.target,
            self.target + other.target,
            &(0..other.target).map(|i| Some(self.target + i)).collect::<Vec<_>>(),
        )
        .expect("valid");
        let mut images = Vec::with_capacity(self.source + other.source);
        for im in &self.images {
            images.push(left.apply(im).expect("rank"));
        }
        for im in &other.images {
            images.push(right.apply(im).expect("rank"));
        }
        Nil2Hom {
            source: self.source + other.source,
            target: self.target + other.target,
            images,
        }
    }

    /// `∨_k self`.
    pub fn wedge_power(&self, k: usize) -> Nil2Hom {
        let mut acc = Nil2Hom::zero(0, 0);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Copairing `(self, other): F_{n+n'} → F_m`.
    pub fn copair(&self, other: &Nil2Hom) -> Result<Nil2Hom, NilError> {
        if self.target != other.target {
            return Err(NilError::RankMismatch {
                expected: self.target,
                found: other.target,
            });
        }
        let mut images = self.images.clone();
        images.extend(other.images.iter().cloned());
        Ok(Nil2Hom {
            source: self.source + other.source,
            target: self.target,
            images,
        })
    }

    /// `self ⊗ id_r`: substitutes `∨_r`-blocks, sending `F_n → F_m` to
    /// `F_{nr} → F_{mr}`; generator `(e, j)` sits at index `e r + j`.
    pub fn substitute(&self, r: usize) -> Nil2Hom {
        let n = self.source;
        let m = self.target;
        let mut images = Vec::with_capacity(n * r);
        for e in 0..n {
            for j in 0..r {
                let letters: Vec<_> = (0..m).map(|g| Some(g * r + j)).collect();
                let sub = Self::letter_map(m, m * r, &letters).expect("valid");
                images.push(sub.apply(&self.images[e]).expect("rank"));
            }
        }
        Nil2Hom {
            source: n * r,
            target: m * r,
            images,
        }
    }

    /// True when every image is a generator or the identity.
    pub fn is_letter_map(&self) -> bool {
        self.images.iter().all(|im| {
            im.comm_exp().iter().all(Int::is_zero) && {
                let nz: Vec<&Int> = im.gen_exp().iter().filter(|a| !a.is_zero()).collect();
                nz.is_empty() || (nz.len() == 1 && *nz[0] == Int::ONE)
            }
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Self::identity(self.source)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.images.iter().map(|e| e.to_string()).collect()
    }
}

fn check_injection(injection: &[usize], rank: usize) -> Result<(), String> {
    let mut seen = vec![false; rank];
    for &j in injection {
        if j >= rank {
            return Err(format!("index {} out of range 1..={rank}", j + 1));
        }
        if seen[j] {
            return Err(format!("index {} repeated", j + 1));
        }
        seen[j] = true;
    }
    Ok(())
}

impl fmt::Display for Nil2Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}->F{} [{}]", self.source, self.target, self.to_strings().join("; "))
    }
}

impl fmt::Debug for Nil2Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as `{"source": n, "target": m, "images": ["x1 x2", ...]}`.
impl Serialize for Nil2Hom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            source: usize,
            target: usize,
            images: Vec<String>,
        }
        Repr {
            source: self.source,
            target: self.target,
            images: self.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nil2Hom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            source: usize,
            target: usize,
            images: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        let refs: Vec<&str> = r.images.iter().map(String::as_str).collect();
        Nil2Hom::parse(r.source, r.target, &refs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_compose() {
        assert_eq!(Nil2Hom::power(2).compose(&Nil2Hom::power(3)).unwrap(), Nil2Hom::power(6));
        assert_eq!(
            Nil2Hom::structural(&StructuralMap::Power(-1)).unwrap().image(0).to_string(),
            "x1^-1"
        );
    }

    #[test]
    fn retraction_after_inclusion() {
        for e in 0..3 {
            for e2 in 0..3 {
                let c = Nil2Hom::retraction(3, e)
                    .unwrap()
                    .compose(&Nil2Hom::inclusion(3, e2).unwrap())
                    .unwrap();
                if e == e2 {
                    assert!(c.is_identity());
                } else {
                    assert_eq!(c, Nil2Hom::zero(1, 1));
                }
            }
        }
        assert!(Nil2Hom::retraction(2, 2).is_err());
    }

    #[test]
    fn fold_after_product_is_power() {
        for n in 0..5 {
            let c = Nil2Hom::beta(n).compose(&Nil2Hom::alpha(n)).unwrap();
            assert_eq!(c, Nil2Hom::power(n as i64));
        }
        assert_eq!(Nil2Hom::alpha(2).image(0).to_string(), "x1 x2");
        assert_eq!(
            Nil2Hom::retraction(2, 0).unwrap().to_strings(),
            vec!["x1".to_string(), "1".to_string()]
        );
    }

    #[test]
    fn abelianization_examples() {
        assert!(Nil2Hom::identity(3).abelianize().unwrap().is_identity());
        assert_eq!(Nil2Hom::alpha(2).abelianize().unwrap().column(0), vec![1, 1]);
        let c = Nil2Hom::beta(2).compose(&Nil2Hom::alpha(2)).unwrap();
        assert_eq!(c.abelianize().unwrap(), IntMatrix::diagonal(&[2]));
    }

    #[test]
    fn injections() {
        let inc = Nil2Hom::structural(&StructuralMap::InclusionOf {
            target: 3,
            injection: vec![2, 0],
        })
        .unwrap();
        let proj = Nil2Hom::structural(&StructuralMap::ProjectionOf {
            source: 3,
            injection: vec![2, 0],
        })
        .unwrap();
        assert!(proj.compose(&inc).unwrap().is_identity());
        assert!(Nil2Hom::structural(&StructuralMap::InclusionOf {
            target: 3,
            injection: vec![1, 1],
        })
        .is_err());
    }

    #[test]
    fn substitution_is_functorial() {
        let a = Nil2Hom::parse(2, 2, &["x1 x2^2", "x2 x1^-1"]).unwrap();
        let b = Nil2Hom::parse(2, 1, &["x1^3", "x1^-1"]).unwrap();
        let ba = b.compose(&a).unwrap();
        for r in 0..3 {
            assert_eq!(
                b.substitute(r).compose(&a.substitute(r)).unwrap(),
                ba.substitute(r)
            );
        }
        assert_eq!(a.substitute(1), a);
    }

    #[test]
    fn wedge_and_copair() {
        let f = Nil2Hom::power(2);
        let w = f.wedge(&Nil2Hom::power(-1));
        assert_eq!(w.to_strings(), vec!["x1^2".to_string(), "x2^-1".to_string()]);
        let c = Nil2Hom::identity(1).copair(&Nil2Hom::power(-1)).unwrap();
        assert_eq!(c.compose(&Nil2Hom::alpha(2)).unwrap(), Nil2Hom::zero(1, 1));
    }
}
