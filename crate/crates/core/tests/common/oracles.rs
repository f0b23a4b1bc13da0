//! Reference implementations independent of the library code paths.

use trackwork::nilgroup::{pair_index, FreeWord, Int, Nil2Element};

/// Collects a free word modulo central commutators by adjacent swaps:
/// `x_k^e x_j^f = x_j^f x_k^e [x_j, x_k]^{-e f}` for `j < k`, with
/// `[a, b] = a⁻¹ b⁻¹ a b`. Works on single letters only.
pub fn collect_by_rewriting(w: &FreeWord) -> (Vec<i64>, Vec<i64>) {
    let n = w.rank();
    let mut letters: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in w.letters() {
        let s = e.signum();
        for _ in 0..e.abs() {
            letters.push((g, s));
        }
    }
    let mut comm = vec![0i64; n * n.saturating_sub(1) / 2];
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < letters.len() {
            let (k, e) = letters[i];
            let (j, f) = letters[i + 1];
            if k == j && e == -f {
                letters.drain(i..i + 2);
                changed = true;
                continue;
            }
            if k > j {
                letters.swap(i, i + 1);
                comm[pair_index(n, j, k)] -= e * f;
                changed = true;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    let mut gens = vec![0i64; n];
    for (g, e) in letters {
        gens[g] += e;
    }
    (gens, comm)
}

pub fn as_i64(e: &Nil2Element) -> (Vec<i64>, Vec<i64>) {
    (
        e.gen_exp().iter().map(|x| x.to_i64().unwrap()).collect(),
        e.comm_exp().iter().map(|x| x.to_i64().unwrap()).collect(),
    )
}

/// Upper unitriangular 3×3 integer matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`
/// stored as `(a, b, c)`. The group is nilpotent of class 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ut3(pub i128, pub i128, pub i128);

impl Ut3 {
    pub const ONE: Ut3 = Ut3(0, 0, 0);

    pub fn mul(self, o: Ut3) -> Ut3 {
        Ut3(self.0 + o.0, self.1 + o.1, self.2 + o.2 + self.0 * o.1)
    }

    pub fn inv(self) -> Ut3 {
        Ut3(-self.0, -self.1, -self.2 + self.0 * self.1)
    }

    pub fn pow(self, k: i64) -> Ut3 {
        let base = if k < 0 { self.inv() } else { self };
        let mut acc = Ut3::ONE;
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(base);
        }
        acc
    }

    pub fn comm(self, o: Ut3) -> Ut3 {
        self.inv().mul(o.inv()).mul(self).mul(o)
    }
}

/// Evaluates a normal form under `x_i ↦ images[i]`, reading the normal
/// form literally as a product of powers.
pub fn eval_normal_form(e: &Nil2Element, images: &[Ut3]) -> Ut3 {
    let n = e.rank();
    let mut acc = Ut3::ONE;
    for (x, a) in images.iter().zip(e.gen_exp()) {
        acc = acc.mul(x.pow(a.to_i64().unwrap()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = e.comm_at(i, j).to_i64().unwrap();
            acc = acc.mul(images[i].comm(images[j]).pow(c));
        }
    }
    acc
}

pub fn eval_word(w: &FreeWord, images: &[Ut3]) -> Ut3 {
    w.letters()
        .iter()
        .fold(Ut3::ONE, |acc, &(g, e)| acc.mul(images[g].pow(e)))
}

/// All sequences of single letters `x_g^{±1}` of length exactly `len`.
pub fn all_words(rank: usize, len: usize) -> Vec<FreeWord> {
    let letters: Vec<(usize, i64)> = (0..rank).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in &letters {
                let mut v: Vec<(usize, i64)> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|l| FreeWord::new(rank, l).unwrap())
        .collect()
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}
