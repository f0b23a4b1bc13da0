use super::{IntMatrix, LinalgError};

/// Smith normal form `P A Q = D` with unimodular `P`, `Q`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub p: IntMatrix,
    pub q: IntMatrix,
    /// Diagonal of `D`, nonnegative, each entry dividing the next nonzero one.
    pub diag: Vec<i64>,
    pub rank: usize,
}

struct Work {
    a: Vec<Vec<i64>>,
    p: Vec<Vec<i64>>,
    q: Vec<Vec<i64>>,
}

fn axpy(dst: &mut [i64], src: &[i64], k: i64) -> Result<(), LinalgError> {
    if k == 0 {
        return Ok(());
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = s
                .checked_mul(k)
                .and_then(|v| d.checked_add(v))
                .ok_or(LinalgError::Overflow)?;
        }
    }
    Ok(())
}

impl Work {
    fn rows(&self) -> usize {
        self.a.len()
    }
    fn cols(&self) -> usize {
        self.q.len()
    }

    // row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: i64) -> Result<(), LinalgError> {
        let src = self.a[j].clone();
        axpy(&mut self.a[i], &src, k)?;
        let src = self.p[j].clone();
        axpy(&mut self.p[i], &src, k)
    }

    // col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: i64) -> Result<(), LinalgError> {
        if k == 0 {
            return Ok(());
        }
        for row in self.a.iter_mut().chain(self.q.iter_mut()) {
            let s = row[j];
            if s != 0 {
                row[i] = s
                    .checked_mul(k)
                    .and_then(|v| row[i].checked_add(v))
                    .ok_or(LinalgError::Overflow)?;
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.p.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.q.iter_mut()) {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.p[i].iter_mut()) {
            *x = -*x;
        }
    }
}

/// Computes the Smith normal form of `a` with transforms.
pub fn smith_normal_form(a: &IntMatrix) -> Result<Smith, LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_rows(),
        p: IntMatrix::identity(m).to_rows(),
        q: IntMatrix::identity(n).to_rows(),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize, i64)> = None;
        for i in t..w.rows() {
            for j in t..w.cols() {
                let v = w.a[i][j].unsigned_abs();
                if v != 0 && best.is_none_or(|(_, _, b)| v < b as u64) {
                    best = Some((i, j, v as i64));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let piv = w.a[t][t];
                let q = w.a[i][t].div_euclid(piv);
                w.add_row(i, t, -q)?;
                if w.a[i][t] != 0 {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let piv = w.a[t][t];
                let q = w.a[t][j].div_euclid(piv);
                w.add_col(j, t, -q)?;
                if w.a[t][j] != 0 {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let piv = w.a[t][t];
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if w.a[i][j] % piv != 0 {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => w.add_row(t, i, 1)?,
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    let diag: Vec<i64> = (0..m.min(n)).map(|i| w.a[i][i]).collect();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    Ok(Smith {
        p: IntMatrix::from_rows(&w.p, m)?,
        q: IntMatrix::from_rows(&w.q, n)?,
        diag,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a).unwrap();
        let d = s.p.checked_mul(a).unwrap().checked_mul(&s.q).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.diag[i] } else { 0 };
                assert_eq!(d.get(i, j), expect, "{a:?}");
            }
        }
        let nz: Vec<i64> = s.diag.iter().copied().filter(|&x| x != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn known_invariant_factors() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3)
            .unwrap();
        assert_eq!(check(&a).diag, vec![2, 6, 12]);
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(check(&b).diag, vec![1, 6]);
    }

    #[test]
    fn degenerate_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
        assert_eq!(check(&IntMatrix::zeros(2, 2)).rank, 0);
    }

    use proptest::prelude::*;
    proptest! {
        #[test]
        fn smith_is_a_factorization(rows in 1usize..5, cols in 1usize..5,
                                     seed in proptest::collection::vec(-6i64..7, 25)) {
            let a = IntMatrix::from_vec(rows, cols, seed[..rows * cols].to_vec()).unwrap();
            check(&a);
        }
    }
}
