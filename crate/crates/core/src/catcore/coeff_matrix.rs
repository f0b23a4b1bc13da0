use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::AbGroupPresentation;
use crate::linalg::{IntMatrix, LinalgError};

/// Matrix with entries in a finitely generated abelian group `M`.
///
/// Storage is coefficient-major: coordinate `k` of entry `(i, j)` sits at
/// `k * rows * cols + i * cols + j`. With this layout the coordinate vector
/// is an element of the invariant-factor presentation of `M^{rows×cols}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    coeff: Arc<AbGroupPresentation>,
    data: Vec<i64>,
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize, coeff: Arc<AbGroupPresentation>) -> Self {
        let len = rows * cols * coeff.dim();
        CoeffMatrix {
            rows,
            cols,
            coeff,
            data: vec![0; len],
        }
    }

    /// Wraps a coordinate vector, reducing it.
    pub fn from_coords(
        rows: usize,
        cols: usize,
        coeff: Arc<AbGroupPresentation>,
        data: Vec<i64>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols * coeff.dim() {
            return Err(LinalgError::Dimension {
                expected: rows * cols * coeff.dim(),
                found: data.len(),
            });
        }
        let mut m = CoeffMatrix {
            rows,
            cols,
            coeff,
            data,
        };
        m.reduce();
        Ok(m)
    }

    /// `A ⊗ a`: every entry of the integer matrix multiplied by `a ∈ M`.
    pub fn from_int_matrix(a: &IntMatrix, elem: &[i64], coeff: Arc<AbGroupPresentation>) -> Self {
        let mut m = Self::zeros(a.rows(), a.cols(), coeff);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v: Vec<i64> = elem.iter().map(|x| x * a.get(i, j)).collect();
                m.set(i, j, &v);
            }
        }
        m
    }

    fn slice_len(&self) -> usize {
        self.rows * self.cols
    }

    fn reduce(&mut self) {
        let s = self.slice_len();
        for k in 0..self.coeff.dim() {
            let d = self.coeff.modulus(k);
            if d != 0 {
                for x in &mut self.data[k * s..(k + 1) * s] {
                    *x = x.rem_euclid(d);
                }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeff(&self) -> &Arc<AbGroupPresentation> {
        &self.coeff
    }

    /// Coordinate vector in the presentation of `M^{rows×cols}`.
    pub fn coords(&self) -> &[i64] {
        &self.data
    }

    pub fn presentation(&self) -> AbGroupPresentation {
        self.coeff.power(self.slice_len())
    }

    pub fn get(&self, i: usize, j: usize) -> Vec<i64> {
        let s = self.slice_len();
        (0..self.coeff.dim())
            .map(|k| self.data[k * s + i * self.cols + j])
            .collect()
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[i64]) {
        let s = self.slice_len();
        for (k, &x) in v.iter().enumerate() {
            let d = self.coeff.modulus(k);
            self.data[k * s + i * self.cols + j] = if d == 0 { x } else { x.rem_euclid(d) };
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_shape(&self, o: &CoeffMatrix) -> Result<(), LinalgError> {
        if self.rows != o.rows || self.cols != o.cols || self.coeff != o.coeff {
            return Err(LinalgError::Shape {
                expected: (self.rows, self.cols),
                found: (o.rows, o.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &CoeffMatrix) -> Result<CoeffMatrix, LinalgError> {
        self.same_shape(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.checked_add(*b).ok_or(LinalgError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coords(self.rows, self.cols, self.coeff.clone(), data)
    }

    pub fn sub(&self, o: &CoeffMatrix) -> Result<CoeffMatrix, LinalgError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CoeffMatrix {
        let mut m = CoeffMatrix {
            rows: self.rows,
            cols: self.cols,
            coeff: self.coeff.clone(),
            data: self.data.iter().map(|x| -x).collect(),
        };
        m.reduce();
        m
    }

    /// `b · self` for an integer matrix `b`.
    pub fn left_mul(&self, b: &IntMatrix) -> Result<CoeffMatrix, LinalgError> {
        if b.cols() != self.rows {
            return Err(LinalgError::Shape {
                expected: (b.rows(), self.rows),
                found: (b.rows(), b.cols()),
            });
        }
        let (r, c) = (b.rows(), self.cols);
        let s = self.slice_len();
        let mut data = vec![0i64; r * c * self.coeff.dim()];
        for k in 0..self.coeff.dim() {
            for i in 0..r {
                for l in 0..self.rows {
                    let bil = b.get(i, l);
                    if bil == 0 {
                        continue;
                    }
                    for j in 0..c {
                        let x = self.data[k * s + l * self.cols + j];
                        if x == 0 {
                            continue;
                        }
                        let idx = k * r * c + i * c + j;
                        data[idx] = bil
                            .checked_mul(x)
                            .and_then(|p| data[idx].checked_add(p))
                            .ok_or(LinalgError::Overflow)?;
                    }
                }
            }
        }
        Self::from_coords(r, c, self.coeff.clone(), data)
    }

    /// `self · a` for an integer matrix `a`.
    pub fn right_mul(&self, a: &IntMatrix) -> Result<CoeffMatrix, LinalgError> {
        if a.rows() != self.cols {
            return Err(LinalgError::Shape {
                expected: (self.cols, a.cols()),
                found: (a.rows(), a.cols()),
            });
        }
        let (r, c) = (self.rows, a.cols());
        let s = self.slice_len();
        let mut data = vec![0i64; r * c * self.coeff.dim()];
        for k in 0..self.coeff.dim() {
            for i in 0..r {
                for l in 0..self.cols {
                    let x = self.data[k * s + i * self.cols + l];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..c {
                        let alj = a.get(l, j);
                        if alj == 0 {
                            continue;
                        }
                        let idx = k * r * c + i * c + j;
                        data[idx] = alj
                            .checked_mul(x)
                            .and_then(|p| data[idx].checked_add(p))
                            .ok_or(LinalgError::Overflow)?;
                    }
                }
            }
        }
        Self::from_coords(r, c, self.coeff.clone(), data)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CoeffMatrix {
        let mut out = Self::zeros(rows, cols, self.coeff.clone());
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, &self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn write_block(&mut self, r0: usize, c0: usize, b: &CoeffMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, &b.get(i, j));
            }
        }
    }

    pub fn direct_sum(&self, o: &CoeffMatrix) -> CoeffMatrix {
        let mut out = Self::zeros(self.rows + o.rows, self.cols + o.cols, self.coeff.clone());
        out.write_block(0, 0, self);
        out.write_block(self.rows, self.cols, o);
        out
    }

    /// Entries as nested lists of coordinate vectors.
    pub fn entries(&self) -> Vec<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn from_entries(
        entries: &[Vec<Vec<i64>>],
        cols: usize,
        coeff: Arc<AbGroupPresentation>,
    ) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(entries.len(), cols, coeff.clone());
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape {
                    expected: (entries.len(), cols),
                    found: (entries.len(), row.len()),
                });
            }
            for (j, e) in row.iter().enumerate() {
                if e.len() != coeff.dim() {
                    return Err(LinalgError::Dimension {
                        expected: coeff.dim(),
                        found: e.len(),
                    });
                }
                m.set(i, j, e);
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} over {}: {:?}", self.rows, self.cols, self.coeff, self.entries())
    }
}

impl Serialize for CoeffMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Arc<AbGroupPresentation> {
        Arc::new("Z+Z/2".parse().unwrap())
    }

    #[test]
    fn layout_matches_power_presentation() {
        let x = CoeffMatrix::zeros(2, 3, m());
        let p = x.presentation();
        assert_eq!(p.free_rank(), 6);
        assert_eq!(p.torsion(), &[2; 6]);
        let mut y = x.clone();
        y.set(1, 2, &[5, 3]);
        assert_eq!(y.get(1, 2), vec![5, 1]);
        assert_eq!(y.coords()[5], 5);
        assert_eq!(y.coords()[11], 1);
    }

    #[test]
    fn bilinear_actions() {
        let mut x = CoeffMatrix::zeros(2, 1, m());
        x.set(0, 0, &[1, 1]);
        x.set(1, 0, &[2, 0]);
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![0, 3]], 2).unwrap();
        let bx = x.left_mul(&b).unwrap();
        assert_eq!(bx.get(0, 0), vec![3, 1]);
        assert_eq!(bx.get(1, 0), vec![6, 0]);
        let a = IntMatrix::from_rows(&[vec![2, -1]], 2).unwrap();
        let xa = x.right_mul(&a).unwrap();
        assert_eq!(xa.get(0, 0), vec![2, 0]);
        assert_eq!(xa.get(0, 1), vec![-1, 1]);
        // (b x) a = b (x a)
        assert_eq!(
            bx.right_mul(&a).unwrap(),
            x.right_mul(&a).unwrap().left_mul(&b).unwrap()
        );
    }
}
