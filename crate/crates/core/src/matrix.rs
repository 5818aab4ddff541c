//! Dense integer matrices.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Option<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return None;
            }
            data.extend_from_slice(r);
        }
        Some(Matrix { rows: rows.len(), cols, data })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[i64]) {
        for (i, &v) in col.iter().enumerate() {
            self.set(i, j, v);
        }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0)
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        out.add_to(i, j, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.rows, v.len(), "vector-matrix dimension mismatch");
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a != 0 {
                for (j, o) in out.iter_mut().enumerate() {
                    *o += a * self.get(i, j);
                }
            }
        }
        out
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        use num::{BigInt, Zero};
        let mut a: Vec<Vec<BigInt>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let g = a[rank][col].clone();
                    for c in col..self.cols {
                        let v = &a[r][c] * &g - &a[rank][c] * &f;
                        a[r][c] = v;
                    }
                    let gcd = a[r].iter().fold(BigInt::zero(), |acc, v| num::Integer::gcd(&acc, v));
                    if !gcd.is_zero() {
                        for v in a[r].iter_mut() {
                            *v /= &gcd;
                        }
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

/// Serialized as a dense row-major list of rows; the column count travels separately.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Deserialized with a column count inferred from the first row, so empty matrices come back as `0x0`.
/// Callers that know the true shape fix it up with [`Matrix::reshaped`].
impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(&rows, cols).ok_or_else(|| serde::de::Error::custom("ragged matrix rows"))
    }
}

impl Matrix {
    /// Returns the matrix with the given shape if it is compatible; empty matrices take any shape.
    pub fn reshaped(self, rows: usize, cols: usize) -> Option<Matrix> {
        if self.rows == rows && self.cols == cols {
            Some(self)
        } else if self.data.is_empty() && (rows == 0 || cols == 0) {
            Some(Matrix::zeros(rows, cols))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_rank() {
        let a = Matrix::from_rows(&[vec![1, 2], vec![2, 4]], 2).unwrap();
        assert_eq!(a.rank(), 1);
        let b = Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2).unwrap();
        assert_eq!(a.mul(&b).to_rows(), vec![vec![2, 1], vec![4, 2]]);
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(Matrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn empty_shapes_reshape() {
        let m: Matrix = serde_json::from_str("[]").unwrap();
        assert_eq!(m.clone().reshaped(0, 3).unwrap().cols(), 3);
        assert_eq!(m.reshaped(2, 0).unwrap().rows(), 2);
    }
}
