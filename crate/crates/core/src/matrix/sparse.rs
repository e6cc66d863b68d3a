//! Column-sparse integer matrices for large boundary and transplantation
//! maps (thousands of rows/columns, a handful of entries per column).

use crate::{Int, IntegerMatrix};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Sparse integer matrix stored by columns; each column is a sorted list of
/// `(row, value)` with nonzero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, Int)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m.cols[j].push((j as u32, Int::from(1)));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Set one column from unsorted (row, value) pairs; duplicate rows are
    /// summed, zero results dropped.
    pub fn set_col(&mut self, j: usize, entries: impl IntoIterator<Item = (usize, Int)>) {
        let mut acc: BTreeMap<u32, Int> = BTreeMap::new();
        for (i, v) in entries {
            assert!(i < self.rows, "row out of range");
            let slot = acc.entry(i as u32).or_insert_with(Int::zero);
            *slot += v;
        }
        self.cols[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    }

    pub fn col(&self, j: usize) -> &[(u32, Int)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        self.cols[j]
            .binary_search_by_key(&(i as u32), |e| e.0)
            .map(|k| self.cols[j][k].1.clone())
            .unwrap_or_else(|_| Int::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn scale(&self, s: &Int) -> SparseIntMatrix {
        if s.is_zero() {
            return SparseIntMatrix::zeros(self.rows, self.cols.len());
        }
        SparseIntMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|c| c.iter().map(|(i, v)| (*i, v * s)).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut out = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                out[*i as usize].push((j as u32, v.clone()));
            }
        }
        SparseIntMatrix {
            rows: self.cols.len(),
            cols: out,
        }
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(
            self.cols.len(),
            other.rows,
            "sparse product dimension mismatch"
        );
        let mut out = SparseIntMatrix::zeros(self.rows, other.cols.len());
        for j in 0..other.cols.len() {
            let mut acc: BTreeMap<u32, Int> = BTreeMap::new();
            for (k, w) in &other.cols[j] {
                for (i, v) in &self.cols[*k as usize] {
                    let slot = acc.entry(*i).or_insert_with(Int::zero);
                    *slot += v * w;
                }
            }
            out.cols[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    /// `self + other`.
    pub fn add(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols.len(), other.cols.len());
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols.len());
        for j in 0..self.cols.len() {
            let mut acc: BTreeMap<u32, Int> = BTreeMap::new();
            for (i, v) in &self.cols[j] {
                acc.insert(*i, v.clone());
            }
            for (i, v) in &other.cols[j] {
                let slot = acc.entry(*i).or_insert_with(Int::zero);
                *slot += v;
            }
            out.cols[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    /// `self - other`.
    pub fn sub(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols.len(), other.cols.len());
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols.len());
        for j in 0..self.cols.len() {
            let mut acc: BTreeMap<u32, Int> = BTreeMap::new();
            for (i, v) in &self.cols[j] {
                acc.insert(*i, v.clone());
            }
            for (i, v) in &other.cols[j] {
                let slot = acc.entry(*i).or_insert_with(Int::zero);
                *slot -= v;
            }
            out.cols[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    /// Apply to a dense vector.
    pub fn mul_dense_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols.len(), v.len());
        let mut out = vec![Int::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, w) in col {
                out[*i as usize] += w * &v[j];
            }
        }
        out
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i as usize, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_dense(m: &IntegerMatrix) -> SparseIntMatrix {
        let mut out = SparseIntMatrix::zeros(m.rows(), m.cols());
        for j in 0..m.cols() {
            let entries: Vec<(usize, Int)> = (0..m.rows())
                .filter(|&i| !m[(i, j)].is_zero())
                .map(|i| (i, m[(i, j)].clone()))
                .collect();
            out.set_col(j, entries);
        }
        out
    }

    /// Is this `c * Id`?
    pub fn is_scalar_multiple_of_identity(&self, c: &Int) -> bool {
        if self.rows != self.cols.len() {
            return false;
        }
        self.cols.iter().enumerate().all(|(j, col)| {
            if c.is_zero() {
                col.is_empty()
            } else {
                col.len() == 1 && col[0].0 as usize == j && &col[0].1 == c
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(v: &[(usize, usize, i64)], rows: usize, cols: usize) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(rows, cols);
        for j in 0..cols {
            let entries: Vec<(usize, Int)> = v
                .iter()
                .filter(|(_, jj, _)| *jj == j)
                .map(|(i, _, x)| (*i, Int::from(*x)))
                .collect();
            m.set_col(j, entries);
        }
        m
    }

    #[test]
    fn product_matches_dense() {
        let a = small(&[(0, 0, 1), (1, 0, 2), (0, 1, -1)], 2, 2);
        let b = small(&[(0, 0, 3), (1, 1, 5), (0, 1, 7)], 2, 2);
        let sparse = a.mul(&b).to_dense();
        let dense = a.to_dense().mul(&b.to_dense());
        assert_eq!(sparse, dense);
    }

    #[test]
    fn transpose_and_roundtrip() {
        let a = small(&[(0, 2, 4), (1, 0, -3)], 2, 3);
        assert_eq!(a.transpose().to_dense(), a.to_dense().transpose());
        assert_eq!(SparseIntMatrix::from_dense(&a.to_dense()), a);
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let mut m = SparseIntMatrix::zeros(2, 1);
        m.set_col(0, vec![(0, Int::from(2)), (0, Int::from(-2)), (1, Int::from(1))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), Int::from(1));
    }

    #[test]
    fn scalar_identity_check() {
        let id5 = SparseIntMatrix::identity(3).scale(&Int::from(5));
        assert!(id5.is_scalar_multiple_of_identity(&Int::from(5)));
        assert!(!id5.is_scalar_multiple_of_identity(&Int::from(4)));
    }
}
