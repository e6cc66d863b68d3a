//! Exact elimination over a field scalar: reduced row echelon form,
//! nullspace bases, inverses and determinants.
//!
//! Pivoting is "first nonzero" — over an exact field there is no numerical
//! reason to prefer large pivots, and first-nonzero keeps every result
//! deterministic.

use super::Matrix;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar bound for exact field elimination (satisfied by `BigRational`).
pub trait FieldScalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> FieldScalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Div<Output = Self>
{
}

/// Reduced row echelon form.  Returns the reduced matrix and the pivot
/// column indices (one per nonzero row, strictly increasing).
pub fn rref<T: FieldScalar>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // First nonzero entry in column c at or below row r.
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = T::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let delta = f.clone() * a[(r, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank over the scalar field.
pub fn rank<T: FieldScalar>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of the right nullspace `{x : m x = 0}`.
///
/// One basis vector per free column, in increasing free-column order; the
/// vector for free column `f` has a 1 in position `f`.  This normal form is
/// deterministic and convenient to read back.
pub fn nullspace<T: FieldScalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![T::zero(); cols];
        v[f] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            // Row `row` reads: x_p + sum over free columns c of r[row][c] x_c = 0.
            v[p] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exact inverse of a square matrix, or `None` if singular.
pub fn inverse<T: FieldScalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    aug = red;
    Some(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
}

/// Exact determinant of a square matrix by fraction-producing elimination.
pub fn det<T: FieldScalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut acc = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return T::zero();
        };
        if p != c {
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = tmp;
            }
            acc = -acc;
        }
        acc = acc * a[(c, c)].clone();
        let inv = T::one() / a[(c, c)].clone();
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone() * inv.clone();
            for j in c..n {
                let delta = f.clone() * a[(c, j)].clone();
                a[(i, j)] = a[(i, j)].clone() - delta;
            }
        }
    }
    acc
}

/// Solve `m x = b` exactly.  Returns `None` if inconsistent; when the
/// system is underdetermined the solution with zero free coordinates is
/// returned.
pub fn solve<T: FieldScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(m.rows(), b.len(), "solve dimension mismatch");
    let aug = Matrix::from_fn(m.rows(), m.cols() + 1, |i, j| {
        if j < m.cols() {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return None; // a pivot in the constant column: inconsistent
    }
    let mut x = vec![T::zero(); m.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red[(row, m.cols())].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, RationalMatrix};
    use num_traits::Zero;

    fn rm(rows: usize, cols: usize, v: &[i64]) -> RationalMatrix {
        Matrix::from_vec(rows, cols, v.iter().map(|&x| Rat::from_integer(x.into())).collect())
    }

    #[test]
    fn rref_and_rank() {
        let a = rm(3, 3, &[1, 2, 3, 2, 4, 6, 1, 1, 1]);
        let (_, pivots) = rref(&a);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn nullspace_is_exact_kernel() {
        let a = rm(2, 4, &[1, 2, 0, 1, 0, 0, 1, 1]);
        let basis = nullspace(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // Deterministic normal form: free columns are 1 and 3.
        assert_eq!(basis[0][1], Rat::from_integer(1.into()));
        assert_eq!(basis[1][3], Rat::from_integer(1.into()));
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let a = rm(2, 2, &[2, 1, 1, 1]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(2));
        assert_eq!(inv.mul(&a), RationalMatrix::identity(2));
        assert!(inverse(&rm(2, 2, &[1, 2, 2, 4])).is_none());
    }

    #[test]
    fn determinant_values() {
        assert_eq!(det(&rm(2, 2, &[2, 1, 1, 1])), Rat::from_integer(1.into()));
        assert_eq!(det(&rm(2, 2, &[1, 2, 2, 4])), Rat::zero());
        assert_eq!(
            det(&rm(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0])),
            Rat::from_integer(1.into())
        );
        assert_eq!(det(&rm(0, 0, &[])), Rat::from_integer(1.into()));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = rm(2, 2, &[1, 1, 1, -1]);
        let b = vec![Rat::from_integer(3.into()), Rat::from_integer(1.into())];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let s = rm(2, 2, &[1, 1, 1, 1]);
        let bad = vec![Rat::from_integer(0.into()), Rat::from_integer(1.into())];
        assert!(solve(&s, &bad).is_none());
    }
}
