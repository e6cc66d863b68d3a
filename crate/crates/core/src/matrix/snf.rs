//! Smith normal form over the integers, with optional tracking of the
//! unimodular transforms and their inverses.
//!
//! `U * A * V = D` with `D` diagonal, every diagonal entry dividing the
//! next.  Pivot selection takes a nonzero entry of minimal absolute value
//! in the active submatrix (short-circuiting on ±1), which keeps entry
//! growth tame on the boundary matrices this crate feeds it.
//!
//! The scalar is generic: the crate runs large instances over `i128` with
//! checked arithmetic (any overflow aborts cleanly with [`Error::Overflow`])
//! and retries over `BigInt`, so results are always exact.

use super::Matrix;
use crate::error::Error;
use crate::{Int, IntegerMatrix};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

/// Scalar usable in the generic SNF kernel.
pub trait SnfScalar:
    Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul + std::fmt::Debug
{
}

impl<T> SnfScalar for T where
    T: Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul + std::fmt::Debug
{
}

/// Which transform matrices to accumulate.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnfFlags {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl SnfFlags {
    pub fn none() -> Self {
        SnfFlags::default()
    }

    pub fn all() -> Self {
        SnfFlags {
            u: true,
            u_inv: true,
            v: true,
            v_inv: true,
        }
    }
}

/// Result of a Smith normal form computation.
#[derive(Clone)]
pub struct Snf<T> {
    /// Diagonal form, same shape as the input.
    pub d: Matrix<T>,
    /// Row transform (`u * a * v = d`), if requested.
    pub u: Option<Matrix<T>>,
    pub u_inv: Option<Matrix<T>>,
    /// Column transform, if requested.
    pub v: Option<Matrix<T>>,
    pub v_inv: Option<Matrix<T>>,
    /// The nonzero invariant factors, positive, each dividing the next.
    pub factors: Vec<T>,
}

impl<T: SnfScalar> Snf<T> {
    /// Rank of the input matrix.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Basis of the integer kernel: the last `cols - rank` columns of `v`.
    ///
    /// Requires `v` to have been tracked; the columns are returned as a
    /// `cols x nullity` matrix.
    pub fn kernel_basis(&self) -> Option<Matrix<T>> {
        let v = self.v.as_ref()?;
        let nullity = v.cols() - self.rank();
        let picked: Vec<usize> = (v.cols() - nullity..v.cols()).collect();
        Some(v.select_cols(&picked))
    }
}

struct Worker<T> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
    u_inv: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
}

impl<T: SnfScalar> Worker<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for mat in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            for c in 0..mat.cols() {
                let tmp = mat[(i, c)].clone();
                mat[(i, c)] = mat[(j, c)].clone();
                mat[(j, c)] = tmp;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for r in 0..ui.rows() {
                let tmp = ui[(r, i)].clone();
                ui[(r, i)] = ui[(r, j)].clone();
                ui[(r, j)] = tmp;
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for mat in [Some(&mut self.a), self.v.as_mut()].into_iter().flatten() {
            for r in 0..mat.rows() {
                let tmp = mat[(r, i)].clone();
                mat[(r, i)] = mat[(r, j)].clone();
                mat[(r, j)] = tmp;
            }
        }
        if let Some(vi) = self.v_inv.as_mut() {
            for c in 0..vi.cols() {
                let tmp = vi[(i, c)].clone();
                vi[(i, c)] = vi[(j, c)].clone();
                vi[(j, c)] = tmp;
            }
        }
    }

    /// row_i -= q * row_t (and the matching transform updates).
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Result<(), Error> {
        if q.is_zero() {
            return Ok(());
        }
        for mat in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            for c in 0..mat.cols() {
                if mat[(t, c)].is_zero() {
                    continue;
                }
                let prod = q.checked_mul(&mat[(t, c)]).ok_or(Error::Overflow)?;
                mat[(i, c)] = mat[(i, c)].checked_sub(&prod).ok_or(Error::Overflow)?;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // (row_i -= q row_t)^{-1} applied on the right: col_t += q * col_i.
            for r in 0..ui.rows() {
                if ui[(r, i)].is_zero() {
                    continue;
                }
                let prod = q.checked_mul(&ui[(r, i)]).ok_or(Error::Overflow)?;
                ui[(r, t)] = ui[(r, t)].checked_add(&prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    /// col_j -= q * col_t (and the matching transform updates).
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Result<(), Error> {
        if q.is_zero() {
            return Ok(());
        }
        for mat in [Some(&mut self.a), self.v.as_mut()].into_iter().flatten() {
            for r in 0..mat.rows() {
                if mat[(r, t)].is_zero() {
                    continue;
                }
                let prod = q.checked_mul(&mat[(r, t)]).ok_or(Error::Overflow)?;
                mat[(r, j)] = mat[(r, j)].checked_sub(&prod).ok_or(Error::Overflow)?;
            }
        }
        if let Some(vi) = self.v_inv.as_mut() {
            // inverse on the left: row_t += q * row_j.
            for c in 0..vi.cols() {
                if vi[(j, c)].is_zero() {
                    continue;
                }
                let prod = q.checked_mul(&vi[(j, c)]).ok_or(Error::Overflow)?;
                vi[(t, c)] = vi[(t, c)].checked_add(&prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for mat in [Some(&mut self.a), self.u.as_mut()].into_iter().flatten() {
            for c in 0..mat.cols() {
                let x = mat[(i, c)].clone();
                mat[(i, c)] = -x;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for r in 0..ui.rows() {
                let x = ui[(r, i)].clone();
                ui[(r, i)] = -x;
            }
        }
    }

    /// Nonzero entry of minimal absolute value in the active submatrix
    /// `[t.., t..]`, short-circuiting on ±1.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if ax.is_one() {
                    return Some((i, j));
                }
                match &best {
                    Some((_, _, b)) if *b <= ax => {}
                    _ => best = Some((i, j, ax)),
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clear row `t` and column `t` outside the pivot at `(t, t)` by
    /// Euclidean steps (the pivot shrinks to the gcd as a side effect).
    fn clear_pivot(&mut self, t: usize) -> Result<(), Error> {
        'outer: loop {
            for i in t + 1..self.a.rows() {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = self.a[(i, t)].div_rem(&self.a[(t, t)]).0;
                self.row_sub(i, t, &q)?;
                if !self.a[(i, t)].is_zero() {
                    // Remainder is smaller than the pivot: promote it.
                    self.swap_rows(i, t);
                    continue 'outer;
                }
            }
            for j in t + 1..self.a.cols() {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = self.a[(t, j)].div_rem(&self.a[(t, t)]).0;
                self.col_sub(j, t, &q)?;
                if !self.a[(t, j)].is_zero() {
                    self.swap_cols(j, t);
                    continue 'outer;
                }
            }
            return Ok(());
        }
    }
}

/// Smith normal form of `a`, tracking the transforms selected in `flags`.
///
/// Errors only with [`Error::Overflow`] when the scalar is fixed-width;
/// over `BigInt` it always succeeds.
pub fn smith_normal_form<T: SnfScalar>(a: &Matrix<T>, flags: SnfFlags) -> Result<Snf<T>, Error> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Worker {
        a: a.clone(),
        u: flags.u.then(|| Matrix::identity(rows)),
        u_inv: flags.u_inv.then(|| Matrix::identity(rows)),
        v: flags.v.then(|| Matrix::identity(cols)),
        v_inv: flags.v_inv.then(|| Matrix::identity(cols)),
    };

    // Diagonalize.
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.find_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        w.clear_pivot(t)?;
        rank = t + 1;
    }

    // Positive diagonal.
    for t in 0..rank {
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }

    // Enforce the divisibility chain d_k | d_{k+1}.
    loop {
        let mut dirty = false;
        for k in 0..rank.saturating_sub(1) {
            let (dk, dk1) = (w.a[(k, k)].clone(), w.a[(k + 1, k + 1)].clone());
            if dk1.is_multiple_of(&dk) {
                continue;
            }
            dirty = true;
            // col_k += col_{k+1} puts d_{k+1} below the pivot; the Euclidean
            // clearing then replaces the pair by (gcd, +-lcm).
            let minus_one = T::zero() - T::one();
            w.col_sub(k, k + 1, &minus_one)?;
            w.clear_pivot(k)?;
            if w.a[(k, k)].is_negative() {
                w.negate_row(k);
            }
            if w.a[(k + 1, k + 1)].is_negative() {
                w.negate_row(k + 1);
            }
        }
        if !dirty {
            break;
        }
    }

    let factors: Vec<T> = (0..rank).map(|t| w.a[(t, t)].clone()).collect();
    debug_assert!(factors
        .windows(2)
        .all(|p| p[1].is_multiple_of(&p[0])));

    Ok(Snf {
        d: w.a,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        factors,
    })
}

/// Smith normal form over `BigInt` (cannot overflow).
pub fn smith_normal_form_big(a: &IntegerMatrix, flags: SnfFlags) -> Snf<Int> {
    smith_normal_form(a, flags).expect("big-integer SNF cannot overflow")
}

/// Smith normal form of a big-integer matrix using an `i128` fast path,
/// falling back to `BigInt` when entries do not fit or overflow occurs.
/// The result is identical to the pure big-integer computation.
pub fn smith_normal_form_fast(a: &IntegerMatrix, flags: SnfFlags) -> Snf<Int> {
    let small: Option<Vec<i128>> = a
        .entries()
        .map(|x| i128::try_from(x.clone()).ok())
        .collect();
    if let Some(data) = small {
        let m = Matrix::from_vec(a.rows(), a.cols(), data);
        if let Ok(snf) = smith_normal_form(&m, flags) {
            let lift = |m: &Matrix<i128>| m.map(|&x| Int::from(x));
            return Snf {
                d: lift(&snf.d),
                u: snf.u.as_ref().map(&lift),
                u_inv: snf.u_inv.as_ref().map(&lift),
                v: snf.v.as_ref().map(&lift),
                v_inv: snf.v_inv.as_ref().map(&lift),
                factors: snf.factors.iter().map(|&x| Int::from(x)).collect(),
            };
        }
    }
    smith_normal_form_big(a, flags)
}

/// Smith normal form of a column-sparse integer matrix.  Builds the
/// `i128` dense working copy straight from the sparse columns (the usual
/// case for boundary matrices); falls back to big integers on overflow.
pub fn smith_normal_form_sparse(
    a: &crate::matrix::sparse::SparseIntMatrix,
    flags: SnfFlags,
) -> Snf<Int> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut data = vec![0i128; rows * cols];
    let mut fits = true;
    'fill: for j in 0..cols {
        for (i, x) in a.col(j) {
            match i128::try_from(x.clone()) {
                Ok(v) => data[*i as usize * cols + j] = v,
                Err(_) => {
                    fits = false;
                    break 'fill;
                }
            }
        }
    }
    if fits {
        let m = Matrix::from_vec(rows, cols, data);
        if let Ok(snf) = smith_normal_form(&m, flags) {
            let lift = |m: &Matrix<i128>| m.map(|&x| Int::from(x));
            return Snf {
                d: lift(&snf.d),
                u: snf.u.as_ref().map(&lift),
                u_inv: snf.u_inv.as_ref().map(&lift),
                v: snf.v.as_ref().map(&lift),
                v_inv: snf.v_inv.as_ref().map(&lift),
                factors: snf.factors.iter().map(|&x| Int::from(x)).collect(),
            };
        }
    }
    smith_normal_form_big(&a.to_dense(), flags)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
/// Independent of the SNF code path, so the two can cross-check each other.
pub fn det_bareiss(m: &IntegerMatrix) -> Int {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Int::zero();
            };
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(k, j)].clone();
                a[(k, j)] = tmp;
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = q;
            }
        }
        for i in k + 1..n {
            a[(i, k)] = Int::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// `U * A * V == D`, with both transforms verified unimodular.
/// Intended for small and medium matrices (tests, certificates).
pub fn verify_snf(a: &IntegerMatrix, snf: &Snf<Int>) -> bool {
    let (Some(u), Some(v)) = (&snf.u, &snf.v) else {
        return false;
    };
    if u.mul(a).mul(v) != snf.d {
        return false;
    }
    let one = Int::one();
    det_bareiss(u).abs() == one && det_bareiss(v).abs() == one
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn im(rows: usize, cols: usize, v: &[i64]) -> IntegerMatrix {
        Matrix::from_vec(rows, cols, v.iter().map(|&x| Int::from(x)).collect())
    }

    #[test]
    fn known_small_form() {
        let a = im(2, 2, &[2, 4, 6, 8]);
        let snf = smith_normal_form_big(&a, SnfFlags::all());
        assert_eq!(snf.factors, vec![Int::from(2), Int::from(4)]);
        assert!(verify_snf(&a, &snf));
        assert_eq!(det_bareiss(&a), Int::from(-8));
    }

    #[test]
    fn divisibility_chain_enforced() {
        // diag(4, 6) is not in Smith form; the true form is diag(2, 12).
        let a = im(2, 2, &[4, 0, 0, 6]);
        let snf = smith_normal_form_big(&a, SnfFlags::all());
        assert_eq!(snf.factors, vec![Int::from(2), Int::from(12)]);
        assert!(verify_snf(&a, &snf));
    }

    #[test]
    fn zero_empty_and_identity() {
        let z = IntegerMatrix::zeros(3, 2);
        let snf = smith_normal_form_big(&z, SnfFlags::all());
        assert!(snf.factors.is_empty());
        assert!(verify_snf(&z, &snf));

        let e = IntegerMatrix::zeros(0, 4);
        let snf = smith_normal_form_big(&e, SnfFlags::all());
        assert!(snf.factors.is_empty());
        assert_eq!(snf.kernel_basis().unwrap().cols(), 4);

        let id = IntegerMatrix::identity(3);
        let snf = smith_normal_form_big(&id, SnfFlags::all());
        assert_eq!(snf.factors, vec![Int::one(), Int::one(), Int::one()]);
    }

    #[test]
    fn kernel_basis_annihilates() {
        let a = im(2, 4, &[1, 2, 3, 4, 2, 4, 6, 8]);
        let snf = smith_normal_form_big(&a, SnfFlags::all());
        assert_eq!(snf.rank(), 1);
        let k = snf.kernel_basis().unwrap();
        assert_eq!(k.cols(), 3);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn transform_inverses_track() {
        let a = im(3, 3, &[2, 1, 0, 0, 3, 1, 4, 0, 5]);
        let snf = smith_normal_form_big(&a, SnfFlags::all());
        let u = snf.u.clone().unwrap();
        let ui = snf.u_inv.clone().unwrap();
        let v = snf.v.clone().unwrap();
        let vi = snf.v_inv.clone().unwrap();
        assert_eq!(u.mul(&ui), IntegerMatrix::identity(3));
        assert_eq!(vi.mul(&v), IntegerMatrix::identity(3));
        assert!(verify_snf(&a, &snf));
        // product of factors = |det| for nonsingular square input
        let prod: Int = snf.factors.iter().product();
        assert_eq!(prod, det_bareiss(&a).abs());
    }

    #[test]
    fn i64_overflow_is_detected() {
        let big = i64::MAX / 2 + 1;
        let a: Matrix<i64> = Matrix::from_vec(2, 2, vec![2, big, big, big]);
        // Eliminating with these entries must overflow i64 and report it.
        match smith_normal_form(&a, SnfFlags::none()) {
            Err(Error::Overflow) => {}
            Ok(snf) => {
                // If it happened to finish, the factors must match the exact ones.
                let exact = smith_normal_form_big(
                    &a.map(|&x| Int::from(x)),
                    SnfFlags::none(),
                );
                let lifted: Vec<Int> = snf.factors.iter().map(|&x| Int::from(x)).collect();
                assert_eq!(lifted, exact.factors);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn fast_path_matches_big_path() {
        let a = im(3, 4, &[6, 4, 2, 0, 0, 9, 3, 3, 4, 4, 4, 8]);
        let fast = smith_normal_form_fast(&a, SnfFlags::all());
        let big = smith_normal_form_big(&a, SnfFlags::all());
        assert_eq!(fast.factors, big.factors);
        assert!(verify_snf(&a, &fast));
    }
}
