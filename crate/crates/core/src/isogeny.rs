//! Certificates for maps of lattices and of complex tori.
//!
//! A homomorphism of full lattices `T : Z^a → Z^b` is an *isogeny* when it
//! is injective with finite cokernel; for square nonsingular `T` the
//! cokernel order is the product of the invariant factors (equivalently
//! `|det T|`).  For complex tori the map must additionally commute with
//! the complex structures.

use crate::error::Error;
use crate::matrix::rational::inverse as rational_inverse;
use crate::matrix::snf::{smith_normal_form_fast, SnfFlags};
use crate::{int_to_rat, Int, IntegerMatrix, Rat, RationalMatrix, Result};
use num_traits::{One, Zero};

/// The cokernel of a lattice map: either a finite group of known order or
/// an infinite one (the map is not surjective up to finite index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cokernel {
    Finite(Int),
    Infinite,
}

impl std::fmt::Display for Cokernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cokernel::Finite(n) => write!(f, "finite of order {n}"),
            Cokernel::Infinite => write!(f, "infinite"),
        }
    }
}

/// Outcome of a lattice-map check, with the invariant factors as the
/// underlying witness.
#[derive(Clone, Debug)]
pub struct IsogenyCertificate {
    /// Rank of the map over the rationals.
    pub rank: usize,
    /// Whether the map is injective (rank equals the number of columns).
    pub injective: bool,
    pub cokernel: Cokernel,
    /// Invariant factors of the matrix, each dividing the next.
    pub factors: Vec<Int>,
}

impl IsogenyCertificate {
    /// Injective with finite cokernel.
    pub fn is_isogeny(&self) -> bool {
        self.injective && matches!(self.cokernel, Cokernel::Finite(_))
    }
}

/// Check whether an integer matrix defines an isogeny of lattices.
pub fn lattice_isogeny_check(t: &IntegerMatrix) -> IsogenyCertificate {
    let snf = smith_normal_form_fast(t, SnfFlags::none());
    let rank = snf.rank();
    let injective = rank == t.cols();
    let cokernel = if rank == t.rows() {
        Cokernel::Finite(snf.factors.iter().product())
    } else {
        Cokernel::Infinite
    };
    IsogenyCertificate {
        rank,
        injective,
        cokernel,
        factors: snf.factors,
    }
}

/// A two-sided scaled inverse: `s·t = n·Id` and `t·s = n·Id` with `n ≠ 0`.
///
/// This certifies that `t` is an isogeny without diagonalizing it — the
/// cokernel is annihilated by `n`, hence finite with every invariant
/// factor dividing `n` and order dividing `n^rank`.  Preferred for large
/// matrices, where the Smith normal form is expensive.
pub fn scaled_inverse_certifies_isogeny(t: &IntegerMatrix, s: &IntegerMatrix, n: &Int) -> bool {
    !n.is_zero()
        && t.rows() == t.cols()
        && s.rows() == s.cols()
        && t.rows() == s.rows()
        && s.mul(t).is_scalar_multiple_of_identity(n)
        && t.mul(s).is_scalar_multiple_of_identity(n)
}

/// Outcome of a torus-map check: the underlying lattice certificate plus
/// compatibility with the complex structures.
#[derive(Clone, Debug)]
pub struct TorusIsogenyCertificate {
    pub lattice: IsogenyCertificate,
    /// `t·J₁ = J₂·t` over the rationals.
    pub commutes: bool,
}

impl TorusIsogenyCertificate {
    pub fn is_isogeny(&self) -> bool {
        self.lattice.is_isogeny() && self.commutes
    }
}

/// Check that `j` is a complex structure: square and `j² = −Id`.
fn check_complex_structure(j: &RationalMatrix, which: &str) -> Result<()> {
    if !j.is_square() {
        return Err(Error::BadComplexStructure {
            context: format!("{which} is not square"),
        });
    }
    let minus_one = -Rat::one();
    if !j.mul(j).is_scalar_multiple_of_identity(&minus_one) {
        return Err(Error::BadComplexStructure {
            context: format!("{which} does not square to minus the identity"),
        });
    }
    Ok(())
}

/// Check whether `t : (Z^a, j1) → (Z^b, j2)` defines an isogeny of
/// complex tori: an isogeny of the lattices commuting with the complex
/// structures.  The two lattices must have the same rank and the complex
/// structures must be genuine (`j² = −Id`), else the data is rejected.
pub fn torus_isogeny_check(
    t: &IntegerMatrix,
    j1: &RationalMatrix,
    j2: &RationalMatrix,
) -> Result<TorusIsogenyCertificate> {
    if t.rows() != t.cols() {
        return Err(Error::RankMismatch {
            left: t.cols(),
            right: t.rows(),
        });
    }
    check_complex_structure(j1, "the source complex structure")?;
    check_complex_structure(j2, "the target complex structure")?;
    if j1.rows() != t.cols() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "source complex structure is {}x{}, map has {} columns",
                j1.rows(),
                j1.cols(),
                t.cols()
            ),
        });
    }
    if j2.rows() != t.rows() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "target complex structure is {}x{}, map has {} rows",
                j2.rows(),
                j2.cols(),
                t.rows()
            ),
        });
    }
    let tq = int_to_rat(t);
    let commutes = tq.mul(j1) == j2.mul(&tq);
    Ok(TorusIsogenyCertificate {
        lattice: lattice_isogeny_check(t),
        commutes,
    })
}

/// The standard complex structure a nonsingular period-style matrix `p`
/// transports from multiplication by i: `J = p · J₀ · p⁻¹` with
/// `J₀ = [[0, −Id], [Id, 0]]` in n = 2m coordinates.
pub fn transported_complex_structure(p: &RationalMatrix) -> Result<RationalMatrix> {
    if !p.is_square() || p.rows() % 2 != 0 {
        return Err(Error::BadComplexStructure {
            context: "a complex structure needs even-dimensional square coordinates".into(),
        });
    }
    let n = p.rows();
    let m = n / 2;
    let j0 = RationalMatrix::from_fn(n, n, |r, c| {
        if r < m && c == r + m {
            -Rat::one()
        } else if r >= m && c == r - m {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let p_inv = rational_inverse(p).ok_or_else(|| Error::Singular {
        context: "transporting a complex structure along a singular matrix".into(),
    })?;
    Ok(p.mul(&j0).mul(&p_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::snf::det_bareiss;
    use num_integer::Integer;
    use num_traits::Signed;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn im(rows: usize, cols: usize, v: &[i64]) -> IntegerMatrix {
        IntegerMatrix::from_vec(rows, cols, v.iter().map(|&x| Int::from(x)).collect())
    }

    fn rm(n: usize, v: &[i64]) -> RationalMatrix {
        RationalMatrix::from_vec(n, n, v.iter().map(|&x| Rat::from(Int::from(x))).collect())
    }

    #[test]
    fn identity_is_an_isogeny_of_degree_one() {
        let c = lattice_isogeny_check(&IntegerMatrix::identity(4));
        assert!(c.is_isogeny());
        assert_eq!(c.cokernel, Cokernel::Finite(Int::one()));
        assert_eq!(c.rank, 4);
    }

    #[test]
    fn diagonal_map_has_product_cokernel() {
        let c = lattice_isogeny_check(&im(2, 2, &[2, 0, 0, 3]));
        assert!(c.is_isogeny());
        assert_eq!(c.cokernel, Cokernel::Finite(Int::from(6)));
        assert_eq!(c.factors, vec![Int::one(), Int::from(6)]);
    }

    #[test]
    fn rank_deficient_map_is_rejected() {
        let c = lattice_isogeny_check(&im(2, 2, &[2, 0, 0, 0]));
        assert!(!c.injective);
        assert_eq!(c.cokernel, Cokernel::Infinite);
        assert!(!c.is_isogeny());
    }

    #[test]
    fn tall_injection_has_infinite_cokernel() {
        let c = lattice_isogeny_check(&im(3, 2, &[1, 0, 0, 1, 0, 0]));
        assert!(c.injective);
        assert_eq!(c.cokernel, Cokernel::Infinite);
        assert!(!c.is_isogeny());
    }

    #[test]
    fn cokernel_order_matches_determinant() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=5);
            let m = IntegerMatrix::from_fn(n, n, |_, _| Int::from(rng.gen_range(-4i64..=4)));
            let det = det_bareiss(&m).abs();
            let c = lattice_isogeny_check(&m);
            if det.is_zero() {
                assert!(!c.is_isogeny());
            } else {
                assert_eq!(c.cokernel, Cokernel::Finite(det));
            }
        }
    }

    #[test]
    fn cokernel_order_is_multiplicative_on_composites() {
        let mut rng = StdRng::seed_from_u64(23);
        let mut seen_nontrivial = 0usize;
        for _ in 0..60 {
            let n = rng.gen_range(1..=4);
            let a = IntegerMatrix::from_fn(n, n, |_, _| Int::from(rng.gen_range(-3i64..=3)));
            let b = IntegerMatrix::from_fn(n, n, |_, _| Int::from(rng.gen_range(-3i64..=3)));
            let (ca, cb) = (lattice_isogeny_check(&a), lattice_isogeny_check(&b));
            let (Cokernel::Finite(na), Cokernel::Finite(nb)) = (&ca.cokernel, &cb.cokernel)
            else {
                continue;
            };
            let cab = lattice_isogeny_check(&a.mul(&b));
            assert_eq!(cab.cokernel, Cokernel::Finite(na * nb));
            seen_nontrivial += 1;
        }
        assert!(seen_nontrivial > 10, "the sample must exercise the law");
    }

    #[test]
    fn scaled_inverse_certificate() {
        // t = [[1,2],[0,3]], s = 3·t⁻¹ = [[3,-2],[0,1]]: st = ts = 3·Id.
        let t = im(2, 2, &[1, 2, 0, 3]);
        let s = im(2, 2, &[3, -2, 0, 1]);
        let n = Int::from(3);
        assert!(scaled_inverse_certifies_isogeny(&t, &s, &n));
        // Every invariant factor divides n, and the order divides n².
        let c = lattice_isogeny_check(&t);
        assert!(c.factors.iter().all(|f| n.is_multiple_of(f)));
        assert_eq!(c.cokernel, Cokernel::Finite(Int::from(3)));
        // A wrong witness does not certify.
        assert!(!scaled_inverse_certifies_isogeny(&t, &s, &Int::from(2)));
        assert!(!scaled_inverse_certifies_isogeny(&t, &t, &n));
        assert!(!scaled_inverse_certifies_isogeny(&t, &s, &Int::zero()));
    }

    #[test]
    fn multiplication_by_two_is_a_torus_isogeny() {
        let j = rm(2, &[0, -1, 1, 0]);
        let t = im(2, 2, &[2, 0, 0, 2]);
        let cert = torus_isogeny_check(&t, &j, &j).unwrap();
        assert!(cert.is_isogeny());
        assert!(cert.commutes);
        assert_eq!(cert.lattice.cokernel, Cokernel::Finite(Int::from(4)));
    }

    #[test]
    fn axis_stretch_does_not_commute_with_rotation() {
        let j = rm(2, &[0, -1, 1, 0]);
        let t = im(2, 2, &[1, 0, 0, 2]);
        let cert = torus_isogeny_check(&t, &j, &j).unwrap();
        assert!(cert.lattice.is_isogeny());
        assert!(!cert.commutes);
        assert!(!cert.is_isogeny());
    }

    #[test]
    fn fake_complex_structure_is_rejected() {
        let j = rm(2, &[1, 0, 0, 1]);
        let t = IntegerMatrix::identity(2);
        match torus_isogeny_check(&t, &j, &j) {
            Err(Error::BadComplexStructure { .. }) => {}
            _ => panic!("expected BadComplexStructure"),
        }
    }

    #[test]
    fn non_square_torus_map_is_rejected() {
        let j2 = rm(2, &[0, -1, 1, 0]);
        let j4 = transported_complex_structure(&int_to_rat(&IntegerMatrix::identity(4))).unwrap();
        let t = IntegerMatrix::zeros(4, 2);
        match torus_isogeny_check(&t, &j2, &j4) {
            Err(Error::RankMismatch { left: 2, right: 4 }) => {}
            _ => panic!("expected RankMismatch"),
        }
    }

    #[test]
    fn transported_structure_squares_to_minus_identity() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let p = loop {
                let cand =
                    RationalMatrix::from_fn(4, 4, |_, _| Rat::from(Int::from(rng.gen_range(-3i64..=3))));
                if rational_inverse(&cand).is_some() {
                    break cand;
                }
            };
            let j = transported_complex_structure(&p).unwrap();
            assert!(j
                .mul(&j)
                .is_scalar_multiple_of_identity(&(-Rat::one())));
            // The transported structure makes p itself commute by design:
            // p · J₀ = J · p.
            let m = 2;
            let j0 = RationalMatrix::from_fn(4, 4, |r, c| {
                if r < m && c == r + m {
                    -Rat::one()
                } else if r >= m && c == r - m {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            });
            assert_eq!(p.mul(&j0), j.mul(&p));
        }
    }
}
