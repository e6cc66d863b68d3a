//! Exact-arithmetic toolkit for almost-conjugate (Gassmann) subgroup pairs
//! and the integer transplantation maps they induce.
//!
//! Everything here is exact: permutation groups are enumerated explicitly,
//! linear algebra runs over `BigInt` / `BigRational` (no floating point
//! anywhere), and every certificate the library emits is backed by an
//! identity that has been re-verified with exact arithmetic.
//!
//! The main flow:
//!
//! 1. [`group`] enumerates a finite permutation group, its subgroups,
//!    conjugacy classes and coset spaces.
//! 2. [`gassmann`] decides whether two subgroups are almost conjugate
//!    (every conjugacy class meets both in equally many elements) and,
//!    independently, whether their coset representations are equivalent.
//! 3. [`transplant`] solves the equivariance system exactly, finds an
//!    invertible intertwiner `T`, and clears denominators to an integer
//!    pair `(tau, sigma)` with `sigma * tau = tau * sigma = n * Id`.
//!    The pair is then pushed through invariants and coinvariants of
//!    arbitrary modules.
//! 4. [`gcomplex`] builds free group actions on simplicial complexes
//!    (joins of copies of the group), takes quotients, and transplants
//!    chains and homology between the two quotients.
//! 5. [`isogeny`] certifies that an integer matrix is injective with
//!    finite cokernel (a lattice isogeny), via Smith normal form.
//! 6. [`spectra`] computes quotient Laplacians and their exact
//!    characteristic polynomials, certifying isospectrality.
//!
//! The scalar layer is generic (`matrix::Matrix<T>` over `num-traits`
//! bounds); the concrete instantiations used throughout are exported
//! here as [`IntegerMatrix`] and [`RationalMatrix`].

pub mod error;
pub mod perm;
pub mod group;
pub mod gassmann;
pub mod matrix;
pub mod gmodule;
pub mod transplant;
pub mod gcomplex;
pub mod isogeny;
pub mod spectra;
pub mod io;

pub use error::Error;
pub use matrix::Matrix;

/// Exact integer scalar used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Dense matrix over arbitrary-precision integers.
pub type IntegerMatrix = Matrix<Int>;
/// Dense matrix over arbitrary-precision rationals.
pub type RationalMatrix = Matrix<Rat>;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Convert an integer matrix to a rational one.
pub fn int_to_rat(m: &IntegerMatrix) -> RationalMatrix {
    m.map(|x| Rat::from_integer(x.clone()))
}

/// Convert a rational matrix with unit denominators to an integer one.
///
/// Returns `None` if any entry has a non-trivial denominator.
pub fn rat_to_int(m: &RationalMatrix) -> Option<IntegerMatrix> {
    use num_traits::One;
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for x in m.entries() {
        if !x.denom().is_one() {
            return None;
        }
        out.push(x.numer().clone());
    }
    Some(Matrix::from_vec(m.rows(), m.cols(), out))
}
