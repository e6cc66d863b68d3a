//! Crate-wide error type.
//!
//! Every failure mode the library reports is a named variant here; the CLI
//! maps them onto exit codes (input problems → 2, exceeded bounds → 3,
//! negative verdicts are not errors — they are reported in certificates).

use thiserror::Error;

/// All errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Permutations of different degrees were combined.
    #[error("degree mismatch: expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    /// A point outside `0..degree` appeared in a permutation.
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    /// Not a bijection (a point repeated or missing).
    #[error("not a permutation: point {point} appears more than once")]
    NotBijective { point: usize },

    /// Group enumeration exceeded the configured closure bound.
    #[error("group closure exceeded the bound of {bound} elements")]
    ClosureBoundExceeded { bound: usize },

    /// A claimed subgroup is not closed under the group operation.
    #[error("not a subgroup: element set is not closed (ordinal {witness} escapes)")]
    NotASubgroup { witness: usize },

    /// An element ordinal outside the group was referenced.
    #[error("element ordinal {ordinal} out of range for group of order {order}")]
    OrdinalOutOfRange { ordinal: usize, order: usize },

    /// Two groups that must share a parent or degree do not.
    #[error("mismatched parent groups: {context}")]
    GroupMismatch { context: String },

    /// Cayley-embedding comparison of groups with different orders.
    #[error("order mismatch: |A| = {left} but |B| = {right}")]
    OrderMismatch { left: usize, right: usize },

    /// Matrix dimensions do not fit the requested operation.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// A square matrix required to be invertible is singular.
    #[error("singular matrix: {context}")]
    Singular { context: String },

    /// The two coset representations are not equivalent, so no invertible
    /// intertwiner exists.
    #[error("representations are not equivalent (indices {left} vs {right}, characters differ)")]
    NotEquivalent { left: usize, right: usize },

    /// The bounded search for an invertible intertwiner found none.
    #[error("intertwiner search exhausted after {attempts} attempts (space dimension {dim})")]
    SearchExhausted { attempts: usize, dim: usize },

    /// A vector claimed invariant under a subgroup is not.
    #[error("vector is not invariant under the subgroup (moved by element ordinal {witness})")]
    NotInvariant { witness: usize },

    /// The bilinear form supplied to the pairing check is not G-balanced.
    #[error("pairing is not G-balanced (fails for element ordinal {witness})")]
    NotBalanced { witness: usize },

    /// Integer overflow in a fixed-width exact computation (callers retry
    /// with big integers).
    #[error("fixed-width integer overflow during exact elimination")]
    Overflow,

    /// A group action on a complex is not free.
    #[error("action is not free: element {element} fixes the {dim}-simplex ({simplex})")]
    NotFree {
        element: String,
        dim: usize,
        simplex: String,
    },

    /// A vertex map does not send simplices to simplices.
    #[error("action is not simplicial: generator {generator} maps ({simplex}) outside the complex")]
    NotSimplicial { generator: usize, simplex: String },

    /// Generator images do not extend to a group action.
    #[error("action block is inconsistent: images do not satisfy the group relations \
             (element ordinal {element}, generator {generator})")]
    InconsistentAction { element: usize, generator: usize },

    /// A requested construction exceeds the configured size budget.
    #[error("size bound exceeded: {context} needs {needed}, budget is {budget}")]
    SizeBound {
        context: String,
        needed: usize,
        budget: usize,
    },

    /// Two lattices that must have equal rank do not.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// A claimed complex structure J fails J^2 = -Id or integrality.
    #[error("bad complex structure: {context}")]
    BadComplexStructure { context: String },

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code for this error: 2 for input problems, 3 for exceeded
    /// bounds and search exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ClosureBoundExceeded { .. }
            | Error::SizeBound { .. }
            | Error::SearchExhausted { .. }
            | Error::Overflow => 3,
            _ => 2,
        }
    }
}
