//! Finite-dimensional rational G-modules given by generator images, with
//! exact invariant and coinvariant spaces and averaged G-maps.
//!
//! Vectors are columns.  A module stores one matrix per generator and
//! derives the matrix of an arbitrary element from its stored word in the
//! generators.  The homomorphism law per side:
//!
//! * `Side::Right` (`w.g`): `A(gh) = A(h) · A(g)` (apply `g` first);
//! * `Side::Left` (`g.v`): `A(gh) = A(g) · A(h)`.
//!
//! Construction verifies the law over every (element, generator) pair, so
//! an image assignment that violates a group relation is rejected.

use crate::error::Error;
use crate::group::{CosetSpace, FiniteGroup, Subgroup};
use crate::matrix::rational::{inverse, nullspace, rref};
use crate::{int_to_rat, Rat, RationalMatrix, Result};
use num_traits::{One, Zero};
use rand::Rng;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A rational representation of a [`FiniteGroup`].
#[derive(Clone)]
pub struct GModule<'g> {
    group: &'g FiniteGroup,
    side: Side,
    dim: usize,
    gen_images: Vec<RationalMatrix>,
}

impl<'g> GModule<'g> {
    /// Build a module from one invertible matrix per group generator,
    /// verifying the homomorphism law on all (element, generator) pairs.
    pub fn from_generator_images(
        group: &'g FiniteGroup,
        side: Side,
        images: Vec<RationalMatrix>,
    ) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "expected {} generator images, got {}",
                    group.generators().len(),
                    images.len()
                ),
            });
        }
        let dim = images.first().map_or(0, |m| m.rows());
        for m in &images {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "generator images must be square of a common size".into(),
                });
            }
        }
        let module = GModule {
            group,
            side,
            dim,
            gen_images: images,
        };
        module.verify()?;
        Ok(module)
    }

    /// Trivial module of the given dimension (every element acts as Id).
    pub fn trivial(group: &'g FiniteGroup, side: Side, dim: usize) -> Self {
        GModule {
            group,
            side,
            dim,
            gen_images: group
                .generators()
                .iter()
                .map(|_| RationalMatrix::identity(dim))
                .collect(),
        }
    }

    /// Permutation module of a coset action.  For `Side::Right` the
    /// generator images are the coset action matrices `M(g)`; for
    /// `Side::Left` they are `M(g^{-1})`.
    pub fn from_coset_space(cs: &CosetSpace<'g>, side: Side) -> Self {
        let group = cs.group();
        let gen_images = group
            .generator_ordinals()
            .iter()
            .map(|&g| {
                let g = match side {
                    Side::Right => g,
                    Side::Left => group.inv(g),
                };
                int_to_rat(&crate::group::coset_action_matrix(cs, g))
            })
            .collect();
        GModule {
            group,
            side,
            dim: cs.len(),
            gen_images,
        }
    }

    /// The regular module (cosets of the trivial subgroup).  Note that
    /// the `Side::Left` variant acts by `g.e_x = e_{x·g⁻¹}` (the inverse
    /// of the right action — the only left action a right coset space
    /// carries); for genuine left translation use [`Self::left_translation`].
    pub fn regular(group: &'g FiniteGroup, side: Side) -> Self {
        let cs = CosetSpace::new(group.trivial_subgroup());
        Self::from_coset_space(&cs, side)
    }

    /// ℚ[G] with left translation: `g.e_x = e_{gx}` (a left module whose
    /// Γ-coinvariant classes are the right cosets Γx).
    pub fn left_translation(group: &'g FiniteGroup) -> Self {
        let n = group.order();
        let gen_images = group
            .generator_ordinals()
            .iter()
            .map(|&s| {
                let mut m = RationalMatrix::zeros(n, n);
                for x in 0..n {
                    m[(group.mul(s, x), x)] = Rat::one();
                }
                m
            })
            .collect();
        GModule {
            group,
            side: Side::Left,
            dim: n,
            gen_images,
        }
    }

    /// Direct sum (block diagonal) of modules over the same group/side.
    pub fn direct_sum(parts: &[GModule<'g>]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::DimensionMismatch {
            context: "direct sum of no modules".into(),
        })?;
        let group = first.group;
        let side = first.side;
        for p in parts {
            if !std::ptr::eq(p.group, group) {
                return Err(Error::GroupMismatch {
                    context: "direct sum over different groups".into(),
                });
            }
            if p.side != side {
                return Err(Error::DimensionMismatch {
                    context: "direct sum of mixed sides".into(),
                });
            }
        }
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let gen_images = (0..group.generators().len())
            .map(|gi| {
                let mut m = RationalMatrix::zeros(dim, dim);
                let mut off = 0;
                for p in parts {
                    for i in 0..p.dim {
                        for j in 0..p.dim {
                            m[(off + i, off + j)] = p.gen_images[gi][(i, j)].clone();
                        }
                    }
                    off += p.dim;
                }
                m
            })
            .collect();
        Ok(GModule {
            group,
            side,
            dim,
            gen_images,
        })
    }

    /// Change of basis: the module with matrices `Q · A(g) · Q^{-1}`.
    pub fn conjugated(&self, q: &RationalMatrix) -> Result<Self> {
        let q_inv = inverse(q).ok_or(Error::Singular {
            context: "change of basis must be invertible".into(),
        })?;
        Ok(GModule {
            group: self.group,
            side: self.side,
            dim: self.dim,
            gen_images: self
                .gen_images
                .iter()
                .map(|a| q.mul(a).mul(&q_inv))
                .collect(),
        })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Compose per the side's homomorphism law: `first` acting first.
    fn compose(&self, first: &RationalMatrix, then: &RationalMatrix) -> RationalMatrix {
        match self.side {
            Side::Right => then.mul(first),
            Side::Left => first.mul(then),
        }
    }

    /// Matrix of an arbitrary element, folded along its generator word.
    pub fn act(&self, g: usize) -> RationalMatrix {
        let mut a = RationalMatrix::identity(self.dim);
        for gi in self.group.word(g) {
            a = self.compose(&a, &self.gen_images[gi]);
        }
        a
    }

    /// `A(g) · v`.
    pub fn apply(&self, g: usize, v: &[Rat]) -> Vec<Rat> {
        self.act(g).mul_vec(v)
    }

    /// Check the homomorphism law on every (element, generator) pair.
    fn verify(&self) -> Result<()> {
        let n = self.group.order();
        // A(x) for every x, one product each via the stored factorization.
        let mut table: Vec<RationalMatrix> = Vec::with_capacity(n);
        table.push(RationalMatrix::identity(self.dim));
        for x in 1..n {
            let w = self.group.word(x);
            let gi = *w.last().unwrap();
            let mut parent = 0usize;
            for &p in &w[..w.len() - 1] {
                parent = self.group.mul(parent, self.group.generator_ordinals()[p]);
            }
            let a = self.compose(&table[parent], &self.gen_images[gi]);
            table.push(a);
        }
        for x in 0..n {
            for (gi, &t) in self.group.generator_ordinals().iter().enumerate() {
                let product = self.compose(&table[x], &self.gen_images[gi]);
                if product != table[self.group.mul(x, t)] {
                    return Err(Error::InconsistentAction {
                        element: x,
                        generator: gi,
                    });
                }
            }
        }
        Ok(())
    }

    /// Basis (as columns) of the Γ-fixed subspace
    /// `{v : A(γ) v = v for all γ ∈ Γ}`.
    pub fn invariants(&self, sub: &Subgroup<'_>) -> RationalMatrix {
        let gens = effective_generators(sub);
        let mut blocks: Vec<RationalMatrix> = Vec::new();
        for g in gens {
            let a = self.act(g);
            blocks.push(&a - &RationalMatrix::identity(self.dim));
        }
        let stacked = blocks
            .into_iter()
            .fold(RationalMatrix::zeros(0, self.dim), |acc, b| acc.vstack(&b));
        let basis = nullspace(&stacked);
        let mut m = RationalMatrix::zeros(self.dim, basis.len());
        for (j, v) in basis.iter().enumerate() {
            for i in 0..self.dim {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    /// Is `v` fixed by every element of Γ?
    pub fn is_invariant(&self, sub: &Subgroup<'_>, v: &[Rat]) -> bool {
        effective_generators(sub)
            .into_iter()
            .all(|g| self.apply(g, v) == v)
    }

    /// The coinvariant space `V_Γ = V / span{γ.v − v}` (for left modules)
    /// or `V / span{v.γ − v}` (right).
    pub fn coinvariants(&self, sub: &Subgroup<'_>) -> CoinvariantSpace {
        let gens = effective_generators(sub);
        // Rows of `span` span the denominator subspace.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for g in gens {
            let a = self.act(g);
            let diff = &a - &RationalMatrix::identity(self.dim);
            for j in 0..self.dim {
                rows.push(diff.col(j));
            }
        }
        let span = if rows.is_empty() {
            RationalMatrix::zeros(0, self.dim)
        } else {
            RationalMatrix::from_rows(rows)
        };
        let (reduced, pivots) = rref(&span);
        let free: Vec<usize> = (0..self.dim).filter(|i| !pivots.contains(i)).collect();
        CoinvariantSpace {
            dim: self.dim,
            reduced,
            pivots,
            free,
        }
    }
}

/// Generators of a subgroup, defaulting to the identity for the trivial
/// subgroup so callers always have something to iterate.
fn effective_generators(sub: &Subgroup<'_>) -> Vec<usize> {
    if sub.generators().is_empty() {
        vec![0]
    } else {
        sub.generators().to_vec()
    }
}

/// The quotient of a module by the span of `{g.v − v}`, with canonical
/// coordinates on the free (non-pivot) coordinate positions.
#[derive(Clone)]
pub struct CoinvariantSpace {
    dim: usize,
    reduced: RationalMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl CoinvariantSpace {
    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient dimension.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Quotient coordinates of (the class of) an ambient vector: reduce
    /// modulo the spanned subspace, then read off the free coordinates.
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim, "ambient dimension mismatch");
        let mut w = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = w[p].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let r = self.reduced[(k, j)].clone();
                if !r.is_zero() {
                    w[j] = &w[j] - &(c.clone() * r);
                }
            }
        }
        self.free.iter().map(|&j| w[j].clone()).collect()
    }

    /// A lift of quotient coordinates back to the ambient space
    /// (supported on the free coordinates).
    pub fn lift(&self, coords: &[Rat]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.free.len(), "quotient dimension mismatch");
        let mut v = vec![Rat::zero(); self.dim];
        for (k, &j) in self.free.iter().enumerate() {
            v[j] = coords[k].clone();
        }
        v
    }
}

/// Average an arbitrary matrix into a G-map `from → to`:
/// `ψ = Σ_g B(g) · R · A(g)^{-1}`, which satisfies
/// `ψ ∘ A(g) = B(g) ∘ ψ` for every g (both sides must match).
pub fn reynolds_gmap(
    from: &GModule<'_>,
    to: &GModule<'_>,
    r: &RationalMatrix,
) -> Result<RationalMatrix> {
    if !std::ptr::eq(from.group, to.group) {
        return Err(Error::GroupMismatch {
            context: "averaging between modules of different groups".into(),
        });
    }
    if from.side != to.side {
        return Err(Error::DimensionMismatch {
            context: "averaging between modules of different sides".into(),
        });
    }
    if r.rows() != to.dim || r.cols() != from.dim {
        return Err(Error::DimensionMismatch {
            context: format!(
                "seed matrix must be {}x{}, got {}x{}",
                to.dim,
                from.dim,
                r.rows(),
                r.cols()
            ),
        });
    }
    let g = from.group;
    let mut psi = RationalMatrix::zeros(to.dim, from.dim);
    for x in 0..g.order() {
        let term = to.act(x).mul(r).mul(&from.act(g.inv(x)));
        psi = &psi + &term;
    }
    Ok(psi)
}

/// A random unimodular integer matrix: a product of elementary row
/// operations with small coefficients.
pub fn random_unimodular(dim: usize, rng: &mut impl Rng) -> RationalMatrix {
    let mut m = RationalMatrix::identity(dim);
    if dim < 2 {
        return m;
    }
    for _ in 0..2 * dim {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let c = Rat::from_integer(crate::Int::from(rng.gen_range(-2i64..=2)));
        // row_i += c * row_j
        for k in 0..dim {
            let add = &m[(j, k)] * &c;
            m[(i, k)] = &m[(i, k)] + &add;
        }
    }
    m
}
