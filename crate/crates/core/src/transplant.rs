//! Integer transplantation between coset modules: the rational
//! intertwiner, denominator clearing to an integer pair (τ, σ) with
//! στ = τσ = n·Id, and the induced maps on invariants and coinvariants of
//! arbitrary G-modules.
//!
//! τ maps ℤ[Γ₁\G] → ℤ[Γ₂\G] (columns indexed by Γ₁-cosets) and commutes
//! with the right actions: τ·M₁(g) = M₂(g)·τ.  Writing the image of the
//! trivial coset as τ(Γ₁) = Σⱼ cⱼ·Γ₂xⱼ (cⱼ = τ[j,0], xⱼ the minimal
//! representative of Γ₂-coset j):
//!
//! * on a right module W, `τ♯(w) = Σⱼ cⱼ · (w.xⱼ)` sends Γ₂-invariants to
//!   Γ₁-invariants;
//! * on a left module V, `τ♯(v̄) = [Σⱼ cⱼ · (xⱼ.v)]` sends Γ₁-coinvariant
//!   classes to Γ₂-coinvariant classes, independently of the lift `v`.

use crate::error::Error;
use crate::gassmann;
use crate::gmodule::{GModule, Side};
use crate::group::{coset_action_matrix, CosetSpace, FiniteGroup, Subgroup};
use crate::matrix::rational::{det, inverse, nullspace};
use crate::{rat_to_int, Int, IntegerMatrix, Rat, RationalMatrix, Result};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cap on invertibility-search attempts.
pub const SEARCH_ATTEMPTS: usize = 1000;

/// Basis of the space of intertwiners `{T : T·M₁(g) = M₂(g)·T for all g}`
/// between two coset modules, via the exact nullspace of the stacked
/// equivariance system over the generators.  The dimension equals the
/// inner product of the two permutation characters, which is recomputed
/// independently and asserted.
pub fn intertwiner_space(cs1: &CosetSpace<'_>, cs2: &CosetSpace<'_>) -> Vec<RationalMatrix> {
    let group = cs1.group();
    assert!(
        std::ptr::eq(group, cs2.group()),
        "coset spaces of different groups"
    );
    let d1 = cs1.len();
    let d2 = cs2.len();
    // Unknown T is d2 x d1, vectorised row-major: t[i*d1 + j] = T[i,j].
    // For each generator g the (i,j) entry of T·M₁(g) − M₂(g)·T is
    // T[i, j·g] − T[i·g⁻¹, j].
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for &g in group.generator_ordinals() {
        let ginv = group.inv(g);
        for i in 0..d2 {
            for j in 0..d1 {
                let plus = i * d1 + cs1.act(j, g);
                let minus = cs2.act(i, ginv) * d1 + j;
                if plus == minus {
                    continue;
                }
                let mut row = vec![Rat::zero(); d1 * d2];
                row[plus] = Rat::one();
                row[minus] = -Rat::one();
                rows.push(row);
            }
        }
    }
    let stacked = if rows.is_empty() {
        RationalMatrix::zeros(0, d1 * d2)
    } else {
        RationalMatrix::from_rows(rows)
    };
    let basis = nullspace(&stacked);

    // Independent dimension check: ⟨χ₁, χ₂⟩ over the classes.
    let classes = group.conjugacy_classes();
    let chi1 = cs1.permutation_character();
    let chi2 = cs2.permutation_character();
    let mut inner = Int::from(0);
    for (k, class) in classes.classes.iter().enumerate() {
        inner += Int::from(class.len()) * &chi1[k] * &chi2[k];
    }
    let order = Int::from(group.order());
    assert!(
        (&inner % &order).is_zero(),
        "character inner product must be integral"
    );
    assert_eq!(
        Int::from(basis.len()),
        inner / order,
        "nullspace dimension must equal the character inner product"
    );

    basis
        .into_iter()
        .map(|v| RationalMatrix::from_fn(d2, d1, |i, j| v[i * d1 + j].clone()))
        .collect()
}

/// Search the span of `basis` for an invertible matrix: first each basis
/// element, then every ±1 combination of up to three basis elements, then
/// seeded random integer coefficients in [−10, 10], stopping after
/// [`SEARCH_ATTEMPTS`] determinant tests.
pub fn find_invertible_intertwiner(
    basis: &[RationalMatrix],
    seed: u64,
) -> Result<RationalMatrix> {
    let first = match basis.first() {
        Some(m) => m,
        None => {
            return Err(Error::NotEquivalent { left: 0, right: 0 });
        }
    };
    let (rows, cols) = (first.rows(), first.cols());
    if rows != cols {
        return Err(Error::NotEquivalent {
            left: cols,
            right: rows,
        });
    }
    let mut attempts = 0usize;
    let try_candidate = |m: &RationalMatrix, attempts: &mut usize| -> Option<RationalMatrix> {
        *attempts += 1;
        if m.is_zero() {
            return None;
        }
        if !det(m).is_zero() {
            Some(m.clone())
        } else {
            None
        }
    };

    for b in basis {
        if attempts >= SEARCH_ATTEMPTS {
            break;
        }
        if let Some(t) = try_candidate(b, &mut attempts) {
            return Ok(t);
        }
    }

    // ±1 combinations of 2 or 3 distinct basis elements.
    use itertools::Itertools;
    'outer: for size in 2..=3usize.min(basis.len()) {
        for picks in (0..basis.len()).combinations(size) {
            for signs in 0..(1u32 << size) {
                if attempts >= SEARCH_ATTEMPTS {
                    break 'outer;
                }
                let mut m = RationalMatrix::zeros(rows, cols);
                for (slot, &b) in picks.iter().enumerate() {
                    m = if signs >> slot & 1 == 0 {
                        &m + &basis[b]
                    } else {
                        &m - &basis[b]
                    };
                }
                if let Some(t) = try_candidate(&m, &mut attempts) {
                    return Ok(t);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while attempts < SEARCH_ATTEMPTS {
        let mut m = RationalMatrix::zeros(rows, cols);
        for b in basis {
            let c = rng.gen_range(-10i64..=10);
            if c != 0 {
                m = &m + &b.scale(&Rat::from_integer(Int::from(c)));
            }
        }
        if let Some(t) = try_candidate(&m, &mut attempts) {
            return Ok(t);
        }
    }
    Err(Error::SearchExhausted {
        attempts,
        dim: basis.len(),
    })
}

/// Clear denominators of an invertible rational intertwiner:
/// τ = d₁·T with d₁ = lcm of the denominators of T, σ = d₂·T⁻¹ likewise,
/// n = d₁·d₂, so that στ = τσ = n·Id exactly.
pub fn clear_denominators(t: &RationalMatrix) -> Result<(IntegerMatrix, IntegerMatrix, Int)> {
    let t_inv = inverse(t).ok_or(Error::Singular {
        context: "intertwiner must be invertible".into(),
    })?;
    let scale_up = |m: &RationalMatrix| -> (IntegerMatrix, Int) {
        let mut d = Int::one();
        for e in m.entries() {
            d = d.lcm(e.denom());
        }
        let scaled = m.scale(&Rat::from_integer(d.clone()));
        (
            rat_to_int(&scaled).expect("denominators cleared by their lcm"),
            d,
        )
    };
    let (tau, d1) = scale_up(t);
    let (sigma, d2) = scale_up(&t_inv);
    Ok((tau, sigma, d1 * d2))
}

/// The verified integer transplantation data of a Gassmann pair.
pub struct TransplantationPair<'g> {
    cosets1: CosetSpace<'g>,
    cosets2: CosetSpace<'g>,
    tau: IntegerMatrix,
    sigma: IntegerMatrix,
    n: Int,
}

impl<'g> TransplantationPair<'g> {
    /// Construct and fully verify a transplantation pair for two
    /// representation-equivalent subgroups.  `seed` steers the
    /// invertibility search (the result is deterministic per seed).
    pub fn build(
        group: &'g FiniteGroup,
        sub1: &Subgroup<'g>,
        sub2: &Subgroup<'g>,
        seed: u64,
    ) -> Result<Self> {
        if !gassmann::representation_equivalent(group, sub1, sub2)? {
            return Err(Error::NotEquivalent {
                left: sub1.index(),
                right: sub2.index(),
            });
        }
        let cosets1 = group.right_cosets(sub1)?;
        let cosets2 = group.right_cosets(sub2)?;
        let basis = intertwiner_space(&cosets1, &cosets2);
        let t = find_invertible_intertwiner(&basis, seed)?;
        let (tau, sigma, n) = clear_denominators(&t)?;
        let pair = TransplantationPair {
            cosets1,
            cosets2,
            tau,
            sigma,
            n,
        };
        pair.verify()?;
        Ok(pair)
    }

    /// Equivariance over every group element and both composite laws.
    fn verify(&self) -> Result<()> {
        let group = self.cosets1.group();
        for g in 0..group.order() {
            let m1 = coset_action_matrix(&self.cosets1, g);
            let m2 = coset_action_matrix(&self.cosets2, g);
            if self.tau.mul(&m1) != m2.mul(&self.tau) {
                return Err(Error::GroupMismatch {
                    context: format!("transplantation is not equivariant at element {g}"),
                });
            }
        }
        let d1 = self.cosets1.len();
        let d2 = self.cosets2.len();
        if !self
            .sigma
            .mul(&self.tau)
            .is_scalar_multiple_of_identity(&self.n)
            || self.sigma.mul(&self.tau).rows() != d1
        {
            return Err(Error::Singular {
                context: "sigma . tau != n Id".into(),
            });
        }
        if !self
            .tau
            .mul(&self.sigma)
            .is_scalar_multiple_of_identity(&self.n)
            || self.tau.mul(&self.sigma).rows() != d2
        {
            return Err(Error::Singular {
                context: "tau . sigma != n Id".into(),
            });
        }
        Ok(())
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.cosets1.group()
    }

    pub fn cosets1(&self) -> &CosetSpace<'g> {
        &self.cosets1
    }

    pub fn cosets2(&self) -> &CosetSpace<'g> {
        &self.cosets2
    }

    /// τ: ℤ[Γ₁\G] → ℤ[Γ₂\G].
    pub fn tau(&self) -> &IntegerMatrix {
        &self.tau
    }

    /// σ: ℤ[Γ₂\G] → ℤ[Γ₁\G].
    pub fn sigma(&self) -> &IntegerMatrix {
        &self.sigma
    }

    /// The positive integer with στ = τσ = n·Id.
    pub fn n(&self) -> &Int {
        &self.n
    }

    /// The reversed pair (σ, τ) — handy for transplanting back.
    pub fn swapped(&self) -> TransplantationPair<'g> {
        TransplantationPair {
            cosets1: CosetSpace::new(self.cosets2.subgroup().clone()),
            cosets2: CosetSpace::new(self.cosets1.subgroup().clone()),
            tau: self.sigma.clone(),
            sigma: self.tau.clone(),
            n: self.n.clone(),
        }
    }

    /// Transplant a Γ₂-invariant vector of a right module to a
    /// Γ₁-invariant one: `τ♯(w) = Σⱼ τ[j,0] · (w.xⱼ)`.
    pub fn transplant_invariants(&self, module: &GModule<'_>, w: &[Rat]) -> Result<Vec<Rat>> {
        transplant_invariants_by(&self.tau, &self.cosets1, &self.cosets2, module, w)
    }

    /// Transplant a Γ₁-coinvariant class of a left module, given any
    /// ambient lift; returns an ambient representative of the image class
    /// `τ♯(v̄) = [Σⱼ τ[j,0] · (xⱼ.v)]` (project with the Γ₂-coinvariant
    /// space of the module).
    pub fn transplant_coinvariants(&self, module: &GModule<'_>, lift: &[Rat]) -> Result<Vec<Rat>> {
        transplant_coinvariants_by(&self.tau, &self.cosets2, module, lift)
    }
}

/// Induced map on invariants of a right module for an arbitrary
/// equivariant integer map `a : ℤ[cs_from] → ℤ[cs_to]`: takes a vector
/// invariant under the subgroup of `cs_to` to one invariant under the
/// subgroup of `cs_from` by `w ↦ Σⱼ a[j,0] · (w.xⱼ)`, xⱼ the coset
/// representatives of `cs_to`.  Invariance of input and output are both
/// checked.
pub fn transplant_invariants_by(
    a: &IntegerMatrix,
    cs_from: &CosetSpace<'_>,
    cs_to: &CosetSpace<'_>,
    module: &GModule<'_>,
    w: &[Rat],
) -> Result<Vec<Rat>> {
    assert_eq!(module.side(), Side::Right, "invariant transplantation acts on right modules");
    assert_eq!(a.rows(), cs_to.len());
    assert_eq!(a.cols(), cs_from.len());
    if let Some(&witness) = cs_to
        .subgroup()
        .elements()
        .iter()
        .find(|&&g| module.apply(g, w) != w)
    {
        return Err(Error::NotInvariant { witness });
    }
    let mut out = vec![Rat::zero(); module.dim()];
    for j in 0..cs_to.len() {
        let c = &a[(j, 0)];
        if c.is_zero() {
            continue;
        }
        let c = Rat::from_integer(c.clone());
        let moved = module.apply(cs_to.rep(j), w);
        for (acc, m) in out.iter_mut().zip(moved) {
            *acc = &*acc + &(c.clone() * m);
        }
    }
    if let Some(&witness) = cs_from
        .subgroup()
        .elements()
        .iter()
        .find(|&&g| module.apply(g, &out) != out)
    {
        return Err(Error::NotInvariant { witness });
    }
    Ok(out)
}

/// Induced map on coinvariants of a left module for an equivariant map
/// `a : ℤ[cs_from] → ℤ[cs_to]`: sends the class of `v` (coinvariants of
/// `cs_from`'s subgroup) to the class of `Σⱼ a[j,0]·(xⱼ.v)` (coinvariants
/// of `cs_to`'s subgroup).  Returns the ambient representative.
pub fn transplant_coinvariants_by(
    a: &IntegerMatrix,
    cs_to: &CosetSpace<'_>,
    module: &GModule<'_>,
    lift: &[Rat],
) -> Result<Vec<Rat>> {
    assert_eq!(module.side(), Side::Left, "coinvariant transplantation acts on left modules");
    assert_eq!(a.rows(), cs_to.len());
    let mut out = vec![Rat::zero(); module.dim()];
    for j in 0..cs_to.len() {
        let c = &a[(j, 0)];
        if c.is_zero() {
            continue;
        }
        let c = Rat::from_integer(c.clone());
        let moved = module.apply(cs_to.rep(j), lift);
        for (acc, m) in out.iter_mut().zip(moved) {
            *acc = &*acc + &(c.clone() * m);
        }
    }
    Ok(out)
}

/// Check that a bilinear form Q (as a matrix: ⟨w, v⟩ = wᵀ·Q·v) is
/// G-balanced between a right module W and a left module V:
/// ⟨w.g, v⟩ = ⟨w, g.v⟩, i.e. A(g)ᵀ·Q = Q·L(g) for every generator.
pub fn check_balanced(
    w_module: &GModule<'_>,
    v_module: &GModule<'_>,
    q: &RationalMatrix,
) -> Result<()> {
    assert_eq!(w_module.side(), Side::Right);
    assert_eq!(v_module.side(), Side::Left);
    if q.rows() != w_module.dim() || q.cols() != v_module.dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "pairing matrix must be {}x{}, got {}x{}",
                w_module.dim(),
                v_module.dim(),
                q.rows(),
                q.cols()
            ),
        });
    }
    let group = w_module.group();
    for &g in group.generator_ordinals() {
        if w_module.act(g).transpose().mul(q) != q.mul(&v_module.act(g)) {
            return Err(Error::NotBalanced { witness: g });
        }
    }
    Ok(())
}

/// Verify the duality of the two transplantations against a G-balanced
/// pairing: returns the residual
/// `⟨τ♯(w), v⟩ − ⟨w, τ♯(v̄) lift⟩`, which must be exactly zero.
/// `w` must be Γ₂-invariant; `v_lift` is any ambient lift of a
/// Γ₁-coinvariant class.
pub fn check_pairing_duality(
    pair: &TransplantationPair<'_>,
    w_module: &GModule<'_>,
    v_module: &GModule<'_>,
    q: &RationalMatrix,
    w: &[Rat],
    v_lift: &[Rat],
) -> Result<Rat> {
    check_balanced(w_module, v_module, q)?;
    let tw = pair.transplant_invariants(w_module, w)?;
    let tv = pair.transplant_coinvariants(v_module, v_lift)?;
    let pair_eval = |a: &[Rat], b: &[Rat]| -> Rat {
        let qb = q.mul_vec(b);
        a.iter()
            .zip(qb)
            .fold(Rat::zero(), |acc, (x, y)| acc + x * &y)
    };
    Ok(pair_eval(&tw, v_lift) - pair_eval(w, &tv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::testutil::*;
    use crate::perm::Permutation;

    #[test]
    fn same_subgroup_space_contains_identity_route() {
        let g = s3();
        let full = g.full_subgroup();
        let cs1 = g.right_cosets(&full).unwrap();
        let cs2 = g.right_cosets(&full).unwrap();
        let basis = intertwiner_space(&cs1, &cs2);
        assert_eq!(basis.len(), 1);
        let t = find_invertible_intertwiner(&basis, 0).unwrap();
        assert_eq!(t.rows(), 1);
        let (tau, sigma, n) = clear_denominators(&t).unwrap();
        assert_eq!(tau.mul(&sigma)[(0, 0)], n);
    }

    #[test]
    fn regular_representation_self_intertwiners() {
        // End_G(ℚ[G]) ≅ ℚ[G]: the space has dimension |G| = ⟨χ_reg, χ_reg⟩.
        let g = s3();
        let t = g.trivial_subgroup();
        let cs1 = g.right_cosets(&t).unwrap();
        let cs2 = g.right_cosets(&t).unwrap();
        let basis = intertwiner_space(&cs1, &cs2);
        assert_eq!(basis.len(), g.order());
    }

    #[test]
    fn affine32_pair_produces_verified_transplantation() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        assert!(pair.n() > &Int::from(0));
        // verify() ran in build; spot-check the composite law again here.
        let st = pair.sigma().mul(pair.tau());
        assert!(st.is_scalar_multiple_of_identity(pair.n()));
    }

    #[test]
    fn gl32_pair_has_two_dimensional_intertwiner_space() {
        let g = gl32();
        let stab_point: Vec<usize> = (0..g.order())
            .filter(|&x| g.element(x).apply(0) == 0)
            .collect();
        let plane = [1usize, 3, 5];
        let stab_plane: Vec<usize> = (0..g.order())
            .filter(|&x| {
                plane
                    .iter()
                    .all(|&p| plane.contains(&g.element(x).apply(p)))
            })
            .collect();
        let s1 = g.subgroup_from_elements(&stab_point).unwrap();
        let s2 = g.subgroup_from_elements(&stab_plane).unwrap();
        let cs1 = g.right_cosets(&s1).unwrap();
        let cs2 = g.right_cosets(&s2).unwrap();
        let basis = intertwiner_space(&cs1, &cs2);
        assert_eq!(basis.len(), 2);
        let pair = TransplantationPair::build(&g, &s1, &s2, 0).unwrap();
        assert_eq!(pair.tau().rows(), 7);
    }

    #[test]
    fn inequivalent_pair_is_rejected() {
        let g = s3();
        let t = g.trivial_subgroup();
        let h = g
            .subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()])
            .unwrap();
        assert!(matches!(
            TransplantationPair::build(&g, &t, &h, 0),
            Err(Error::NotEquivalent { .. })
        ));
        let d = dihedral8();
        let r = d
            .subgroup_from_perms(&[Permutation::parse("(0 1 2 3)", 4).unwrap()])
            .unwrap();
        let v = d
            .subgroup_from_perms(&[
                Permutation::parse("(0 2)(1 3)", 4).unwrap(),
                Permutation::parse("(1 3)", 4).unwrap(),
            ])
            .unwrap();
        assert!(matches!(
            TransplantationPair::build(&d, &r, &v, 0),
            Err(Error::NotEquivalent { .. })
        ));
    }

    #[test]
    fn one_by_one_denominator_clearing() {
        let t = RationalMatrix::from_vec(
            1,
            1,
            vec![Rat::new(Int::from(1), Int::from(2))],
        );
        let (tau, sigma, n) = clear_denominators(&t).unwrap();
        assert_eq!(tau[(0, 0)], Int::from(1));
        assert_eq!(sigma[(0, 0)], Int::from(2));
        assert_eq!(n, Int::from(2));
    }

    #[test]
    fn invariants_transplant_on_trivial_module() {
        // On the trivial 1-dim module, τ♯ multiplies by the column sum of τ.
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let w_mod = GModule::trivial(&g, Side::Right, 1);
        let w = vec![Rat::one()];
        let out = pair.transplant_invariants(&w_mod, &w).unwrap();
        let col_sum: Int = (0..pair.tau().rows()).map(|j| pair.tau()[(j, 0)].clone()).sum();
        assert_eq!(out[0], Rat::from_integer(col_sum));
    }

    #[test]
    fn invariance_is_enforced() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let reg = GModule::regular(&g, Side::Right);
        // e_0 is not Γ₂-invariant (Γ₂ is nontrivial)
        let mut w = vec![Rat::zero(); 32];
        w[0] = Rat::one();
        assert!(matches!(
            pair.transplant_invariants(&reg, &w),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn regular_coinvariants_realize_tau_itself() {
        // For V = ℚ[G] with left translation, V_{Γᵢ} has the cosets as a
        // basis and τ♯ is the matrix τ.
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let v_mod = GModule::left_translation(&g);
        let co2 = v_mod.coinvariants(&g2);
        assert_eq!(co2.dim(), 8);

        // The class of e_x in V_{Γ} is determined by the coset Γx: check
        // e_rep and e_{γ·rep} project equally, then push e_{x_i} through.
        let cs1 = pair.cosets1();
        let cs2 = pair.cosets2();
        // basis vector of V: e_x
        let e = |x: usize| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); 32];
            v[x] = Rat::one();
            v
        };
        // Column i of the realized map: transplant the class of e_{rep(i)}.
        for i in 0..cs1.len() {
            let image = pair
                .transplant_coinvariants(&v_mod, &e(cs1.rep(i)))
                .unwrap();
            let got = co2.project(&image);
            // Expected: Σ_j tau[j,i] · class(e_{rep_2(j)})
            let mut expected_ambient = vec![Rat::zero(); 32];
            for j in 0..cs2.len() {
                expected_ambient[cs2.rep(j)] =
                    Rat::from_integer(pair.tau()[(j, i)].clone());
            }
            let expected = co2.project(&expected_ambient);
            assert_eq!(got, expected, "column {i} of the coinvariant map");
        }
    }

    #[test]
    fn coinvariant_transplant_is_lift_independent() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let v_mod = GModule::regular(&g, Side::Left);
        let co2 = v_mod.coinvariants(&g2);
        let lift1 = {
            let mut v = vec![Rat::zero(); 32];
            v[5] = Rat::from_integer(Int::from(3));
            v
        };
        // another lift of the same class: add γ.u − u
        let lift2 = {
            let gamma = g1.elements()[1];
            let mut u = vec![Rat::zero(); 32];
            u[7] = Rat::from_integer(Int::from(2));
            let moved = v_mod.apply(gamma, &u);
            let mut v = lift1.clone();
            for k in 0..32 {
                v[k] = &v[k] + &(&moved[k] - &u[k]);
            }
            v
        };
        let out1 = pair.transplant_coinvariants(&v_mod, &lift1).unwrap();
        let out2 = pair.transplant_coinvariants(&v_mod, &lift2).unwrap();
        assert_eq!(co2.project(&out1), co2.project(&out2));
    }

    #[test]
    fn composite_transplant_is_multiplication_by_n() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let composite = pair.sigma().mul(pair.tau()); // ℤ[Γ₁\G] → ℤ[Γ₁\G]
        let cs1 = pair.cosets1();
        let w_mod = GModule::from_coset_space(cs1, Side::Right);
        let inv = w_mod.invariants(pair.cosets1().subgroup());
        for c in 0..inv.cols() {
            let w = inv.col(c);
            let through =
                transplant_invariants_by(&composite, cs1, cs1, &w_mod, &w).unwrap();
            let scaled: Vec<Rat> = w
                .iter()
                .map(|x| x * &Rat::from_integer(pair.n().clone()))
                .collect();
            assert_eq!(through, scaled);
        }
    }

    #[test]
    fn pairing_duality_residual_is_zero() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        // W = regular right module, V = regular left module, pairing
        // ⟨e_a, e_b⟩ = [a·b = e] is G-balanced:
        // ⟨e_a.g, e_b⟩ = [agb = e] = ⟨e_a, g.e_b⟩.
        let w_mod = GModule::regular(&g, Side::Right);
        let v_mod = GModule::left_translation(&g);
        let mut q = RationalMatrix::zeros(32, 32);
        for a in 0..32 {
            q[(a, g.inv(a))] = Rat::one();
        }
        check_balanced(&w_mod, &v_mod, &q).unwrap();
        // a Γ₂-invariant w: indicator of Γ₂ summed over the subgroup
        let inv = w_mod.invariants(&g2);
        let w = inv.col(0);
        let mut v = vec![Rat::zero(); 32];
        v[3] = Rat::one();
        let residual = check_pairing_duality(&pair, &w_mod, &v_mod, &q, &w, &v).unwrap();
        assert!(residual.is_zero());
    }

    #[test]
    fn unbalanced_pairing_is_rejected() {
        let g = s3();
        let w_mod = GModule::regular(&g, Side::Right);
        let v_mod = GModule::regular(&g, Side::Left);
        let mut q = RationalMatrix::zeros(6, 6);
        q[(0, 0)] = Rat::one(); // not balanced
        assert!(matches!(
            check_balanced(&w_mod, &v_mod, &q),
            Err(Error::NotBalanced { .. })
        ));
    }

    #[test]
    fn naturality_with_a_reynolds_map() {
        // ψ∘τ♯ = τ♯∘ψ for a G-map ψ between right modules.
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let w1 = GModule::from_coset_space(pair.cosets1(), Side::Right);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = RationalMatrix::from_fn(w1.dim(), w1.dim(), |_, _| {
            Rat::from_integer(Int::from(rng.gen_range(-3i64..=3)))
        });
        let psi = crate::gmodule::reynolds_gmap(&w1, &w1, &r).unwrap();
        let inv2 = w1.invariants(&g2);
        for c in 0..inv2.cols() {
            let w = inv2.col(c);
            let lhs = psi.mul_vec(&pair.transplant_invariants(&w1, &w).unwrap());
            let rhs = pair
                .transplant_invariants(&w1, &psi.mul_vec(&w))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
