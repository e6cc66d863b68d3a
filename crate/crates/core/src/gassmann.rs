//! Almost conjugacy, conjugacy, and representation equivalence of
//! subgroup pairs, plus the order-statistics criterion for Cayley
//! embeddings of two abstract groups of equal order.
//!
//! Two subgroups are *almost conjugate* when every conjugacy class of the
//! ambient group meets both in the same number of elements.  That holds
//! iff the permutation characters of the two coset actions agree, i.e.
//! iff the rational coset modules are equivalent representations; both
//! criteria are implemented independently so each can certify the other.

use crate::group::{CosetSpace, FiniteGroup, Subgroup};
use crate::{Int, Result};
use crate::error::Error;
use std::collections::BTreeMap;

/// Per-class intersection counts for a pair of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassIntersectionProfile {
    pub rows: Vec<ClassRow>,
}

/// One conjugacy class: its minimal-ordinal representative, size, and the
/// number of its elements lying in each subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    pub rep: usize,
    pub size: usize,
    pub count1: usize,
    pub count2: usize,
}

impl ClassIntersectionProfile {
    /// True iff the two subgroups meet every class equally.
    pub fn balanced(&self) -> bool {
        self.rows.iter().all(|r| r.count1 == r.count2)
    }
}

/// The permutation character of a coset action, evaluated on each
/// conjugacy class (class order matches `FiniteGroup::conjugacy_classes`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationCharacter {
    pub values: Vec<Int>,
}

impl PermutationCharacter {
    /// Character of the action of `G` on `Γ\G`: the value on a class is
    /// the number of cosets fixed by any (hence every) class member.
    pub fn of_cosets(cosets: &CosetSpace<'_>) -> Self {
        PermutationCharacter {
            values: cosets.permutation_character(),
        }
    }
}

/// Build the per-class intersection profile of a subgroup pair.
pub fn class_intersection_profile(
    group: &FiniteGroup,
    sub1: &Subgroup<'_>,
    sub2: &Subgroup<'_>,
) -> ClassIntersectionProfile {
    let classes = group.conjugacy_classes();
    let rows = classes
        .classes
        .iter()
        .map(|class| ClassRow {
            rep: class[0],
            size: class.len(),
            count1: class.iter().filter(|&&x| sub1.contains(x)).count(),
            count2: class.iter().filter(|&&x| sub2.contains(x)).count(),
        })
        .collect();
    ClassIntersectionProfile { rows }
}

/// Decide almost conjugacy by per-class counting; the profile is returned
/// as the witness either way.
pub fn almost_conjugate(
    group: &FiniteGroup,
    sub1: &Subgroup<'_>,
    sub2: &Subgroup<'_>,
) -> (bool, ClassIntersectionProfile) {
    let profile = class_intersection_profile(group, sub1, sub2);
    (profile.balanced(), profile)
}

/// Exhaustive search for `g` with `g^{-1} Γ₁ g = Γ₂`.
pub fn conjugate_subgroups(
    group: &FiniteGroup,
    sub1: &Subgroup<'_>,
    sub2: &Subgroup<'_>,
) -> Option<usize> {
    if sub1.order() != sub2.order() {
        return None;
    }
    (0..group.order()).find(|&g| {
        sub1.elements()
            .iter()
            .all(|&x| sub2.contains(group.conj(x, g)))
    })
}

/// Decide equivalence of the rational coset representations by comparing
/// permutation characters (computed from fixed-coset counts, not from the
/// class profile).
pub fn representation_equivalent(
    group: &FiniteGroup,
    sub1: &Subgroup<'_>,
    sub2: &Subgroup<'_>,
) -> Result<bool> {
    if sub1.index() != sub2.index() {
        return Ok(false);
    }
    let c1 = group.right_cosets(sub1)?;
    let c2 = group.right_cosets(sub2)?;
    Ok(PermutationCharacter::of_cosets(&c1) == PermutationCharacter::of_cosets(&c2))
}

/// Full certificate for a subgroup pair: the class table plus all three
/// verdicts, with the character route cross-checking the counting route.
#[derive(Clone, Debug)]
pub struct GassmannReport {
    pub profile: ClassIntersectionProfile,
    pub char1: PermutationCharacter,
    pub char2: PermutationCharacter,
    pub almost_conjugate: bool,
    pub conjugating_element: Option<usize>,
    pub representation_equivalent: bool,
}

impl GassmannReport {
    pub fn conjugate(&self) -> bool {
        self.conjugating_element.is_some()
    }
}

/// Run every check on a pair of subgroups of `group`.
pub fn gassmann_report(
    group: &FiniteGroup,
    sub1: &Subgroup<'_>,
    sub2: &Subgroup<'_>,
) -> Result<GassmannReport> {
    let (ac, profile) = almost_conjugate(group, sub1, sub2);
    let re = representation_equivalent(group, sub1, sub2)?;
    assert_eq!(
        ac, re,
        "class-intersection and character criteria must agree"
    );
    let c1 = group.right_cosets(sub1)?;
    let c2 = group.right_cosets(sub2)?;
    Ok(GassmannReport {
        profile,
        char1: PermutationCharacter::of_cosets(&c1),
        char2: PermutationCharacter::of_cosets(&c2),
        almost_conjugate: ac,
        conjugating_element: conjugate_subgroups(group, sub1, sub2),
        representation_equivalent: re,
    })
}

/// Multiset of element orders, as order → multiplicity.
pub fn order_statistics(group: &FiniteGroup) -> BTreeMap<u64, usize> {
    let mut stats = BTreeMap::new();
    for p in group.elements() {
        *stats.entry(p.order()).or_insert(0) += 1;
    }
    stats
}

/// Cycle-structure criterion for regular (Cayley) embeddings: two groups
/// of the same order embed as almost-conjugate subgroups of the symmetric
/// group on their elements iff their element-order multisets agree — an
/// order-k element acts on the group by |A|/k disjoint k-cycles, so order
/// statistics determine the cycle structure of every embedded element.
pub fn cayley_gassmann_check(a: &FiniteGroup, b: &FiniteGroup) -> Result<bool> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(order_statistics(a) == order_statistics(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::testutil::*;
    use crate::perm::Permutation;
    use crate::group::FiniteGroup;

    #[test]
    fn equal_subgroups_are_almost_conjugate() {
        let g = s3();
        let h = g
            .subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()])
            .unwrap();
        let (ac, profile) = almost_conjugate(&g, &h, &h);
        assert!(ac);
        for row in &profile.rows {
            assert_eq!(row.count1, row.count2);
            assert!(row.count1 <= row.size);
        }
        let sum: usize = profile.rows.iter().map(|r| r.count1).sum();
        assert_eq!(sum, h.order());
        assert_eq!(conjugate_subgroups(&g, &h, &h), Some(0));
    }

    #[test]
    fn trivial_versus_order2_fails() {
        let g = s3();
        let t = g.trivial_subgroup();
        let h = g
            .subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()])
            .unwrap();
        let (ac, _) = almost_conjugate(&g, &t, &h);
        assert!(!ac);
        assert!(!representation_equivalent(&g, &t, &h).unwrap());
    }

    #[test]
    fn affine32_pair_is_gassmann_but_not_conjugate() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let report = gassmann_report(&g, &g1, &g2).unwrap();
        assert!(report.almost_conjugate);
        assert!(report.representation_equivalent);
        assert!(!report.conjugate());
        assert_eq!(report.char1.values[0], Int::from(8));
    }

    #[test]
    fn gl32_stabilizer_pair() {
        let g = gl32();
        // Stabilizer of point 0 (the vector 001) and of the plane
        // {x : x0 = 0} = points {1, 3, 5}.
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
        assert_eq!(s1.order(), 24);
        assert_eq!(s2.order(), 24);
        let report = gassmann_report(&g, &s1, &s2).unwrap();
        assert!(report.almost_conjugate);
        assert!(!report.conjugate());
    }

    #[test]
    fn conjugate_transpositions_in_s3() {
        let g = s3();
        let h1 = g
            .subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()])
            .unwrap();
        let h2 = g
            .subgroup_from_perms(&[Permutation::parse("(1 2)", 3).unwrap()])
            .unwrap();
        let witness = conjugate_subgroups(&g, &h1, &h2);
        assert!(witness.is_some());
        let w = witness.unwrap();
        assert!(h1.conjugate_by(w).same_elements(&h2));
        // conjugate implies almost conjugate
        assert!(almost_conjugate(&g, &h1, &h2).0);
    }

    #[test]
    fn dihedral_pair_is_not_gassmann() {
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
        assert_eq!(r.order(), 4);
        assert_eq!(v.order(), 4);
        let report = gassmann_report(&d, &r, &v).unwrap();
        assert!(!report.almost_conjugate);
        assert!(!report.conjugate());
    }

    #[test]
    fn cayley_criterion_heisenberg_vs_elementary() {
        let a = elementary27();
        let b = heisenberg27();
        assert!(a.is_abelian());
        assert!(!b.is_abelian());
        let stats = order_statistics(&a);
        assert_eq!(stats.get(&1), Some(&1));
        assert_eq!(stats.get(&3), Some(&26));
        assert_eq!(order_statistics(&b), stats);
        assert!(cayley_gassmann_check(&a, &b).unwrap());
    }

    #[test]
    fn cayley_criterion_rejects_z4_versus_klein() {
        let z4 = FiniteGroup::new(&[Permutation::parse("(0 1 2 3)", 4).unwrap()]).unwrap();
        let klein = FiniteGroup::new(&[
            Permutation::parse("(0 1)(2 3)", 4).unwrap(),
            Permutation::parse("(0 2)(1 3)", 4).unwrap(),
        ])
        .unwrap();
        assert!(!cayley_gassmann_check(&z4, &klein).unwrap());
        let z2 = FiniteGroup::new(&[Permutation::parse("(0 1)", 2).unwrap()]).unwrap();
        assert!(matches!(
            cayley_gassmann_check(&z4, &z2),
            Err(Error::OrderMismatch { left: 4, right: 2 })
        ));
    }

    #[test]
    fn counting_and_character_criteria_agree_on_all_pairs() {
        // Gassmann's equivalence, checked exhaustively over every pair of
        // equal-index subgroups in a few small groups.
        for group in [s3(), dihedral8(), heisenberg27()] {
            let subs = group.all_subgroups();
            for s1 in &subs {
                for s2 in &subs {
                    if s1.index() != s2.index() {
                        continue;
                    }
                    let (ac, _) = almost_conjugate(&group, s1, s2);
                    let re = representation_equivalent(&group, s1, s2).unwrap();
                    assert_eq!(ac, re);
                }
            }
        }
    }
}
