//! Finite permutation groups given by generators: breadth-first
//! enumeration, subgroups, conjugacy classes, and right coset spaces with
//! their integer action matrices.
//!
//! Element ordinals are breadth-first discovery order (identity first,
//! then products `parent * generator` in generator order), so everything
//! downstream — class orderings, coset labels, matrix bases — is
//! deterministic for a fixed generator list.
//!
//! Matrix convention: vectors are columns indexed by cosets, and the
//! action matrix satisfies `M(g) e_c = e_{c·g}`.  Acting by `g` then `h`
//! therefore composes as `M(gh) = M(h) · M(g)`.

use crate::error::Error;
use crate::perm::Permutation;
use crate::{Int, IntegerMatrix, Matrix, Result};
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

/// Default cap on group enumeration.
pub const DEFAULT_CLOSURE_BOUND: usize = 20_000;

/// Orders up to which the full multiplication table is cached.
const MUL_TABLE_MAX_ORDER: usize = 1024;

/// A fully enumerated finite permutation group.
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Vec<usize>, usize>,
    gen_perms: Vec<Permutation>,
    gen_ordinals: Vec<usize>,
    /// For each non-identity element, (parent ordinal, generator index)
    /// with `element = parent * generator`.
    parent_gen: Vec<Option<(usize, usize)>>,
    inverses: Vec<usize>,
    mul_table: Option<Vec<u32>>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Conjugacy classes: element ordinals per class (sorted), classes ordered
/// by their minimal ordinal (identity class first).
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Minimal-ordinal representative of a class.
    pub fn rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }
}

/// Enumerate the group generated by `generators` (breadth-first), failing
/// once more than `bound` elements appear.
pub fn enumerate_group(generators: &[Permutation], bound: usize) -> Result<FiniteGroup> {
    FiniteGroup::enumerate(generators, bound)
}

impl FiniteGroup {
    /// Enumerate with the default closure bound.
    pub fn new(generators: &[Permutation]) -> Result<Self> {
        Self::enumerate(generators, DEFAULT_CLOSURE_BOUND)
    }

    /// Breadth-first enumeration of `<generators>`.
    pub fn enumerate(generators: &[Permutation], bound: usize) -> Result<Self> {
        let degree = generators.first().map_or(0, |g| g.degree());
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity.images().to_vec(), 0usize);
        let mut parent_gen: Vec<Option<(usize, usize)>> = vec![None];

        let mut cursor = 0;
        while cursor < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let next = elements[cursor].then(g)?;
                if !index.contains_key(next.images()) {
                    if elements.len() >= bound {
                        return Err(Error::ClosureBoundExceeded { bound });
                    }
                    index.insert(next.images().to_vec(), elements.len());
                    elements.push(next);
                    parent_gen.push(Some((cursor, gi)));
                }
            }
            cursor += 1;
        }

        let order = elements.len();
        let inverses: Vec<usize> = elements
            .iter()
            .map(|p| index[p.inverse().images()])
            .collect();
        let gen_ordinals: Vec<usize> = generators.iter().map(|g| index[g.images()]).collect();

        let mut group = FiniteGroup {
            degree,
            elements,
            index,
            gen_perms: generators.to_vec(),
            gen_ordinals,
            parent_gen,
            inverses,
            mul_table: None,
            classes: OnceLock::new(),
        };

        if order <= MUL_TABLE_MAX_ORDER {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    let p = group.elements[a].then(&group.elements[b]).unwrap();
                    table[a * order + b] = group.index[p.images()] as u32;
                }
            }
            group.mul_table = Some(table);
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, ordinal: usize) -> &Permutation {
        &self.elements[ordinal]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Ordinal of a permutation, if it belongs to the group.
    pub fn ordinal_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p.images()).copied()
    }

    /// The generators as supplied (order matters: complex action blocks
    /// list one vertex map per generator in this order).
    pub fn generators(&self) -> &[Permutation] {
        &self.gen_perms
    }

    pub fn generator_ordinals(&self) -> &[usize] {
        &self.gen_ordinals
    }

    /// Product ordinal: `a * b` = apply `a` then `b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mul_table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => {
                let p = self.elements[a].then(&self.elements[b]).unwrap();
                self.index[p.images()]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Conjugate `x^g = g^{-1} x g`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Generator-index word with `element = gens[w0] * gens[w1] * …`
    /// (left-to-right).  Empty for the identity.
    pub fn word(&self, ordinal: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = ordinal;
        while let Some((parent, gi)) = self.parent_gen[cur] {
            word.push(gi);
            cur = parent;
        }
        word.reverse();
        word
    }

    /// True iff all generators commute.
    pub fn is_abelian(&self) -> bool {
        let gens = &self.gen_ordinals;
        gens.iter().all(|&a| {
            gens.iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Conjugacy classes (computed once, cached).
    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            // Conjugating by the generators reaches the whole class.
            let gens: Vec<usize> = if self.gen_ordinals.is_empty() {
                vec![0]
            } else {
                self.gen_ordinals.clone()
            };
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut stack = vec![start];
                class_of[start] = id;
                let mut members = vec![start];
                while let Some(x) = stack.pop() {
                    for &g in &gens {
                        let y = self.conj(x, g);
                        if class_of[y] == usize::MAX {
                            class_of[y] = id;
                            members.push(y);
                            stack.push(y);
                        }
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjugacyClasses { classes, class_of }
        })
    }

    /// The subgroup generated by the given element ordinals.
    pub fn subgroup_from_generators(&self, gens: &[usize]) -> Result<Subgroup<'_>> {
        for &g in gens {
            if g >= self.order() {
                return Err(Error::OrdinalOutOfRange {
                    ordinal: g,
                    order: self.order(),
                });
            }
        }
        let elements = self.closure(gens);
        Ok(self.make_subgroup(elements, gens.to_vec()))
    }

    /// The subgroup generated by the given permutations (which must lie in
    /// this group).
    pub fn subgroup_from_perms(&self, perms: &[Permutation]) -> Result<Subgroup<'_>> {
        let gens = perms
            .iter()
            .map(|p| {
                self.ordinal_of(p).ok_or_else(|| Error::GroupMismatch {
                    context: format!("permutation {p} is not in the group"),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        self.subgroup_from_generators(&gens)
    }

    /// Wrap an explicit element set, verifying closure.
    pub fn subgroup_from_elements(&self, ordinals: &[usize]) -> Result<Subgroup<'_>> {
        let mut member = vec![false; self.order()];
        for &x in ordinals {
            if x >= self.order() {
                return Err(Error::OrdinalOutOfRange {
                    ordinal: x,
                    order: self.order(),
                });
            }
            member[x] = true;
        }
        if !member[0] {
            return Err(Error::NotASubgroup { witness: 0 });
        }
        for &x in ordinals {
            for &y in ordinals {
                let z = self.mul(x, y);
                if !member[z] {
                    return Err(Error::NotASubgroup { witness: z });
                }
            }
        }
        let mut elements: Vec<usize> = ordinals.to_vec();
        elements.sort_unstable();
        elements.dedup();
        Ok(Subgroup {
            parent: self,
            member,
            generators: elements.iter().copied().filter(|&x| x != 0).collect(),
            elements,
        })
    }

    pub fn trivial_subgroup(&self) -> Subgroup<'_> {
        self.make_subgroup(vec![0], Vec::new())
    }

    pub fn full_subgroup(&self) -> Subgroup<'_> {
        self.make_subgroup((0..self.order()).collect(), self.gen_ordinals.clone())
    }

    fn make_subgroup(&self, elements: Vec<usize>, generators: Vec<usize>) -> Subgroup<'_> {
        let mut member = vec![false; self.order()];
        for &x in &elements {
            member[x] = true;
        }
        Subgroup {
            parent: self,
            elements,
            member,
            generators,
        }
    }

    /// Sorted element list of `<gens>` inside this group.
    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut out = vec![0usize];
        let mut cursor = 0;
        while cursor < out.len() {
            let x = out[cursor];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
            cursor += 1;
        }
        out.sort_unstable();
        out
    }

    /// Every subgroup, found by incremental closure: starting from the
    /// trivial subgroup, repeatedly adjoin one new element and close.
    /// Result sorted by (order, element list).
    pub fn all_subgroups(&self) -> Vec<Subgroup<'_>> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        // (elements sorted, small generating set)
        let mut list: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        seen.insert(vec![0]);
        list.push((vec![0], Vec::new()));
        let mut cursor = 0;
        while cursor < list.len() {
            let (elems, gens) = list[cursor].clone();
            let member: HashSet<usize> = elems.iter().copied().collect();
            for g in 1..self.order() {
                if member.contains(&g) {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(g);
                let closed = self.closure(&new_gens);
                if !seen.contains(&closed) {
                    seen.insert(closed.clone());
                    list.push((closed, new_gens));
                }
            }
            cursor += 1;
        }
        list.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        list.into_iter()
            .map(|(elems, gens)| self.make_subgroup(elems, gens))
            .collect()
    }

    /// Right coset space `Γ\G` for a subgroup of this group.
    pub fn right_cosets<'g>(&'g self, subgroup: &Subgroup<'g>) -> Result<CosetSpace<'g>> {
        if !std::ptr::eq(self, subgroup.parent) {
            return Err(Error::GroupMismatch {
                context: "subgroup belongs to a different group".into(),
            });
        }
        Ok(CosetSpace::new(subgroup.clone()))
    }
}

/// A subgroup presented as a sorted list of parent-group ordinals.
#[derive(Clone)]
pub struct Subgroup<'g> {
    parent: &'g FiniteGroup,
    elements: Vec<usize>,
    member: Vec<bool>,
    generators: Vec<usize>,
}

impl<'g> Subgroup<'g> {
    pub fn parent(&self) -> &'g FiniteGroup {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index `[G : Γ]`.
    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    /// Sorted ordinals of the members.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// A generating set (ordinals); possibly the full element list when
    /// the subgroup was given by elements.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, ordinal: usize) -> bool {
        self.member[ordinal]
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|&a| {
            self.elements
                .iter()
                .all(|&b| self.parent.mul(a, b) == self.parent.mul(b, a))
        })
    }

    /// The conjugate subgroup `g^{-1} Γ g`.
    pub fn conjugate_by(&self, g: usize) -> Subgroup<'g> {
        let elements: Vec<usize> = {
            let mut v: Vec<usize> = self
                .elements
                .iter()
                .map(|&x| self.parent.conj(x, g))
                .collect();
            v.sort_unstable();
            v
        };
        let generators = self
            .generators
            .iter()
            .map(|&x| self.parent.conj(x, g))
            .collect();
        let mut member = vec![false; self.parent.order()];
        for &x in &elements {
            member[x] = true;
        }
        Subgroup {
            parent: self.parent,
            elements,
            member,
            generators,
        }
    }

    /// Set equality of subgroups of the same parent.
    pub fn same_elements(&self, other: &Subgroup<'_>) -> bool {
        self.elements == other.elements
    }
}

/// The right coset space `Γ\G`, cosets labeled `0..index` in order of
/// their minimal element ordinal; coset 0 is `Γ` itself.
pub struct CosetSpace<'g> {
    subgroup: Subgroup<'g>,
    reps: Vec<usize>,
    coset_of: Vec<u32>,
}

impl<'g> CosetSpace<'g> {
    pub fn new(subgroup: Subgroup<'g>) -> Self {
        let group = subgroup.parent;
        let n = group.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(subgroup.index());
        for g in 0..n {
            if coset_of[g] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for &gamma in subgroup.elements() {
                coset_of[group.mul(gamma, g)] = c;
            }
        }
        CosetSpace {
            subgroup,
            reps,
            coset_of,
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.subgroup.parent
    }

    pub fn subgroup(&self) -> &Subgroup<'g> {
        &self.subgroup
    }

    /// Number of cosets (the index).
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Minimal-ordinal representative of coset `c` (coset 0 → identity).
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    /// Coset of an element ordinal.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g] as usize
    }

    /// Right action: `(Γx)·g = Γ(xg)`.
    #[inline]
    pub fn act(&self, c: usize, g: usize) -> usize {
        self.coset_of[self.subgroup.parent.mul(self.reps[c], g)] as usize
    }

    /// Number of cosets fixed by `g`.
    pub fn fixed_cosets(&self, g: usize) -> usize {
        (0..self.len()).filter(|&c| self.act(c, g) == c).count()
    }

    /// Permutation character evaluated on every conjugacy class (in class
    /// order): the number of fixed cosets of a class representative.
    pub fn permutation_character(&self) -> Vec<Int> {
        let classes = self.subgroup.parent.conjugacy_classes();
        classes
            .classes
            .iter()
            .map(|cl| Int::from(self.fixed_cosets(cl[0])))
            .collect()
    }
}

/// 0/1 action matrix of `g` on the coset space, column convention:
/// `M(g) e_c = e_{c·g}`, hence `M(gh) = M(h) M(g)`.
pub fn coset_action_matrix(cs: &CosetSpace<'_>, g: usize) -> IntegerMatrix {
    let d = cs.len();
    let mut m = Matrix::zeros(d, d);
    for c in 0..d {
        m[(cs.act(c, g), c)] = Int::from(1);
    }
    m
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Symmetric group S3 on 3 points.
    pub fn s3() -> FiniteGroup {
        let a = Permutation::parse("(0 1 2)", 3).unwrap();
        let b = Permutation::parse("(0 1)", 3).unwrap();
        FiniteGroup::new(&[a, b]).unwrap()
    }

    /// The affine group {x -> ax + b : a odd} on Z/8, order 32, with its
    /// standard almost-conjugate pair of order-4 subgroups.
    pub fn affine32() -> FiniteGroup {
        let t = affine_perm(1, 1); // x + 1
        let m3 = affine_perm(3, 0); // 3x
        let m5 = affine_perm(5, 0); // 5x
        let a = affine_perm(3, 4); // 3x + 4
        let b = affine_perm(5, 4); // 5x + 4
        FiniteGroup::new(&[t, m3, m5, a, b]).unwrap()
    }

    /// Generator ordinals of the two order-4 subgroups of `affine32`.
    pub fn affine32_pair(group: &FiniteGroup) -> (Subgroup<'_>, Subgroup<'_>) {
        let g1 = group
            .subgroup_from_perms(&[affine_perm(3, 0), affine_perm(5, 0)])
            .unwrap();
        let g2 = group
            .subgroup_from_perms(&[affine_perm(3, 4), affine_perm(5, 4)])
            .unwrap();
        (g1, g2)
    }

    pub fn affine_perm(a: u32, b: u32) -> Permutation {
        let images: Vec<usize> = (0..8).map(|x| ((a * x + b) % 8) as usize).collect();
        Permutation::from_images(images).unwrap()
    }

    /// GL(3,2) acting on the 7 nonzero vectors of F_2^3 (order 168).
    /// Point p corresponds to the vector with binary encoding p + 1.
    pub fn gl32() -> FiniteGroup {
        // transvection x0 += x1, and coordinate rotation (x0,x1,x2) -> (x1,x2,x0)
        let trans = gl32_perm(&[[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let rot = gl32_perm(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        FiniteGroup::new(&[trans, rot]).unwrap()
    }

    pub fn gl32_perm(m: &[[u32; 3]; 3]) -> Permutation {
        let images: Vec<usize> = (0..7)
            .map(|p| {
                let v = p + 1;
                let x = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
                let mut y = 0usize;
                for i in 0..3 {
                    let yi = (0..3).fold(0, |acc, j| acc ^ ((m[i][j] as usize) * x[j]));
                    y |= (yi & 1) << i;
                }
                y - 1
            })
            .collect();
        Permutation::from_images(images).unwrap()
    }

    /// Z3^3 acting on itself by left translation (degree 27).
    pub fn elementary27() -> FiniteGroup {
        let gens: Vec<Permutation> = (0..3)
            .map(|axis| {
                let images: Vec<usize> = (0..27)
                    .map(|p| {
                        let (x, y, z) = (p / 9, (p / 3) % 3, p % 3);
                        match axis {
                            0 => ((x + 1) % 3) * 9 + y * 3 + z,
                            1 => x * 9 + ((y + 1) % 3) * 3 + z,
                            _ => x * 9 + y * 3 + (z + 1) % 3,
                        }
                    })
                    .collect();
                Permutation::from_images(images).unwrap()
            })
            .collect();
        FiniteGroup::new(&gens).unwrap()
    }

    /// The Heisenberg group mod 3 acting on itself by left translation
    /// (degree 27): (a,b,c)·(x,y,z) = (a+x, b+y, c+z+a·y).
    pub fn heisenberg27() -> FiniteGroup {
        let translate = |a: usize, b: usize, c: usize| -> Permutation {
            let images: Vec<usize> = (0..27)
                .map(|p| {
                    let (x, y, z) = (p / 9, (p / 3) % 3, p % 3);
                    let nx = (a + x) % 3;
                    let ny = (b + y) % 3;
                    let nz = (c + z + a * y) % 3;
                    nx * 9 + ny * 3 + nz
                })
                .collect();
            Permutation::from_images(images).unwrap()
        };
        FiniteGroup::new(&[translate(1, 0, 0), translate(0, 1, 0)]).unwrap()
    }

    /// Dihedral group of order 8 on 4 points.
    pub fn dihedral8() -> FiniteGroup {
        let r = Permutation::parse("(0 1 2 3)", 4).unwrap();
        let s = Permutation::parse("(1 3)", 4).unwrap();
        FiniteGroup::new(&[r, s]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn s3_enumeration_is_deterministic() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.degree(), 3);
        assert!(g.element(0).is_identity());
        // BFS order: e, then e*(012), e*(01), then products.
        assert_eq!(g.element(1).to_string(), "(0 1 2)");
        assert_eq!(g.element(2).to_string(), "(0 1)");
        assert!(!g.is_abelian());
    }

    #[test]
    fn empty_generator_list_gives_trivial_group() {
        let g = FiniteGroup::new(&[]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
        assert!(g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 1);
    }

    #[test]
    fn closure_bound_is_enforced() {
        let c = Permutation::parse("(0 1 2 3 4 5 6 7 8 9)", 10).unwrap();
        match FiniteGroup::enumerate(&[c], 5) {
            Err(Error::ClosureBoundExceeded { bound: 5 }) => {}
            Err(e) => panic!("expected ClosureBoundExceeded, got {e:?}"),
            Ok(_) => panic!("expected ClosureBoundExceeded, got a group"),
        }
    }

    #[test]
    fn words_reconstruct_elements() {
        let g = s3();
        for i in 0..g.order() {
            let mut acc = 0usize; // identity
            for gi in g.word(i) {
                acc = g.mul(acc, g.generator_ordinals()[gi]);
            }
            assert_eq!(acc, i);
        }
    }

    #[test]
    fn s3_conjugacy_classes() {
        let g = s3();
        let classes = g.conjugacy_classes();
        let mut sizes: Vec<usize> = classes.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(classes.classes[0], vec![0]);
        // class_of is consistent
        for (i, cl) in classes.classes.iter().enumerate() {
            for &x in cl {
                assert_eq!(classes.class_of[x], i);
            }
        }
    }

    #[test]
    fn heisenberg_has_eleven_classes() {
        let h = heisenberg27();
        assert_eq!(h.order(), 27);
        assert!(!h.is_abelian());
        let classes = h.conjugacy_classes();
        assert_eq!(classes.len(), 11);
        let mut sizes: Vec<usize> = classes.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 3, 3, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn elementary_group_is_abelian_of_order_27() {
        let e = elementary27();
        assert_eq!(e.order(), 27);
        assert!(e.is_abelian());
        assert_eq!(e.conjugacy_classes().len(), 27);
    }

    #[test]
    fn affine32_and_its_pair() {
        let g = affine32();
        assert_eq!(g.order(), 32);
        let (g1, g2) = affine32_pair(&g);
        assert_eq!(g1.order(), 4);
        assert_eq!(g2.order(), 4);
        assert_eq!(g1.index(), 8);
        assert!(g1.is_abelian() && g2.is_abelian());
        assert!(!g1.same_elements(&g2));
    }

    #[test]
    fn gl32_has_order_168() {
        let g = gl32();
        assert_eq!(g.order(), 168);
        assert_eq!(g.conjugacy_classes().len(), 6);
    }

    #[test]
    fn subgroup_closure_and_rejection() {
        let g = s3();
        let h = g.subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()]).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(h.index(), 3);
        // {e, (012)} is not closed: (012)^2 = (021) escapes.
        let a = g.ordinal_of(&Permutation::parse("(0 1 2)", 3).unwrap()).unwrap();
        assert!(matches!(
            g.subgroup_from_elements(&[0, a]),
            Err(Error::NotASubgroup { .. })
        ));
        let b = g.ordinal_of(&Permutation::parse("(0 2 1)", 3).unwrap()).unwrap();
        assert!(g.subgroup_from_elements(&[0, a, b]).is_ok());
    }

    #[test]
    fn all_subgroups_of_s3_and_d4() {
        let g = s3();
        let subs = g.all_subgroups();
        assert_eq!(subs.len(), 6); // e, three <(ab)>, <(abc)>, S3
        let mut orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);

        let d = dihedral8();
        assert_eq!(d.order(), 8);
        let subs = d.all_subgroups();
        assert_eq!(subs.len(), 10);
    }

    #[test]
    fn conjugate_subgroups_in_s3() {
        let g = s3();
        let h1 = g.subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()]).unwrap();
        let h2 = g.subgroup_from_perms(&[Permutation::parse("(1 2)", 3).unwrap()]).unwrap();
        let found = (0..g.order()).any(|x| h1.conjugate_by(x).same_elements(&h2));
        assert!(found);
    }

    #[test]
    fn regular_cosets_of_z2() {
        let g = FiniteGroup::new(&[Permutation::parse("(0 1)", 2).unwrap()]).unwrap();
        let trivial = g.trivial_subgroup();
        let cs = g.right_cosets(&trivial).unwrap();
        assert_eq!(cs.len(), 2);
        let m = coset_action_matrix(&cs, 1);
        assert_eq!(
            m,
            Matrix::from_vec(2, 2, vec![0, 1, 1, 0].into_iter().map(Int::from).collect())
        );
    }

    #[test]
    fn coset_action_matrices_compose_contravariantly() {
        let g = s3();
        let h = g.subgroup_from_perms(&[Permutation::parse("(0 1)", 3).unwrap()]).unwrap();
        let cs = g.right_cosets(&h).unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs.rep(0), 0, "coset 0 is the subgroup itself");
        for a in 0..g.order() {
            for b in 0..g.order() {
                let mab = coset_action_matrix(&cs, g.mul(a, b));
                let ma = coset_action_matrix(&cs, a);
                let mb = coset_action_matrix(&cs, b);
                assert_eq!(mab, mb.mul(&ma), "M(ab) = M(b) M(a)");
            }
        }
        for a in 0..g.order() {
            let prod = coset_action_matrix(&cs, a).mul(&coset_action_matrix(&cs, g.inv(a)));
            assert_eq!(prod, IntegerMatrix::identity(3));
        }
    }

    #[test]
    fn permutation_character_of_regular_representation() {
        let g = s3();
        let cs = g.right_cosets(&g.trivial_subgroup()).unwrap();
        let chi = cs.permutation_character();
        assert_eq!(chi[0], Int::from(6));
        assert!(chi[1..].iter().all(|x| x == &Int::from(0)));
    }

    #[test]
    fn mul_matches_composition_without_table() {
        // Force the non-table path by checking against direct composition.
        let g = gl32();
        for (a, b) in [(3usize, 17usize), (100, 42), (167, 167), (0, 5)] {
            let direct = g.element(a).then(g.element(b)).unwrap();
            assert_eq!(g.element(g.mul(a, b)), &direct);
        }
    }
}
