//! Finite simplicial complexes with a free simplicial G-action: the join
//! construction, quotient complexes with integer boundary matrices,
//! homology via Smith normal form, and transplantation of chains and
//! homology classes along a [`TransplantationPair`].
//!
//! Conventions:
//! * vertices are `0..n`; a q-simplex is stored as its ascending vertex
//!   tuple, and that ordering is the positive orientation;
//! * the group acts on vertices on the left (`φ(gh) = φ(g)∘φ(h)`); the
//!   induced action on oriented simplices carries the sign of the sort
//!   that re-orders the mapped tuple;
//! * chain groups are free ℤ-modules on the (orbit) simplices, boundary
//!   `∂[v₀…v_q] = Σᵢ (−1)ⁱ [v₀…v̂ᵢ…v_q]`.

use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::snf::{smith_normal_form_sparse, SnfFlags};
use crate::matrix::sparse::SparseIntMatrix;
use crate::transplant::TransplantationPair;
use crate::{Int, IntegerMatrix, Matrix, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Default cap on the number of simplices per dimension.
pub const DEFAULT_SIMPLEX_BUDGET: usize = 1_000_000;

/// A finite simplicial complex with a verified free simplicial action.
pub struct GComplex<'g> {
    group: &'g FiniteGroup,
    n_vertices: usize,
    /// `simplices[q]` is the sorted list of ascending vertex tuples.
    simplices: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    /// Vertex images per *element* (extended from the generator images).
    vertex_action: Vec<Vec<u32>>,
}

/// Sort a mapped vertex tuple and return the parity of the sort
/// (+1 even, −1 odd).  Tuples are short; insertion sort is exact and fast.
fn sort_with_sign(tuple: &mut [u32]) -> i8 {
    let mut sign = 1i8;
    for i in 1..tuple.len() {
        let mut j = i;
        while j > 0 && tuple[j - 1] > tuple[j] {
            tuple.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

impl<'g> GComplex<'g> {
    /// Assemble and validate a complex: faces must be present, the vertex
    /// maps must extend to a genuine action, every generator must be
    /// simplicial, and the action must be free on the simplices of every
    /// dimension.
    pub fn from_parts(
        group: &'g FiniteGroup,
        n_vertices: usize,
        mut simplices: Vec<Vec<Vec<u32>>>,
        generator_vertex_images: Vec<Vec<u32>>,
    ) -> Result<Self> {
        // Normalize: ascending tuples, sorted dimension lists, no dups.
        for (q, list) in simplices.iter_mut().enumerate() {
            for s in list.iter_mut() {
                if s.len() != q + 1 {
                    return Err(Error::Parse(format!(
                        "a {}-simplex must have {} vertices, got {}",
                        q,
                        q + 1,
                        s.len()
                    )));
                }
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Parse(format!(
                        "degenerate simplex ({})",
                        fmt_tuple(s)
                    )));
                }
                if let Some(&v) = s.last() {
                    if v as usize >= n_vertices {
                        return Err(Error::PointOutOfRange {
                            point: v as usize,
                            degree: n_vertices,
                        });
                    }
                }
            }
            list.sort_unstable();
            list.dedup();
        }
        let index: Vec<HashMap<Vec<u32>, usize>> = simplices
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();

        // Closure: every face of every simplex is present.
        for q in 1..simplices.len() {
            for s in &simplices[q] {
                for drop in 0..s.len() {
                    let mut face: Vec<u32> = s.clone();
                    face.remove(drop);
                    if !index[q - 1].contains_key(&face) {
                        return Err(Error::Parse(format!(
                            "missing face ({}) of simplex ({})",
                            fmt_tuple(&face),
                            fmt_tuple(s)
                        )));
                    }
                }
            }
        }

        // Extend generator vertex maps to all elements along the stored
        // factorizations, then verify the homomorphism law everywhere.
        if generator_vertex_images.len() != group.generators().len() {
            return Err(Error::Parse(format!(
                "expected {} generator vertex maps, got {}",
                group.generators().len(),
                generator_vertex_images.len()
            )));
        }
        for img in &generator_vertex_images {
            if img.len() != n_vertices {
                return Err(Error::Parse(format!(
                    "vertex map has {} entries, complex has {} vertices",
                    img.len(),
                    n_vertices
                )));
            }
            let mut seen = vec![false; n_vertices];
            for &v in img {
                if v as usize >= n_vertices || seen[v as usize] {
                    return Err(Error::NotBijective { point: v as usize });
                }
                seen[v as usize] = true;
            }
        }
        let order = group.order();
        let mut vertex_action: Vec<Vec<u32>> = Vec::with_capacity(order);
        vertex_action.push((0..n_vertices as u32).collect());
        for x in 1..order {
            let word = group.word(x);
            let gi = *word.last().unwrap();
            let mut parent = 0usize;
            for &p in &word[..word.len() - 1] {
                parent = group.mul(parent, group.generator_ordinals()[p]);
            }
            // left action: φ(parent·gen) = φ(parent) ∘ φ(gen)
            let gen_map = &generator_vertex_images[gi];
            let parent_map = &vertex_action[parent];
            let composed: Vec<u32> = (0..n_vertices)
                .map(|v| parent_map[gen_map[v] as usize])
                .collect();
            vertex_action.push(composed);
        }
        for x in 0..order {
            for (gi, &t) in group.generator_ordinals().iter().enumerate() {
                let xt = group.mul(x, t);
                let gen_map = &generator_vertex_images[gi];
                let ok = (0..n_vertices)
                    .all(|v| vertex_action[xt][v] == vertex_action[x][gen_map[v] as usize]);
                if !ok {
                    return Err(Error::InconsistentAction {
                        element: x,
                        generator: gi,
                    });
                }
            }
        }

        let complex = GComplex {
            group,
            n_vertices,
            simplices,
            index,
            vertex_action,
        };

        // Simplicial: generators map simplices into the complex.
        for (gi, &g) in group.generator_ordinals().iter().enumerate() {
            for q in 0..complex.simplices.len() {
                for s in &complex.simplices[q] {
                    let mut mapped: Vec<u32> =
                        s.iter().map(|&v| complex.vertex_action[g][v as usize]).collect();
                    sort_with_sign(&mut mapped);
                    if !complex.index[q].contains_key(&mapped) {
                        return Err(Error::NotSimplicial {
                            generator: gi,
                            simplex: fmt_tuple(s),
                        });
                    }
                }
            }
        }

        // Free: no non-identity element fixes any simplex, in any
        // dimension (vertex-freeness alone is not enough).
        complex.check_free_for(1..order)?;

        Ok(complex)
    }

    /// Vertices are pairs (copy, element) of `k` copies of the group; a
    /// simplex is any vertex set with pairwise distinct copy indices; the
    /// group acts diagonally by left translation.  This is a free
    /// simplicial action of dimension k−1.
    pub fn join_complex(group: &'g FiniteGroup, k: usize, budget: usize) -> Result<Self> {
        assert!(k >= 1, "the join needs at least one copy");
        let n = group.order();
        let n_vertices = k * n;
        // simplex count per dimension q: C(k, q+1) * n^(q+1)
        for q in 0..k {
            let mut count: u128 = binomial(k, q + 1);
            for _ in 0..q + 1 {
                count = count.saturating_mul(n as u128);
            }
            if count > budget as u128 {
                return Err(Error::SizeBound {
                    context: format!("{q}-simplices of the {k}-fold join"),
                    needed: count.min(usize::MAX as u128) as usize,
                    budget,
                });
            }
        }

        let vertex = |copy: usize, elem: usize| (copy * n + elem) as u32;
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::with_capacity(k);
        // Enumerate copy subsets and element assignments per dimension.
        for q in 0..k {
            let size = q + 1;
            let mut list: Vec<Vec<u32>> = Vec::new();
            let mut copies: Vec<usize> = (0..size).collect();
            loop {
                // all element assignments for this copy subset
                let mut elems = vec![0usize; size];
                loop {
                    let tuple: Vec<u32> = (0..size).map(|i| vertex(copies[i], elems[i])).collect();
                    list.push(tuple);
                    // increment elems
                    let mut pos = size;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        elems[pos] += 1;
                        if elems[pos] < n {
                            break;
                        }
                        elems[pos] = 0;
                        if pos == 0 {
                            pos = usize::MAX;
                            break;
                        }
                    }
                    if pos == usize::MAX {
                        break;
                    }
                }
                // next copy combination
                let mut slot = size;
                let mut advanced = false;
                while slot > 0 {
                    slot -= 1;
                    if copies[slot] != slot + k - size {
                        copies[slot] += 1;
                        for s in slot + 1..size {
                            copies[s] = copies[s - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
            simplices.push(list);
        }

        let generator_vertex_images: Vec<Vec<u32>> = group
            .generator_ordinals()
            .iter()
            .map(|&s| {
                (0..n_vertices)
                    .map(|v| {
                        let (copy, elem) = (v / n, v % n);
                        vertex(copy, group.mul(s, elem))
                    })
                    .collect()
            })
            .collect();

        Self::from_parts(group, n_vertices, simplices, generator_vertex_images)
    }

    fn check_free_for(&self, elements: impl Iterator<Item = usize>) -> Result<()> {
        for g in elements {
            if g == 0 {
                continue;
            }
            for q in 0..self.simplices.len() {
                for (i, s) in self.simplices[q].iter().enumerate() {
                    let (img, _) = self.act_on_simplex(g, q, i);
                    if img == i {
                        return Err(Error::NotFree {
                            element: self.group.element(g).to_string(),
                            dim: q,
                            simplex: fmt_tuple(s),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Highest dimension with simplices.
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn n_simplices(&self, q: usize) -> usize {
        self.simplices.get(q).map_or(0, |l| l.len())
    }

    pub fn simplex(&self, q: usize, i: usize) -> &[u32] {
        &self.simplices[q][i]
    }

    pub fn simplex_index(&self, q: usize, tuple: &[u32]) -> Option<usize> {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.index.get(q).and_then(|m| m.get(&t)).copied()
    }

    /// Image of vertex `v` under element `g`.
    pub fn vertex_image(&self, g: usize, v: u32) -> u32 {
        self.vertex_action[g][v as usize]
    }

    /// Image simplex index and orientation sign of `g` acting on simplex
    /// `i` of dimension `q`.
    pub fn act_on_simplex(&self, g: usize, q: usize, i: usize) -> (usize, i8) {
        let mut mapped: Vec<u32> = self.simplices[q][i]
            .iter()
            .map(|&v| self.vertex_action[g][v as usize])
            .collect();
        let sign = sort_with_sign(&mut mapped);
        let idx = self.index[q][&mapped];
        (idx, sign)
    }

    /// Boundary matrix `∂_q : C_q(X) → C_{q-1}(X)` of the full complex.
    pub fn boundary(&self, q: usize) -> SparseIntMatrix {
        if q == 0 || q > self.dim() {
            return SparseIntMatrix::zeros(
                if q == 0 { 0 } else { self.n_simplices(q - 1) },
                self.n_simplices(q),
            );
        }
        let mut m = SparseIntMatrix::zeros(self.n_simplices(q - 1), self.n_simplices(q));
        for (j, s) in self.simplices[q].iter().enumerate() {
            let mut entries: Vec<(usize, Int)> = Vec::with_capacity(s.len());
            for drop in 0..s.len() {
                let mut face: Vec<u32> = s.clone();
                face.remove(drop);
                let i = self.index[q - 1][&face];
                let sign = if drop % 2 == 0 { Int::one() } else { -Int::one() };
                entries.push((i, sign));
            }
            m.set_col(j, entries);
        }
        m
    }

    /// The quotient by a subgroup acting (necessarily freely — rechecked)
    /// on this complex.
    pub fn quotient(&self, sub: &Subgroup<'g>) -> Result<QuotientComplex<'_, 'g>> {
        if !std::ptr::eq(sub.parent(), self.group) {
            return Err(Error::GroupMismatch {
                context: "subgroup belongs to a different group than the complex".into(),
            });
        }
        self.check_free_for(sub.elements().iter().copied())?;

        let dims = self.simplices.len();
        let mut orbit_reps: Vec<Vec<usize>> = Vec::with_capacity(dims);
        let mut orbit_of: Vec<Vec<u32>> = Vec::with_capacity(dims);
        let mut sign_to_rep: Vec<Vec<i8>> = Vec::with_capacity(dims);
        for q in 0..dims {
            let n = self.n_simplices(q);
            let mut of = vec![u32::MAX; n];
            let mut sg = vec![0i8; n];
            let mut reps = Vec::new();
            for s in 0..n {
                if of[s] != u32::MAX {
                    continue;
                }
                let o = reps.len() as u32;
                reps.push(s);
                for &gamma in sub.elements() {
                    let (img, sign) = self.act_on_simplex(gamma, q, s);
                    debug_assert!(
                        of[img] == u32::MAX || gamma == 0,
                        "free orbits may not collide"
                    );
                    of[img] = o;
                    sg[img] = sign;
                }
            }
            debug_assert_eq!(reps.len() * sub.order(), n, "freeness forces equal orbits");
            orbit_reps.push(reps);
            orbit_of.push(of);
            sign_to_rep.push(sg);
        }

        // Induced boundary: push the boundary of each orbit representative
        // through the projection π[s] = sign(s)·[orbit(s)].
        let mut boundaries: Vec<SparseIntMatrix> = Vec::with_capacity(dims);
        boundaries.push(SparseIntMatrix::zeros(0, orbit_reps[0].len()));
        for q in 1..dims {
            let mut m = SparseIntMatrix::zeros(orbit_reps[q - 1].len(), orbit_reps[q].len());
            for (o, &rep) in orbit_reps[q].iter().enumerate() {
                let s = &self.simplices[q][rep];
                let mut entries: Vec<(usize, Int)> = Vec::with_capacity(s.len());
                for drop in 0..s.len() {
                    let mut face: Vec<u32> = s.clone();
                    face.remove(drop);
                    let i = self.index[q - 1][&face];
                    let mut sign = if drop % 2 == 0 { 1i8 } else { -1 };
                    sign *= sign_to_rep[q - 1][i];
                    entries.push((orbit_of[q - 1][i] as usize, Int::from(sign)));
                }
                m.set_col(o, entries);
            }
            boundaries.push(m);
        }

        let quotient = QuotientComplex {
            complex: self,
            subgroup: sub.clone(),
            orbit_reps,
            orbit_of,
            sign_to_rep,
            boundaries,
        };
        // ∂∘∂ = 0 downstairs, exactly.
        for q in 2..dims {
            assert!(
                quotient
                    .boundary(q - 1)
                    .mul(&quotient.boundary(q))
                    .is_zero(),
                "the quotient boundary must square to zero"
            );
        }
        Ok(quotient)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn fmt_tuple(t: &[u32]) -> String {
    t.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// The quotient of a [`GComplex`] by a freely acting subgroup: orbit
/// cells, induced integer boundaries, homology.
pub struct QuotientComplex<'x, 'g> {
    complex: &'x GComplex<'g>,
    subgroup: Subgroup<'g>,
    /// Per dimension: upstairs index of each orbit's lexicographically
    /// minimal simplex.
    orbit_reps: Vec<Vec<usize>>,
    orbit_of: Vec<Vec<u32>>,
    sign_to_rep: Vec<Vec<i8>>,
    boundaries: Vec<SparseIntMatrix>,
}

/// Homology of a quotient in one degree: free rank and invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<Int>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.betti == 0 && self.torsion.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.betti)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'x, 'g> QuotientComplex<'x, 'g> {
    pub fn complex(&self) -> &'x GComplex<'g> {
        self.complex
    }

    pub fn subgroup(&self) -> &Subgroup<'g> {
        &self.subgroup
    }

    pub fn dim(&self) -> usize {
        self.orbit_reps.len().saturating_sub(1)
    }

    pub fn n_cells(&self, q: usize) -> usize {
        self.orbit_reps.get(q).map_or(0, |r| r.len())
    }

    /// Upstairs simplex index of the representative of orbit `o`.
    pub fn rep(&self, q: usize, o: usize) -> usize {
        self.orbit_reps[q][o]
    }

    /// Project an upstairs simplex: its orbit and the sign relating it to
    /// the orbit representative's orientation.
    pub fn project(&self, q: usize, simplex: usize) -> (usize, i8) {
        (
            self.orbit_of[q][simplex] as usize,
            self.sign_to_rep[q][simplex],
        )
    }

    /// Induced boundary `∂_q : C_q → C_{q-1}` (zero-row matrix at q = 0,
    /// zero-column matrix above the dimension).
    pub fn boundary(&self, q: usize) -> SparseIntMatrix {
        if q < self.boundaries.len() {
            self.boundaries[q].clone()
        } else if q == self.boundaries.len() {
            SparseIntMatrix::zeros(self.n_cells(q - 1), 0)
        } else {
            SparseIntMatrix::zeros(0, 0)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim())
            .map(|q| {
                let n = self.n_cells(q) as i64;
                if q % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Homology in degree q via Smith normal forms of the two adjacent
    /// boundaries.
    pub fn homology(&self, q: usize) -> HomologyGroup {
        if q > self.dim() {
            return HomologyGroup {
                betti: 0,
                torsion: Vec::new(),
            };
        }
        let rank_dq = smith_normal_form_sparse(&self.boundary(q), SnfFlags::none()).rank();
        let snf_up = smith_normal_form_sparse(&self.boundary(q + 1), SnfFlags::none());
        let betti = self.n_cells(q) - rank_dq - snf_up.rank();
        let torsion: Vec<Int> = snf_up
            .factors
            .iter()
            .filter(|f| **f > Int::one())
            .cloned()
            .collect();
        HomologyGroup { betti, torsion }
    }
}

/// Chain transplantation `τ♯ : C_q(Γ₁\X) → C_q(Γ₂\X)`: lift each
/// Γ₁-orbit representative s, act by the coset representatives xⱼ of
/// Γ₂\G, and project, weighting by the τ-coefficients cⱼ = τ[j,0]:
/// `τ♯[s] = Σⱼ cⱼ · π₂(xⱼ.s)`.
pub fn transplant_chains(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    q: usize,
) -> Result<SparseIntMatrix> {
    check_pair_matches(pair, quot1, quot2)?;
    let complex = quot1.complex();
    let cs2 = pair.cosets2();
    let tau = pair.tau();
    let mut m = SparseIntMatrix::zeros(quot2.n_cells(q), quot1.n_cells(q));
    for o in 0..quot1.n_cells(q) {
        let s = quot1.rep(q, o);
        let mut entries: Vec<(usize, Int)> = Vec::new();
        for j in 0..cs2.len() {
            let c = &tau[(j, 0)];
            if c.is_zero() {
                continue;
            }
            let (img, sign1) = complex.act_on_simplex(cs2.rep(j), q, s);
            let (orbit, sign2) = quot2.project(q, img);
            let coeff = c * Int::from(sign1 as i64 * sign2 as i64);
            entries.push((orbit, coeff));
        }
        m.set_col(o, entries);
    }
    Ok(m)
}

pub(crate) fn check_pair_matches(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
) -> Result<()> {
    if !std::ptr::eq(quot1.complex(), quot2.complex()) {
        return Err(Error::GroupMismatch {
            context: "the two quotients must come from the same complex".into(),
        });
    }
    if !pair
        .cosets1()
        .subgroup()
        .same_elements(quot1.subgroup())
        || !pair.cosets2().subgroup().same_elements(quot2.subgroup())
    {
        return Err(Error::GroupMismatch {
            context: "transplantation subgroups do not match the quotients".into(),
        });
    }
    Ok(())
}

/// A basis of `H_q` of one quotient, adapted to the Smith normal forms:
/// matrices projecting cycles to free homology coordinates and lifting
/// free generators back to cycles.
pub struct HomologyBasis {
    pub homology: HomologyGroup,
    /// betti × n_q: cycle (ambient chain) → free homology coordinates.
    pub project: IntegerMatrix,
    /// n_q × betti: free generator → representative cycle.
    pub lift: IntegerMatrix,
}

/// Compute an SNF-adapted basis of H_q: kernel coordinates from the SNF
/// of ∂_q, boundary image in those coordinates, and the free quotient
/// from the SNF of that presentation matrix.
pub fn homology_basis(quot: &QuotientComplex<'_, '_>, q: usize) -> HomologyBasis {
    let d_down = quot.boundary(q);
    let d_up = quot.boundary(q + 1);
    let n_q = quot.n_cells(q);

    // Kernel of ∂_q: the last z columns of V, where z = n_q − rank.
    let snf_down = smith_normal_form_sparse(
        &d_down,
        SnfFlags {
            u: false,
            u_inv: false,
            v: true,
            v_inv: true,
        },
    );
    let r = snf_down.rank();
    let z = n_q - r;
    let v = snf_down.v.as_ref().expect("v requested");
    let v_inv = snf_down.v_inv.as_ref().expect("v_inv requested");
    let kernel_cols: Vec<usize> = (r..n_q).collect();
    let kernel = v.select_cols(&kernel_cols); // n_q × z
    let kernel_coords = v_inv.select_rows(&kernel_cols); // z × n_q

    // Boundaries in kernel coordinates: W = (V⁻¹ ∂_{q+1})[r.., :].
    // Exploit the sparsity of ∂_{q+1} column by column.
    let mut w = Matrix::zeros(z, d_up.cols());
    for j in 0..d_up.cols() {
        for (i, x) in d_up.col(j) {
            let i = *i as usize;
            for t in 0..z {
                let coeff = &kernel_coords[(t, i)];
                if !coeff.is_zero() {
                    w[(t, j)] = &w[(t, j)] + &(coeff * x);
                }
            }
        }
    }
    // Sanity: boundaries must be cycles, i.e. the dropped coordinates of
    // V⁻¹∂_{q+1} vanish; equivalent to ∂_q ∂_{q+1} = 0, already asserted.

    let snf_w = crate::matrix::snf::smith_normal_form_fast(
        &w,
        SnfFlags {
            u: true,
            u_inv: true,
            v: false,
            v_inv: false,
        },
    );
    let rank_w = snf_w.rank();
    let betti = z - rank_w;
    let torsion: Vec<Int> = snf_w
        .factors
        .iter()
        .filter(|f| **f > Int::one())
        .cloned()
        .collect();
    let u = snf_w.u.as_ref().expect("u requested");
    let u_inv = snf_w.u_inv.as_ref().expect("u_inv requested");
    let free_rows: Vec<usize> = (rank_w..z).collect();

    // cycle → free coordinates: last betti rows of U·(V⁻¹[r..]).
    let project = u.select_rows(&free_rows).mul(&kernel_coords);
    // free generator → cycle: K · (U⁻¹ columns rank_w..).
    let lift = kernel.mul(&u_inv.select_cols(&free_rows));

    debug_assert_eq!(
        project.mul(&lift),
        IntegerMatrix::identity(betti),
        "the projection must split the lift"
    );

    HomologyBasis {
        homology: HomologyGroup { betti, torsion },
        project,
        lift,
    }
}

/// The induced map on `H_q` mod torsion, in the SNF-adapted bases of the
/// two quotients: betti₂ × betti₁, together with both homology groups.
pub fn transplant_homology(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    q: usize,
) -> Result<(IntegerMatrix, HomologyGroup, HomologyGroup)> {
    let chains = transplant_chains(pair, quot1, quot2, q)?;
    let b1 = homology_basis(quot1, q);
    let b2 = homology_basis(quot2, q);
    // betti₂×n₂ · n₂×n₁ (sparse) · n₁×betti₁
    let chains_lift = {
        let mut m = Matrix::zeros(chains.rows(), b1.lift.cols());
        for c in 0..b1.lift.cols() {
            for j in 0..b1.lift.rows() {
                let x = &b1.lift[(j, c)];
                if x.is_zero() {
                    continue;
                }
                for (i, e) in chains.col(j) {
                    let i = *i as usize;
                    m[(i, c)] = &m[(i, c)] + &(e * x);
                }
            }
        }
        m
    };
    let induced = b2.project.mul(&chains_lift);
    Ok((induced, b1.homology, b2.homology))
}

/// The induced map on cohomology lattices mod torsion, with `H^q`
/// identified with `Hom(H_q, ℤ)`: the transpose of the homology
/// transplantation in the dual bases, mapping the second quotient's
/// lattice to the first (contravariant).  The reverse transplantations
/// compose to `n·Id` on these lattices as well, with the factors in the
/// opposite order.
pub fn transplant_cohomology(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    q: usize,
) -> Result<(IntegerMatrix, HomologyGroup, HomologyGroup)> {
    let (t, h1, h2) = transplant_homology(pair, quot1, quot2, q)?;
    Ok((t.transpose(), h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::testutil::*;
    use crate::group::FiniteGroup;
    use crate::perm::Permutation;

    fn z2() -> FiniteGroup {
        FiniteGroup::new(&[Permutation::parse("(0 1)", 2).unwrap()]).unwrap()
    }

    #[test]
    fn join_of_z2_twice_is_a_four_cycle() {
        let g = z2();
        let x = GComplex::join_complex(&g, 2, 1000).unwrap();
        assert_eq!(x.n_vertices(), 4);
        assert_eq!(x.n_simplices(0), 4);
        assert_eq!(x.n_simplices(1), 4);
        assert_eq!(x.dim(), 1);
        // quotient by the whole Z2: 2 vertices, 2 edges, a circle
        let full = g.full_subgroup();
        let qc = x.quotient(&full).unwrap();
        assert_eq!(qc.n_cells(0), 2);
        assert_eq!(qc.n_cells(1), 2);
        assert_eq!(qc.homology(0), HomologyGroup { betti: 1, torsion: vec![] });
        assert_eq!(qc.homology(1), HomologyGroup { betti: 1, torsion: vec![] });
        assert_eq!(qc.euler_characteristic(), 0);
    }

    #[test]
    fn join_counts_for_order_32() {
        let g = affine32();
        let x = GComplex::join_complex(&g, 3, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert_eq!(x.n_vertices(), 96);
        assert_eq!(x.n_simplices(0), 96);
        assert_eq!(x.n_simplices(1), 3 * 32 * 32);
        assert_eq!(x.n_simplices(2), 32 * 32 * 32);
    }

    #[test]
    fn budget_is_enforced() {
        let g = affine32();
        match GComplex::join_complex(&g, 3, 10_000) {
            Err(Error::SizeBound { needed, budget, .. }) => {
                assert_eq!(needed, 32768);
                assert_eq!(budget, 10_000);
            }
            _ => panic!("expected SizeBound"),
        }
    }

    #[test]
    fn single_copy_join_is_a_free_vertex_set() {
        let g = s3();
        let x = GComplex::join_complex(&g, 1, 100).unwrap();
        assert_eq!(x.dim(), 0);
        assert_eq!(x.n_simplices(0), 6);
        let t = g.trivial_subgroup();
        let qc = x.quotient(&t).unwrap();
        assert_eq!(qc.homology(0), HomologyGroup { betti: 6, torsion: vec![] });
    }

    #[test]
    fn non_free_action_is_rejected() {
        // S3 acting on 3 isolated vertices by its natural permutation
        // action: transpositions fix a vertex.
        let g = s3();
        let simp = vec![vec![vec![0u32], vec![1], vec![2]]];
        let images = vec![vec![1u32, 2, 0], vec![1u32, 0, 2]];
        match GComplex::from_parts(&g, 3, simp, images) {
            Err(Error::NotFree { dim: 0, .. }) => {}
            _ => panic!("expected NotFree"),
        }
    }

    #[test]
    fn edge_fixing_action_is_rejected_even_with_free_vertices() {
        // Z2 swapping the two endpoints of an edge: free on vertices,
        // fixes the edge as a set.
        let g = z2();
        let simp = vec![vec![vec![0u32], vec![1]], vec![vec![0u32, 1]]];
        let images = vec![vec![1u32, 0]];
        match GComplex::from_parts(&g, 2, simp, images) {
            Err(Error::NotFree { dim: 1, .. }) => {}
            _ => panic!("expected NotFree on the edge"),
        }
    }

    #[test]
    fn missing_face_is_rejected() {
        let g = FiniteGroup::new(&[]).unwrap();
        let simp = vec![vec![vec![0u32]], vec![vec![0u32, 1]]];
        match GComplex::from_parts(&g, 2, simp, vec![]) {
            Err(Error::Parse(msg)) => assert!(msg.contains("missing face")),
            _ => panic!("expected missing-face error"),
        }
    }

    #[test]
    fn boundary_squares_to_zero_upstairs() {
        let g = affine32();
        let x = GComplex::join_complex(&g, 3, DEFAULT_SIMPLEX_BUDGET).unwrap();
        assert!(x.boundary(1).is_zero() == false);
        assert!(x.boundary(1).mul(&x.boundary(2)).is_zero());
    }

    #[test]
    fn quotient_by_trivial_subgroup_is_the_complex_itself() {
        let g = s3();
        let x = GComplex::join_complex(&g, 2, 1000).unwrap();
        let t = g.trivial_subgroup();
        let qc = x.quotient(&t).unwrap();
        assert_eq!(qc.n_cells(0), x.n_simplices(0));
        assert_eq!(qc.n_cells(1), x.n_simplices(1));
        // identical boundary matrices
        assert_eq!(qc.boundary(1).to_dense(), x.boundary(1).to_dense());
    }

    #[test]
    fn join_quotient_homology_of_z2_squared() {
        // join(Z2, 2) is a 4-cycle; quotient by the antipodal action is a
        // 2-cycle (circle): H0 = Z, H1 = Z.
        let g = z2();
        let x = GComplex::join_complex(&g, 2, 1000).unwrap();
        let qc = x.quotient(&g.full_subgroup()).unwrap();
        let h0 = qc.homology(0);
        let h1 = qc.homology(1);
        assert_eq!((h0.betti, h1.betti), (1, 1));
        assert!(h0.torsion.is_empty() && h1.torsion.is_empty());
    }

    #[test]
    fn homology_basis_splits() {
        let g = z2();
        let x = GComplex::join_complex(&g, 2, 1000).unwrap();
        let qc = x.quotient(&g.full_subgroup()).unwrap();
        let b = homology_basis(&qc, 1);
        assert_eq!(b.homology.betti, 1);
        assert_eq!(b.project.mul(&b.lift), IntegerMatrix::identity(1));
    }

    #[test]
    fn chain_transplant_commutes_with_boundary() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = crate::transplant::TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let x = GComplex::join_complex(&g, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let q1 = x.quotient(&g1).unwrap();
        let q2 = x.quotient(&g2).unwrap();
        let t0 = transplant_chains(&pair, &q1, &q2, 0).unwrap();
        let t1 = transplant_chains(&pair, &q1, &q2, 1).unwrap();
        // τ♯ ∂ = ∂ τ♯
        assert_eq!(
            t0.mul(&q1.boundary(1)).to_dense(),
            q2.boundary(1).mul(&t1).to_dense()
        );
        // σ♯ τ♯ = n · Id on chains in both degrees
        let back = pair.swapped();
        let s0 = transplant_chains(&back, &q2, &q1, 0).unwrap();
        let s1 = transplant_chains(&back, &q2, &q1, 1).unwrap();
        assert!(s0.mul(&t0).is_scalar_multiple_of_identity(pair.n()));
        assert!(s1.mul(&t1).is_scalar_multiple_of_identity(pair.n()));
    }

    #[test]
    fn homology_transplant_on_the_order_32_pair() {
        let g = affine32();
        let (g1, g2) = affine32_pair(&g);
        let pair = crate::transplant::TransplantationPair::build(&g, &g1, &g2, 0).unwrap();
        let x = GComplex::join_complex(&g, 2, DEFAULT_SIMPLEX_BUDGET).unwrap();
        let q1 = x.quotient(&g1).unwrap();
        let q2 = x.quotient(&g2).unwrap();
        let (t_ind, h1, h2) = transplant_homology(&pair, &q1, &q2, 1).unwrap();
        assert_eq!(h1, h2, "transplantable quotients share homology");
        assert_eq!(t_ind.rows(), h2.betti);
        assert_eq!(t_ind.cols(), h1.betti);
        // The reverse transplant composes to multiplication by n on
        // homology, on both sides: this certifies injectivity, finite
        // cokernel, and that every invariant factor divides n.
        let (s_ind, _, _) = transplant_homology(&pair.swapped(), &q2, &q1, 1).unwrap();
        assert!(s_ind.mul(&t_ind).is_scalar_multiple_of_identity(pair.n()));
        assert!(t_ind.mul(&s_ind).is_scalar_multiple_of_identity(pair.n()));
        // On the dual (cohomology) lattices the transposes compose to n·Id
        // in the opposite order.
        let (t_co, _, _) = transplant_cohomology(&pair, &q1, &q2, 1).unwrap();
        let (s_co, _, _) = transplant_cohomology(&pair.swapped(), &q2, &q1, 1).unwrap();
        assert!(t_co.mul(&s_co).is_scalar_multiple_of_identity(pair.n()));
        assert!(s_co.mul(&t_co).is_scalar_multiple_of_identity(pair.n()));
    }

    #[test]
    fn torsion_distinguishes_the_dihedral_quotients() {
        // The two index-2 subgroups of the dihedral group of order 8 are
        // cyclic-4 and Klein-4.  Their quotients of the 3-fold join have
        // equal Laplacian spectra in every degree, yet the first homology
        // carries the abelianization: Z/4 on one side, Z/2 + Z/2 on the
        // other.  No transplantation exists between them.
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
        let x = GComplex::join_complex(&d, 3, 10_000).unwrap();
        let qr = x.quotient(&r).unwrap();
        let qv = x.quotient(&v).unwrap();
        let hr = qr.homology(1);
        let hv = qv.homology(1);
        assert_eq!(hr, HomologyGroup { betti: 0, torsion: vec![Int::from(4)] });
        assert_eq!(
            hv,
            HomologyGroup { betti: 0, torsion: vec![Int::from(2), Int::from(2)] }
        );
        assert_eq!(hr.to_string(), "Z/4");
        assert_eq!(hv.to_string(), "Z/2 + Z/2");
    }

    #[test]
    fn projective_plane_like_quotient_of_z4() {
        // join(Z4, 2): K_{4,4}; quotient by Z4 has H1 = Z ⊕ ... compute
        // and sanity-check against Euler characteristic.
        let g = FiniteGroup::new(&[Permutation::parse("(0 1 2 3)", 4).unwrap()]).unwrap();
        let x = GComplex::join_complex(&g, 2, 1000).unwrap();
        let qc = x.quotient(&g.full_subgroup()).unwrap();
        let h0 = qc.homology(0);
        let h1 = qc.homology(1);
        // chi = b0 - b1 (graph): 2 - 4 = -2
        assert_eq!(qc.euler_characteristic(), -2);
        assert_eq!(h0.betti, 1);
        assert_eq!(h1.betti, 3);
    }
}
