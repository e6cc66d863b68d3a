//! Exact spectra of quotient complexes: combinatorial Laplacians,
//! characteristic polynomials, and isospectrality certificates via
//! transplantation.
//!
//! The Laplacian in degree q of a quotient complex is
//! `L_q = ∂_qᵀ∂_q + ∂_{q+1}∂_{q+1}ᵀ` on the orbit basis.  It coincides
//! with the restriction of the covering complex's Laplacian to the
//! subgroup-invariant cochains written in the orbit-indicator basis
//! ([`invariant_restriction_laplacian`] computes that restriction
//! independently, so the two routes can confirm each other).
//!
//! Two quotients of one complex by transplantable subgroups are exactly
//! isospectral in every degree: the cochain transplantation commutes with
//! the Laplacians, is injective, and has an inverse up to the scale n.
//! [`certify_isospectral`] checks both the polynomial equality and the
//! commutation witness.

use crate::gcomplex::{check_pair_matches, QuotientComplex};
use crate::matrix::charpoly::charpoly_int;
use crate::matrix::sparse::SparseIntMatrix;
use crate::transplant::TransplantationPair;
use crate::{Int, IntegerMatrix, Result};
use num_traits::{One, Zero};

/// Combinatorial Laplacian `∂_qᵀ∂_q + ∂_{q+1}∂_{q+1}ᵀ` of a quotient
/// complex in degree q, a symmetric integer matrix on the orbit cells.
/// By construction it equals the covering complex's Laplacian restricted
/// to the subgroup-invariant cochains in the orbit-indicator basis (see
/// [`invariant_restriction_laplacian`] for the independent computation).
pub fn quotient_laplacian(quot: &QuotientComplex<'_, '_>, q: usize) -> IntegerMatrix {
    quotient_laplacian_sparse(quot, q).to_dense()
}

pub(crate) fn quotient_laplacian_sparse(
    quot: &QuotientComplex<'_, '_>,
    q: usize,
) -> SparseIntMatrix {
    let down = quot.boundary(q);
    let up = quot.boundary(q + 1);
    let a = down.transpose().mul(&down);
    let b = up.mul(&up.transpose());
    a.add(&b)
}

/// The indicator matrix ι of a quotient in degree q: the column of orbit
/// `o` is the signed sum of the upstairs simplices in that orbit.  Its
/// image spans the subgroup-invariant cochains.
fn indicator_matrix(quot: &QuotientComplex<'_, '_>, q: usize) -> SparseIntMatrix {
    let n_up = quot.complex().n_simplices(q);
    let mut cols: Vec<Vec<(usize, Int)>> = vec![Vec::new(); quot.n_cells(q)];
    for s in 0..n_up {
        let (o, sign) = quot.project(q, s);
        cols[o].push((s, Int::from(sign)));
    }
    let mut m = SparseIntMatrix::zeros(n_up, quot.n_cells(q));
    for (o, entries) in cols.into_iter().enumerate() {
        m.set_col(o, entries);
    }
    m
}

/// The read-off matrix R of a quotient in degree q: evaluates an upstairs
/// cochain at each orbit representative, so `R·ι = Id`.
fn readoff_matrix(quot: &QuotientComplex<'_, '_>, q: usize) -> SparseIntMatrix {
    let mut m = SparseIntMatrix::zeros(quot.n_cells(q), quot.complex().n_simplices(q));
    for p in 0..quot.n_cells(q) {
        m.set_col(quot.rep(q, p), vec![(p, Int::one())]);
    }
    m
}

/// The upstairs Laplacian restricted to the subgroup-invariant cochains,
/// in the orbit-indicator basis: `R · (∂_qᵀ∂_q + ∂_{q+1}∂_{q+1}ᵀ) · ι`.
///
/// Always equals [`quotient_laplacian`]; computing it from the covering
/// complex gives an independent confirmation.  The invariance of the
/// restricted columns is verified along the way.  Intended for moderate
/// covering complexes.
pub fn invariant_restriction_laplacian(
    quot: &QuotientComplex<'_, '_>,
    q: usize,
) -> IntegerMatrix {
    let x = quot.complex();
    let down = x.boundary(q);
    let up = x.boundary(q + 1);
    let iota = indicator_matrix(quot, q);
    let l_iota = {
        let a = down.transpose().mul(&down.mul(&iota));
        let b = up.mul(&up.transpose().mul(&iota));
        a.add(&b)
    };
    let restricted = readoff_matrix(quot, q).mul(&l_iota);
    // The Laplacian preserves invariant cochains: rebuilding each column
    // from its representative values must reproduce it exactly.
    assert!(
        indicator_matrix(quot, q).mul(&restricted).sub(&l_iota).is_zero(),
        "the upstairs Laplacian must preserve the invariant cochains"
    );
    restricted.to_dense()
}

/// Transplantation of invariant cochains, in orbit-indicator bases: maps
/// degree-q cochains of the *second* quotient to the *first*,
/// `w ↦ Σⱼ τ[j,0] · (xⱼ⁻¹ acting on w)` with xⱼ the coset representatives
/// of the second subgroup.  Commutes with the quotient Laplacians.
pub fn transplant_cochains(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    q: usize,
) -> Result<IntegerMatrix> {
    Ok(transplant_cochains_sparse(pair, quot1, quot2, q)?.to_dense())
}

pub(crate) fn transplant_cochains_sparse(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    q: usize,
) -> Result<SparseIntMatrix> {
    check_pair_matches(pair, quot1, quot2)?;
    let x = quot1.complex();
    let group = x.group();
    let cs2 = pair.cosets2();
    let tau = pair.tau();
    let n_up = x.n_simplices(q);

    // T = Σⱼ cⱼ · P(xⱼ⁻¹) as a sparse matrix on upstairs cochains.
    let mut t = SparseIntMatrix::zeros(n_up, n_up);
    let movers: Vec<(usize, Int)> = (0..cs2.len())
        .filter(|&j| !tau[(j, 0)].is_zero())
        .map(|j| (group.inv(cs2.rep(j)), tau[(j, 0)].clone()))
        .collect();
    for s in 0..n_up {
        let mut entries: Vec<(usize, Int)> = Vec::with_capacity(movers.len());
        for (g, c) in &movers {
            let (img, sign) = x.act_on_simplex(*g, q, s);
            entries.push((img, c * Int::from(sign as i64)));
        }
        entries.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Int)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some((li, lv)) if *li == i => *lv = &*lv + &v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        t.set_col(s, merged);
    }

    let w = t.mul(&indicator_matrix(quot2, q));
    let m = readoff_matrix(quot1, q).mul(&w);
    // The transplanted cochains must be invariant for the first subgroup.
    assert!(
        indicator_matrix(quot1, q).mul(&m).sub(&w).is_zero(),
        "transplanted cochains must be invariant"
    );
    Ok(m)
}

/// Spectral comparison of one degree.
#[derive(Clone, Debug)]
pub struct DegreeSpectrum {
    pub q: usize,
    /// Characteristic polynomial of the first quotient's Laplacian,
    /// ascending coefficients, monic.
    pub charpoly1: Vec<Int>,
    pub charpoly2: Vec<Int>,
    pub equal: bool,
}

/// Characteristic polynomials of the quotient Laplacians compared degree
/// by degree — no transplantation needed, so this also reports honestly
/// on quotients that are *not* isospectral.
pub fn compare_spectra(
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    degrees: &[usize],
) -> Vec<DegreeSpectrum> {
    degrees
        .iter()
        .map(|&q| {
            let p1 = charpoly_int(&quotient_laplacian(quot1, q));
            let p2 = charpoly_int(&quotient_laplacian(quot2, q));
            let equal = p1 == p2;
            DegreeSpectrum {
                q,
                charpoly1: p1,
                charpoly2: p2,
                equal,
            }
        })
        .collect()
}

/// A per-degree isospectrality certificate: equal characteristic
/// polynomials plus the commuting transplantation witness.
#[derive(Clone, Debug)]
pub struct DegreeCertificate {
    pub spectrum: DegreeSpectrum,
    /// `M·L₂ = L₁·M` for the cochain transplantation M.
    pub intertwines: bool,
    /// First nonzero entry of `M·L₂ − L₁·M` (column-major order) when the
    /// residual is not exactly zero.
    pub residual_witness: Option<(usize, usize, Int)>,
}

/// Certificate that two quotients are exactly isospectral in the given
/// degrees, with the transplantation as the structural reason.
#[derive(Clone, Debug)]
pub struct IsospectralityCertificate {
    pub degrees: Vec<DegreeCertificate>,
    /// Every degree has equal polynomials and a commuting witness.
    pub certified: bool,
}

/// Certify exact isospectrality of two transplantable quotients in the
/// given degrees: the characteristic polynomials of the Laplacians must
/// agree, and the cochain transplantation must intertwine them exactly.
pub fn certify_isospectral(
    pair: &TransplantationPair<'_>,
    quot1: &QuotientComplex<'_, '_>,
    quot2: &QuotientComplex<'_, '_>,
    degrees: &[usize],
) -> Result<IsospectralityCertificate> {
    let mut out = Vec::with_capacity(degrees.len());
    for &q in degrees {
        let l1 = quotient_laplacian_sparse(quot1, q);
        let l2 = quotient_laplacian_sparse(quot2, q);
        let m = transplant_cochains_sparse(pair, quot1, quot2, q)?;
        let residual = m.mul(&l2).sub(&l1.mul(&m));
        let residual_witness = (0..residual.cols()).find_map(|j| {
            residual
                .col(j)
                .first()
                .map(|(i, v)| (*i as usize, j, v.clone()))
        });
        let intertwines = residual_witness.is_none();
        let p1 = charpoly_int(&l1.to_dense());
        let p2 = charpoly_int(&l2.to_dense());
        let equal = p1 == p2;
        out.push(DegreeCertificate {
            spectrum: DegreeSpectrum {
                q,
                charpoly1: p1,
                charpoly2: p2,
                equal,
            },
            intertwines,
            residual_witness,
        });
    }
    let certified = out.iter().all(|d| d.spectrum.equal && d.intertwines);
    Ok(IsospectralityCertificate {
        degrees: out,
        certified,
    })
}

/// Format a characteristic polynomial for display: `x^3 - 4x^2 + 2x`.
pub fn format_charpoly(coeffs: &[Int]) -> String {
    use num_traits::Signed;
    let mut terms: Vec<String> = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match k {
            0 => format!("{mag}"),
            _ => {
                let var = if k == 1 { "x".to_string() } else { format!("x^{k}") };
                if mag.is_one() {
                    var
                } else {
                    format!("{mag}{var}")
                }
            }
        };
        let negative = c.is_negative();
        terms.push(match (terms.is_empty(), negative) {
            (true, true) => format!("-{body}"),
            (true, false) => body,
            (false, true) => format!("- {body}"),
            (false, false) => format!("+ {body}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}
