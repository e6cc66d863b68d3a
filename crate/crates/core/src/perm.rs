//! Permutations of `{0, 1, …, degree-1}` in disjoint-cycle notation.
//!
//! Composition convention (used consistently across the crate): `a * b`
//! means "apply `a` first, then `b`", i.e. `(a * b)(x) = b(a(x))`.  With
//! this convention the natural action of a permutation group on points is
//! a right action: `x^(a*b) = (x^a)^b`.

use crate::error::Error;
use crate::Result;
use std::fmt;
use std::str::FromStr;

/// A permutation of the points `0..degree`, stored as the image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// The identity permutation on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Build from an image table (`images[x]` is the image of `x`),
    /// checking that it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n {
                return Err(Error::PointOutOfRange {
                    point: y,
                    degree: n,
                });
            }
            if seen[y] {
                return Err(Error::NotBijective { point: y });
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles on `degree` points.
    ///
    /// Cycles need not be disjoint in the input? They must be: repeated
    /// points are rejected.  Fixed points are simply omitted from cycles.
    pub fn from_cycles(cycles: &[Vec<usize>], degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::PointOutOfRange {
                        point: p,
                        degree,
                    });
                }
                if touched[p] {
                    return Err(Error::NotBijective { point: p });
                }
                touched[p] = true;
                let q = cycle[(i + 1) % cycle.len()];
                images[p] = q;
            }
        }
        Ok(Permutation { images })
    }

    /// Parse cycle notation like `(0 1 2)(3 4)` on exactly `degree` points.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        Self::from_cycles(&cycles, degree)
    }

    /// Number of points acted on.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// The image table.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self * other`: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: other.degree(),
            });
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }

    /// Inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    /// True for the identity.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut ord: u64 = 1;
        for cycle in self.raw_cycles(false) {
            ord = num_integer::lcm(ord, cycle.len() as u64);
        }
        ord
    }

    /// Cycle lengths, fixed points included, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.raw_cycles(true).iter().map(|c| c.len()).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Non-trivial cycles, each starting at its minimal point, sorted by
    /// that minimal point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.raw_cycles(false)
    }

    fn raw_cycles(&self, keep_fixed: bool) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            if cycle.len() > 1 || keep_fixed {
                out.push(cycle);
            }
        }
        out
    }

    /// Extend to a larger degree by fixing the new points.
    pub fn padded(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: degree,
            });
        }
        let mut images = self.images.clone();
        images.extend(self.degree()..degree);
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parse `(0 1 2)(3 4)` into a list of cycles.  Whitespace and commas both
/// separate points; `()` is the identity (no cycles).
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let s = s.trim();
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!(
                "expected '(' in cycle notation, found {rest:?}"
            )));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
        let inner = &rest[1..close];
        let points: Vec<usize> = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad point {t:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        if points.len() == 1 {
            return Err(Error::Parse(format!(
                "singleton cycle ({}) is not allowed; omit fixed points",
                points[0]
            )));
        }
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parse with degree inferred as `max point + 1` (identity gets degree 0).
    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        let degree = cycles
            .iter()
            .flat_map(|c| c.iter())
            .max()
            .map_or(0, |&m| m + 1);
        Permutation::from_cycles(&cycles, degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        let p = Permutation::parse("(0 1 2)(3 4)", 6).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(2), 0);
        assert_eq!(p.apply(3), 4);
        assert_eq!(p.apply(5), 5);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        let q: Permutation = "(0 1 2)(3 4)".parse().unwrap();
        assert_eq!(q.degree(), 5);
        assert_eq!(q.to_string(), p.to_string());
    }

    #[test]
    fn identity_prints_as_unit() {
        assert_eq!(Permutation::identity(4).to_string(), "()");
        let e = Permutation::parse("()", 3).unwrap();
        assert!(e.is_identity());
    }

    #[test]
    fn composition_is_left_to_right() {
        // a = (0 1), b = (1 2): apply a then b sends 0 -> 1 -> 2.
        let a = Permutation::parse("(0 1)", 3).unwrap();
        let b = Permutation::parse("(1 2)", 3).unwrap();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab.to_string(), "(0 2 1)");
        let ba = b.then(&a).unwrap();
        assert_eq!(ba.apply(0), 1);
        assert_eq!(ba.to_string(), "(0 1 2)");
    }

    #[test]
    fn inverse_and_order() {
        let p = Permutation::parse("(0 1 2 3 4 5 6 7)", 8).unwrap();
        assert_eq!(p.order(), 8);
        assert!(p.then(&p.inverse()).unwrap().is_identity());
        let q = Permutation::parse("(0 1 2)(3 4)", 5).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(q.cycle_type(), vec![3, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::parse("(0 1 9)", 5).is_err());
        assert!(Permutation::parse("(0 1)(1 2)", 5).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::parse("(0 1", 5).is_err());
    }

    #[test]
    fn cycle_type_counts_fixed_points() {
        let p = Permutation::parse("(1 3)(2 6)(5 7)", 8).unwrap();
        assert_eq!(p.cycle_type(), vec![2, 2, 2, 1, 1]);
        assert_eq!(p.order(), 2);
    }
}
