//! Plain-text input formats: group files, matrix files, complex files.
//!
//! Group file: one permutation per line in disjoint-cycle notation on
//! 0-based points, optionally named (`r = (0 1 2 3)`); blank lines and
//! `#` comments are ignored.  Subgroups are declared in
//! `[subgroup NAME]` sections whose lines list generators by 0-based
//! index into the generator list or by name.
//!
//! Matrix file: a `rows cols` header line, then the entries row-major,
//! whitespace-separated; entries are integers or rationals `a/b`.
//!
//! Complex file: `[dim q]` blocks with one simplex per line as a
//! vertex-ordinal tuple, then an `[action]` block with one vertex
//! permutation per group generator.

use crate::error::Error;
use crate::gcomplex::GComplex;
use crate::group::{FiniteGroup, Subgroup};
use crate::perm::{parse_cycles, Permutation};
use crate::{Int, IntegerMatrix, Matrix, Rat, RationalMatrix, Result};
use num_traits::Zero;
use std::path::Path;
use std::str::FromStr;

/// Strip a `#` comment and surrounding whitespace.
fn clean(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

/// A parsed group file: generators (possibly named) and named subgroup
/// generator lists.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub names: Vec<Option<String>>,
    /// Subgroup name → indices into `generators`.
    pub subgroups: Vec<(String, Vec<usize>)>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<GroupFile> {
        // First pass: collect the raw cycle lists so the degree can be
        // inferred from every point mentioned anywhere in the file.
        enum Item {
            Generator(Option<String>, Vec<Vec<usize>>),
            Section(String),
            SubgroupLine(Vec<String>),
        }
        let mut items = Vec::new();
        let mut in_section = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = clean(raw);
            if line.is_empty() {
                continue;
            }
            let describe = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| describe(format!("unclosed section header {line:?}")))?
                    .trim();
                let name = inner
                    .strip_prefix("subgroup")
                    .ok_or_else(|| describe(format!("unknown section {inner:?}")))?
                    .trim();
                if name.is_empty() {
                    return Err(describe("subgroup section needs a name".into()));
                }
                items.push(Item::Section(name.to_string()));
                in_section = true;
            } else if in_section {
                let tokens: Vec<String> =
                    line.split_whitespace().map(|t| t.to_string()).collect();
                items.push(Item::SubgroupLine(tokens));
            } else {
                let (name, perm_text) = match line.split_once('=') {
                    Some((lhs, rhs)) => {
                        let name = lhs.trim();
                        if name.is_empty()
                            || !name
                                .chars()
                                .all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            return Err(describe(format!("bad generator name {name:?}")));
                        }
                        (Some(name.to_string()), rhs.trim())
                    }
                    None => (None, line),
                };
                let cycles = parse_cycles(perm_text)
                    .map_err(|e| describe(format!("bad permutation: {e}")))?;
                items.push(Item::Generator(name, cycles));
            }
        }

        let degree = items
            .iter()
            .filter_map(|item| match item {
                Item::Generator(_, cycles) => {
                    cycles.iter().flatten().max().map(|&m| m + 1)
                }
                _ => None,
            })
            .max()
            .unwrap_or(0);

        let mut generators = Vec::new();
        let mut names: Vec<Option<String>> = Vec::new();
        let mut subgroups: Vec<(String, Vec<usize>)> = Vec::new();
        for item in items {
            match item {
                Item::Generator(name, cycles) => {
                    let perm = Permutation::from_cycles(&cycles, degree)?;
                    if let Some(n) = &name {
                        if names.iter().flatten().any(|existing| existing == n) {
                            return Err(Error::Parse(format!(
                                "duplicate generator name {n:?}"
                            )));
                        }
                    }
                    generators.push(perm);
                    names.push(name);
                }
                Item::Section(name) => {
                    if subgroups.iter().any(|(n, _)| *n == name) {
                        return Err(Error::Parse(format!(
                            "duplicate subgroup name {name:?}"
                        )));
                    }
                    subgroups.push((name, Vec::new()));
                }
                Item::SubgroupLine(tokens) => {
                    let current = subgroups
                        .last_mut()
                        .expect("subgroup lines only occur after a section header");
                    for token in tokens {
                        let index = if let Ok(i) = token.parse::<usize>() {
                            if i >= generators.len() {
                                return Err(Error::Parse(format!(
                                    "generator index {i} out of range (have {})",
                                    generators.len()
                                )));
                            }
                            i
                        } else {
                            names
                                .iter()
                                .position(|n| n.as_deref() == Some(token.as_str()))
                                .ok_or_else(|| {
                                    Error::Parse(format!("unknown generator {token:?}"))
                                })?
                        };
                        current.1.push(index);
                    }
                }
            }
        }
        if generators.is_empty() {
            return Err(Error::Parse("group file declares no generators".into()));
        }
        Ok(GroupFile {
            degree,
            generators,
            names,
            subgroups,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<GroupFile> {
        GroupFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Enumerate the group generated by all listed generators.
    pub fn build(&self) -> Result<FiniteGroup> {
        FiniteGroup::new(&self.generators)
    }

    pub fn subgroup_names(&self) -> Vec<&str> {
        self.subgroups.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Resolve a named subgroup inside an already-built group.
    pub fn subgroup<'g>(&self, group: &'g FiniteGroup, name: &str) -> Result<Subgroup<'g>> {
        let (_, indices) = self
            .subgroups
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "no subgroup {name:?} in the group file (have: {})",
                    self.subgroup_names().join(", ")
                ))
            })?;
        let perms: Vec<Permutation> = indices
            .iter()
            .map(|&i| self.generators[i].clone())
            .collect();
        group.subgroup_from_perms(&perms)
    }
}

fn parse_scalar_int(token: &str) -> Result<Int> {
    Int::from_str(token).map_err(|_| Error::Parse(format!("bad integer {token:?}")))
}

fn parse_scalar_rat(token: &str) -> Result<Rat> {
    match token.split_once('/') {
        Some((num, den)) => {
            let n = parse_scalar_int(num)?;
            let d = parse_scalar_int(den)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {token:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from(parse_scalar_int(token)?)),
    }
}

fn parse_matrix_with<T>(text: &str, scalar: impl Fn(&str) -> Result<T>) -> Result<Matrix<T>>
where
    T: Clone,
{
    let mut tokens = text
        .lines()
        .map(clean)
        .filter(|l| !l.is_empty())
        .flat_map(|l| l.split_whitespace());
    let rows: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("matrix file missing column count".into()))?
        .parse()
        .map_err(|_| Error::Parse("bad column count".into()))?;
    let mut data = Vec::with_capacity(rows * cols);
    for token in tokens.by_ref() {
        data.push(scalar(token)?);
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "matrix body has {} entries, header promises {}x{} = {}",
            data.len(),
            rows,
            cols,
            rows * cols
        )));
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

/// Parse `rows cols` followed by row-major integer entries.
pub fn parse_integer_matrix(text: &str) -> Result<IntegerMatrix> {
    parse_matrix_with(text, parse_scalar_int)
}

/// Parse `rows cols` followed by row-major entries, integers or `a/b`.
pub fn parse_rational_matrix(text: &str) -> Result<RationalMatrix> {
    parse_matrix_with(text, parse_scalar_rat)
}

pub fn read_integer_matrix(path: impl AsRef<Path>) -> Result<IntegerMatrix> {
    parse_integer_matrix(&std::fs::read_to_string(path)?)
}

pub fn read_rational_matrix(path: impl AsRef<Path>) -> Result<RationalMatrix> {
    parse_rational_matrix(&std::fs::read_to_string(path)?)
}

/// A parsed complex file: simplices per dimension plus one vertex
/// permutation per group generator.
#[derive(Clone, Debug)]
pub struct ComplexFile {
    pub n_vertices: usize,
    pub simplices: Vec<Vec<Vec<u32>>>,
    pub action: Vec<Permutation>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<ComplexFile> {
        enum Block {
            None,
            Dim(usize),
            Action,
        }
        let mut block = Block::None;
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut action_lines: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = clean(raw);
            if line.is_empty() {
                continue;
            }
            let describe = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| describe(format!("unclosed section header {line:?}")))?
                    .trim();
                if inner == "action" {
                    block = Block::Action;
                } else if let Some(d) = inner.strip_prefix("dim") {
                    let q: usize = d
                        .trim()
                        .parse()
                        .map_err(|_| describe(format!("bad dimension in {line:?}")))?;
                    while simplices.len() <= q {
                        simplices.push(Vec::new());
                    }
                    block = Block::Dim(q);
                } else {
                    return Err(describe(format!("unknown section {inner:?}")));
                }
                continue;
            }
            match block {
                Block::None => {
                    return Err(describe(format!(
                        "expected a [dim q] or [action] header before {line:?}"
                    )))
                }
                Block::Dim(q) => {
                    let tuple: Vec<u32> = line
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<u32>()
                                .map_err(|_| describe(format!("bad vertex {t:?}")))
                        })
                        .collect::<Result<_>>()?;
                    if tuple.len() != q + 1 {
                        return Err(describe(format!(
                            "a {q}-simplex needs {} vertices, got {}",
                            q + 1,
                            tuple.len()
                        )));
                    }
                    simplices[q].push(tuple);
                }
                Block::Action => action_lines.push(line.to_string()),
            }
        }
        let n_vertices = simplices
            .iter()
            .flatten()
            .flatten()
            .max()
            .map(|&m| m as usize + 1)
            .unwrap_or(0);
        let action: Vec<Permutation> = action_lines
            .iter()
            .map(|l| Permutation::parse(l, n_vertices))
            .collect::<Result<_>>()?;
        Ok(ComplexFile {
            n_vertices,
            simplices,
            action,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ComplexFile> {
        ComplexFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Assemble the complex with the action of `group`, whose generator
    /// list must match the `[action]` block line for line.
    pub fn build<'g>(&self, group: &'g FiniteGroup) -> Result<GComplex<'g>> {
        if self.action.len() != group.generators().len() {
            return Err(Error::Parse(format!(
                "complex action block has {} permutations, the group has {} generators",
                self.action.len(),
                group.generators().len()
            )));
        }
        let images: Vec<Vec<u32>> = self
            .action
            .iter()
            .map(|p| (0..self.n_vertices).map(|v| p.apply(v) as u32).collect())
            .collect();
        GComplex::from_parts(group, self.n_vertices, self.simplices.clone(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    const SAMPLE_GROUP: &str = "\
# dihedral group of order 8
r = (0 1 2 3)
s = (1 3)
(0 2)(1 3)   # r^2, anonymous

[subgroup rot]
r
[subgroup klein]
2 s
";

    #[test]
    fn group_file_round_trip() {
        let gf = GroupFile::parse(SAMPLE_GROUP).unwrap();
        assert_eq!(gf.degree, 4);
        assert_eq!(gf.generators.len(), 3);
        assert_eq!(gf.names[0].as_deref(), Some("r"));
        assert_eq!(gf.names[2], None);
        assert_eq!(gf.subgroup_names(), vec!["rot", "klein"]);
        let g = gf.build().unwrap();
        assert_eq!(g.order(), 8);
        let rot = gf.subgroup(&g, "rot").unwrap();
        let klein = gf.subgroup(&g, "klein").unwrap();
        assert_eq!(rot.order(), 4);
        assert_eq!(klein.order(), 4);
        assert!(!rot.same_elements(&klein));
    }

    #[test]
    fn group_file_errors() {
        assert!(matches!(
            GroupFile::parse("r = (0 1 2"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(GroupFile::parse(""), Err(Error::Parse(_))));
        assert!(matches!(
            GroupFile::parse("(0 1)\n[subgroup a]\n7"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            GroupFile::parse("(0 1)\n[subgroup a]\nzz"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            GroupFile::parse("r = (0 1)\nr = (1 2)"),
            Err(Error::Parse(_))
        ));
        let z2 = FiniteGroup::new(&[Permutation::parse("(0 1)", 2).unwrap()]).unwrap();
        let unknown = GroupFile::parse("(0 1)\n[subgroup a]\n0")
            .unwrap()
            .subgroup(&z2, "b");
        assert!(matches!(unknown, Err(Error::Parse(_))));
    }

    #[test]
    fn matrix_files_parse_exactly() {
        let m = parse_integer_matrix("2 3\n1 -2 3\n4 5 -6\n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(1, 2)], Int::from(-6));
        // display and re-parse agree
        let again = parse_integer_matrix(&m.to_string()).unwrap();
        assert_eq!(again, m);

        let r = parse_rational_matrix("1 2\n1/2 -3/4\n").unwrap();
        assert_eq!(r[(0, 0)], Rat::new(Int::one(), Int::from(2)));
        assert_eq!(r[(0, 1)], Rat::new(Int::from(-3), Int::from(4)));

        assert!(matches!(
            parse_integer_matrix("2 2\n1 2 3\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_rational_matrix("1 1\n1/0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_integer_matrix(""), Err(Error::Parse(_))));
    }

    #[test]
    fn complex_file_builds_a_four_cycle() {
        let text = "\
# the 4-cycle with the antipodal Z2 action
[dim 0]
0
1
2
3
[dim 1]
0 1
1 2
2 3
0 3
[action]
(0 2)(1 3)
";
        let cf = ComplexFile::parse(text).unwrap();
        assert_eq!(cf.n_vertices, 4);
        assert_eq!(cf.simplices[1].len(), 4);
        let g = FiniteGroup::new(&[Permutation::parse("(0 1)", 2).unwrap()]).unwrap();
        let x = cf.build(&g).unwrap();
        assert_eq!(x.n_simplices(0), 4);
        assert_eq!(x.n_simplices(1), 4);
        let qc = x.quotient(&g.full_subgroup()).unwrap();
        assert_eq!(qc.n_cells(1), 2);
    }

    #[test]
    fn complex_file_errors() {
        assert!(matches!(
            ComplexFile::parse("0 1\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            ComplexFile::parse("[dim 1]\n0 1 2\n"),
            Err(Error::Parse(_))
        ));
        let missing_face = ComplexFile::parse("[dim 1]\n0 1\n[action]\n()\n").unwrap();
        let g = FiniteGroup::new(&[Permutation::identity(2)]).unwrap();
        assert!(missing_face.build(&g).is_err());
    }
}
