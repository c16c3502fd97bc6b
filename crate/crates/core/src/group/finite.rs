//! Finite groups with dense integer element ids.
//!
//! Backends: symmetric and alternating groups (permutations ranked in
//! lexicographic order), `SL(2, p)` (matrices in lexicographic entry order),
//! and explicit multiplication tables.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::word::Word;

pub type ElementId = u32;

/// Groups up to this order get a precomputed multiplication table.
const TABLE_THRESHOLD: usize = 2600;

#[derive(Clone, Debug)]
enum Backend {
    Permutation {
        degree: usize,
        elements: Vec<Vec<u8>>,
        /// lexicographic rank in `S_degree` -> id
        rank_to_id: Vec<u32>,
    },
    Sl2 {
        p: u32,
        elements: Vec<[u32; 4]>,
        /// packed entries -> id
        index: Vec<u32>,
    },
    Table,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    spec: String,
    order: usize,
    backend: Backend,
    identity: ElementId,
    inverses: Vec<ElementId>,
    table: Option<Vec<ElementId>>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation of `0..n`.
fn perm_rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    // Lexicographic order via next_permutation.
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FiniteGroup {
    /// `S<n>`, `A<n>` (n <= 8), `SL2_<p>` (p prime <= 13), or `table:<path>`.
    pub fn load(spec: &str) -> Result<FiniteGroup> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("table:") {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let rows = parse_table(&text)?;
            return FiniteGroup::from_table(spec, rows);
        }
        if let Some(p) = spec.strip_prefix("SL2_") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Group(format!("bad prime in '{spec}'")))?;
            return FiniteGroup::sl2(p);
        }
        let bad = || Error::Group(format!("unknown group '{spec}' (expected S<n>, A<n>, SL2_<p> or table:<path>)"));
        let (kind, n) = spec.split_at(1.min(spec.len()));
        let n: usize = n.parse().map_err(|_| bad())?;
        match kind {
            "S" => FiniteGroup::symmetric(n),
            "A" => FiniteGroup::alternating(n),
            _ => Err(bad()),
        }
    }

    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        Self::permutation_group(format!("S{n}"), n, false)
    }

    pub fn alternating(n: usize) -> Result<FiniteGroup> {
        Self::permutation_group(format!("A{n}"), n, true)
    }

    fn permutation_group(spec: String, n: usize, even_only: bool) -> Result<FiniteGroup> {
        if !(1..=8).contains(&n) {
            return Err(Error::Group(format!("{spec}: degree must be between 1 and 8")));
        }
        let mut rank_to_id = vec![u32::MAX; factorial(n)];
        let elements: Vec<Vec<u8>> = all_perms(n)
            .into_iter()
            .filter(|p| !even_only || is_even(p))
            .collect();
        for (id, p) in elements.iter().enumerate() {
            rank_to_id[perm_rank(p)] = id as u32;
        }
        let inverses = elements
            .iter()
            .map(|p| {
                let mut inv = vec![0u8; n];
                for (i, &v) in p.iter().enumerate() {
                    inv[v as usize] = i as u8;
                }
                rank_to_id[perm_rank(&inv)]
            })
            .collect();
        let order = elements.len();
        FiniteGroup {
            spec,
            order,
            backend: Backend::Permutation {
                degree: n,
                elements,
                rank_to_id,
            },
            identity: 0,
            inverses,
            table: None,
        }
        .with_table()
    }

    pub fn sl2(p: u32) -> Result<FiniteGroup> {
        if !is_prime(p) || p > 13 {
            return Err(Error::Group(format!("SL2_{p}: p must be a prime <= 13")));
        }
        let pack = |m: [u32; 4]| (((m[0] * p + m[1]) * p + m[2]) * p + m[3]) as usize;
        let mut elements = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - (b * c) % p) % p == 1 {
                            elements.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        let mut index = vec![u32::MAX; (p as usize).pow(4)];
        for (id, m) in elements.iter().enumerate() {
            index[pack(*m)] = id as u32;
        }
        let inverses = elements
            .iter()
            .map(|m| index[pack([m[3], (p - m[1]) % p, (p - m[2]) % p, m[0]])])
            .collect();
        let identity = index[pack([1, 0, 0, 1])];
        FiniteGroup {
            spec: format!("SL2_{p}"),
            order: elements.len(),
            backend: Backend::Sl2 { p, elements, index },
            identity,
            inverses,
            table: None,
        }
        .with_table()
    }

    /// Group from a Cayley table: `rows[i][j]` is the id of `i * j`.
    pub fn from_table(spec: &str, rows: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Group("empty multiplication table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Group("multiplication table is not square".into()));
        }
        if rows.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Group("table entry out of range".into()));
        }
        let flat: Vec<ElementId> = rows.iter().flatten().map(|&v| v as ElementId).collect();
        let at = |i: usize, j: usize| flat[i * n + j] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::Group("table has no identity".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or_else(|| Error::Group(format!("element {g} has no inverse")))?;
            inverses.push(inv as ElementId);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Group(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            spec: spec.to_string(),
            order: n,
            backend: Backend::Table,
            identity: identity as ElementId,
            inverses,
            table: Some(flat),
        })
    }

    fn with_table(mut self) -> Result<FiniteGroup> {
        if self.order <= TABLE_THRESHOLD {
            let n = self.order;
            let mut flat = Vec::with_capacity(n * n);
            for a in 0..n as ElementId {
                for b in 0..n as ElementId {
                    flat.push(self.compute_mul(a, b));
                }
            }
            self.table = Some(flat);
        }
        Ok(self)
    }

    fn compute_mul(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.backend {
            Backend::Permutation {
                elements,
                rank_to_id,
                degree,
            } => {
                // (a b)(i) = a(b(i)): the right factor acts first.
                let (pa, pb) = (&elements[a as usize], &elements[b as usize]);
                let prod: Vec<u8> = (0..*degree).map(|i| pa[pb[i] as usize]).collect();
                rank_to_id[perm_rank(&prod)]
            }
            Backend::Sl2 { p, elements, index } => {
                let (x, y) = (elements[a as usize], elements[b as usize]);
                let p = *p;
                let m = [
                    (x[0] * y[0] + x[1] * y[2]) % p,
                    (x[0] * y[1] + x[1] * y[3]) % p,
                    (x[2] * y[0] + x[3] * y[2]) % p,
                    (x[2] * y[1] + x[3] * y[3]) % p,
                ];
                index[(((m[0] * p + m[1]) * p + m[2]) * p + m[3]) as usize]
            }
            Backend::Table => unreachable!("table groups always carry their table"),
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElementId {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        0..self.order as ElementId
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.compute_mul(a, b),
        }
    }

    #[inline]
    pub fn inverse(&self, a: ElementId) -> ElementId {
        self.inverses[a as usize]
    }

    pub fn conjugate(&self, a: ElementId, by: ElementId) -> ElementId {
        self.mul(self.mul(by, a), self.inverse(by))
    }

    pub fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b)))
    }

    pub fn pow(&self, a: ElementId, n: i64) -> ElementId {
        let base = if n < 0 { self.inverse(a) } else { a };
        (0..n.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    /// Evaluate a word; `assignment(g)` is the image of generator `g`.
    pub fn eval<F>(&self, w: &Word, mut assignment: F) -> Result<ElementId>
    where
        F: FnMut(u32) -> Option<ElementId>,
    {
        let mut acc = self.identity;
        for l in w.letters() {
            let e = assignment(l.generator())
                .ok_or_else(|| Error::MissingBinding(format!("x{}", l.generator())))?;
            if e as usize >= self.order {
                return Err(Error::InvalidArgument(format!("element id {e} out of range")));
            }
            acc = self.mul(acc, if l.is_inverse() { self.inverse(e) } else { e });
        }
        Ok(acc)
    }

    /// Human-readable element: permutation value string, matrix, or table index.
    pub fn describe(&self, id: ElementId) -> String {
        match &self.backend {
            Backend::Permutation { elements, .. } => elements[id as usize]
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            Backend::Sl2 { elements, .. } => {
                let m = elements[id as usize];
                format!("[{} {}; {} {}]", m[0], m[1], m[2], m[3])
            }
            Backend::Table => id.to_string(),
        }
    }

    /// Inverse of [`describe`](Self::describe).
    pub fn element_by_description(&self, text: &str) -> Result<ElementId> {
        let nums: Vec<u32> = text
            .split(|c: char| c.is_whitespace() || c == ';' || c == '[' || c == ']' || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("bad element '{text}'")))?;
        let not_found = || Error::InvalidArgument(format!("'{text}' is not an element of {}", self.spec));
        match &self.backend {
            Backend::Permutation { degree, rank_to_id, .. } => {
                if nums.len() != *degree {
                    return Err(not_found());
                }
                let p: Vec<u8> = nums.iter().map(|&v| v as u8).collect();
                let mut sorted = p.clone();
                sorted.sort();
                if sorted != (0..*degree as u8).collect::<Vec<_>>() {
                    return Err(not_found());
                }
                let id = rank_to_id[perm_rank(&p)];
                if id == u32::MAX {
                    return Err(not_found());
                }
                Ok(id)
            }
            Backend::Sl2 { p, elements, .. } => {
                if nums.len() != 4 {
                    return Err(not_found());
                }
                let m = [nums[0] % p, nums[1] % p, nums[2] % p, nums[3] % p];
                elements
                    .iter()
                    .position(|e| *e == m)
                    .map(|i| i as ElementId)
                    .ok_or_else(not_found)
            }
            Backend::Table => match nums.as_slice() {
                [i] if (*i as usize) < self.order => Ok(*i),
                _ => Err(not_found()),
            },
        }
    }

    /// Permutation images of an element, for permutation backends.
    pub fn permutation(&self, id: ElementId) -> Option<&[u8]> {
        match &self.backend {
            Backend::Permutation { elements, .. } => Some(&elements[id as usize]),
            _ => None,
        }
    }

    /// Full multiplication table, row-major.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order as ElementId)
            .map(|a| {
                (0..self.order as ElementId)
                    .map(|b| self.mul(a, b) as usize)
                    .collect()
            })
            .collect()
    }
}

/// Parse the multiplication-table file format: `order N` followed by `N`
/// rows of `N` whitespace-separated 0-based indices.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Group("empty table file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("order")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::Group(format!("bad table header '{header}'")))?;
    let rows: Vec<Vec<usize>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Group(format!("bad table entry '{t}'"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != n {
        return Err(Error::Group(format!("table declares order {n} but has {} rows", rows.len())));
    }
    Ok(rows)
}

pub fn format_table(rows: &[Vec<usize>]) -> String {
    let mut out = format!("order {}\n", rows.len());
    for r in rows {
        out.push_str(&r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}

pub fn write_table(path: &Path, rows: &[Vec<usize>]) -> Result<()> {
    fs::write(path, format_table(rows)).map_err(|e| Error::io(path, e))
}

/// Cayley table of the dihedral group of order `2n`: element `r^i` is `i`,
/// `s r^i` is `n + i`.
pub fn dihedral_table(n: usize) -> Vec<Vec<usize>> {
    let decode = |e: usize| (e >= n, e % n);
    let encode = |(s, r): (bool, usize)| if s { n + r } else { r };
    (0..2 * n)
        .map(|a| {
            (0..2 * n)
                .map(|b| {
                    let (sa, ra) = decode(a);
                    let (sb, rb) = decode(b);
                    // r^i s = s r^-i
                    let r = if sb { (n + rb - ra) % n } else { (ra + rb) % n };
                    encode((sa != sb, r))
                })
                .collect()
        })
        .collect()
}

/// Cayley table of the cyclic group of order `n`.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::load("S5").unwrap().order(), 120);
        assert_eq!(FiniteGroup::load("A5").unwrap().order(), 60);
        assert_eq!(FiniteGroup::load("A4").unwrap().order(), 12);
        assert_eq!(FiniteGroup::load("SL2_5").unwrap().order(), 120);
        assert_eq!(FiniteGroup::load("SL2_3").unwrap().order(), 24);
        assert_eq!(FiniteGroup::load("SL2_13").unwrap().order(), 2184);
        assert_eq!(FiniteGroup::load("S1").unwrap().order(), 1);
    }

    #[test]
    fn bad_specs() {
        for s in ["S9", "Q8", "SL2_4", "SL2_17", "A0", "", "table:/nonexistent/file"] {
            assert!(FiniteGroup::load(s).is_err(), "{s}");
        }
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_table("table:trivial", vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn rejects_non_associative_table() {
        // a quasigroup that is not a group: x*y = (2 - x - y) mod 3 style
        let rows = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(FiniteGroup::from_table("t", rows).is_err());
        let rows = vec![vec![0, 1], vec![1]];
        assert!(FiniteGroup::from_table("t", rows).is_err());
    }

    #[test]
    fn permutation_composition_right_first() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let a = g.element_by_description("1 0 2").unwrap(); // (0 1)
        let b = g.element_by_description("0 2 1").unwrap(); // (1 2)
        let ab = g.mul(a, b);
        // (a b)(1) = a(b(1)) = a(2) = 2
        assert_eq!(g.permutation(ab).unwrap(), &[1, 2, 0]);
    }

    #[test]
    fn large_groups_multiply_on_the_fly() {
        let g = FiniteGroup::load("S7").unwrap();
        assert_eq!(g.order(), 5040);
        let a = 1234;
        assert_eq!(g.mul(a, g.inverse(a)), g.identity());
    }

    #[test]
    fn dihedral_is_a_group() {
        for n in 1..7 {
            let g = FiniteGroup::from_table("dihedral", dihedral_table(n)).unwrap();
            assert_eq!(g.order(), 2 * n);
        }
    }

    #[test]
    fn table_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d4.txt");
        write_table(&path, &dihedral_table(4)).unwrap();
        let g = FiniteGroup::load(&format!("table:{}", path.display())).unwrap();
        assert_eq!(g.cayley_table(), dihedral_table(4));
        assert!(parse_table("order 2\n0 1\n").is_err());
    }

    #[test]
    fn sl2_describe_round_trip() {
        let g = FiniteGroup::sl2(5).unwrap();
        for id in g.elements() {
            assert_eq!(g.element_by_description(&g.describe(id)).unwrap(), id);
        }
        assert_eq!(g.describe(g.identity()), "[1 0; 0 1]");
    }
}
