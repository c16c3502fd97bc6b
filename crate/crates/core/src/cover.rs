//! The permutation representation `rho_n : F(x, y) -> S_{2n+1}` and the
//! combinatorial facts about the associated cover of the once-punctured torus.
//!
//! Permutations act on points on the left and compose right factor first,
//! so `rho(uv) = rho(u) . rho(v)` and `(p . q)(i) = p(q(i))`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::identity::{FactorKind, RewriteCertificate};
use crate::word::{Letter, Word};

/// Stored as its value string: position `i` holds the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Permutation> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            match seen.get_mut(v as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::InvalidArgument(format!("{images:?} is not a permutation"))),
            }
        }
        Ok(Permutation { images })
    }

    /// Parse a whitespace-separated value string such as `"2 1 0"`.
    pub fn from_value_string(s: &str) -> Result<Permutation> {
        let images = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad point '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn value_string(&self) -> String {
        self.images.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start as u32;
            while !seen[i as usize] {
                seen[i as usize] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub fn format_cycle_type(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

/// The images of `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rho {
    pub n: usize,
    pub x: Permutation,
    pub y: Permutation,
}

pub fn rho(n: usize) -> Result<Rho> {
    if n == 0 {
        return Err(Error::InvalidArgument("rho_n needs n >= 1".into()));
    }
    let d = 2 * n as u32 + 1;
    let x = Permutation {
        images: (0..d).rev().collect(),
    };
    let n32 = n as u32;
    let y = Permutation {
        images: (0..d)
            .map(|i| match i {
                i if i < n32 => i + 1,
                i if i == n32 => 0,
                i => i,
            })
            .collect(),
    };
    Ok(Rho { n, x, y })
}

impl Rho {
    pub fn degree(&self) -> usize {
        2 * self.n + 1
    }

    pub fn letter(&self, l: Letter) -> Result<Permutation> {
        let p = match l.generator() {
            1 => &self.x,
            2 => &self.y,
            g => return Err(Error::MissingBinding(format!("generator {g} (rho_n is defined on x and y only)"))),
        };
        Ok(if l.is_inverse() { p.inverse() } else { p.clone() })
    }

    /// Image of a letter sequence, reduced or not.
    pub fn eval_letters(&self, letters: &[Letter]) -> Result<Permutation> {
        letters
            .iter()
            .try_fold(Permutation::identity(self.degree()), |acc, &l| Ok(acc.compose(&self.letter(l)?)))
    }

    pub fn eval(&self, w: &Word) -> Result<Permutation> {
        self.eval_letters(w.letters())
    }
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub n: usize,
    pub x: Permutation,
    pub y: Permutation,
    pub commutator: Permutation,
    pub boundary_count: usize,
    pub euler_characteristic: i64,
    pub genus: i64,
    pub checks: Vec<(String, bool)>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "rho(x) = {}", self.x.value_string())?;
        writeln!(f, "rho(y) = {}", self.y.value_string())?;
        writeln!(f, "cycle type rho(x) = {}", format_cycle_type(&self.x.cycle_type()))?;
        writeln!(f, "cycle type rho(y) = {}", format_cycle_type(&self.y.cycle_type()))?;
        writeln!(f, "rho([x,y]) = {}", self.commutator)?;
        writeln!(f, "cycle type rho([x,y]) = {}", format_cycle_type(&self.commutator.cycle_type()))?;
        writeln!(f, "boundary components = {}", self.boundary_count)?;
        writeln!(f, "euler characteristic = {}", self.euler_characteristic)?;
        writeln!(f, "genus = {}", self.genus)?;
        for (name, ok) in &self.checks {
            writeln!(f, "{} {name}", if *ok { "PASS" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// Degree-`(2n+1)` cover of the once-punctured torus (`chi = -1`) induced
/// by `rho_n`; its boundary components are the cycles of `rho_n([x,y])`.
pub fn cover_invariants(n: usize) -> Result<CoverReport> {
    let r = rho(n)?;
    let d = r.degree();
    let commutator = r.eval(&Word::generator(1).commutator(&Word::generator(2)))?;
    let boundary_count = commutator.cycles().len();
    let euler_characteristic = -(d as i64);
    // chi = 2 - 2g - b
    let genus = (2 - boundary_count as i64 - euler_characteristic) / 2;
    let mut y_type = vec![n + 1];
    y_type.extend(std::iter::repeat_n(1, n));
    let checks = vec![
        (format!("rho([x,y]) is a single {d}-cycle"), commutator.cycle_type() == vec![d]),
        (format!("rho(y) has cycle type {}", format_cycle_type(&y_type)), r.y.cycle_type() == y_type),
        ("rho(x)^2 = id".to_string(), r.x.compose(&r.x).is_identity()),
        ("boundary components = 1".to_string(), boundary_count == 1),
        (format!("genus = n + 1 = {}", n + 1), genus == n as i64 + 1),
    ];
    Ok(CoverReport {
        n,
        x: r.x,
        y: r.y,
        commutator,
        boundary_count,
        euler_characteristic,
        genus,
        checks,
    })
}

/// True when the certificate verifies by reduction and consists of one
/// conjugated `[*, y^(n+1)]` factor and `n` conjugated `[*, y]` factors.
pub fn verify_shape_identity(n: usize, candidate: &RewriteCertificate) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("shape identity needs n >= 1".into()));
    }
    let x = Word::generator(1);
    let y = Word::generator(2);
    let target = x.commutator(&y).pow(2 * n as i64 + 1);
    if candidate.target != target {
        return Err(Error::Certificate(format!("target must be [x,y]^{}", 2 * n + 1)));
    }
    if !candidate.verify() {
        return Ok(false);
    }
    let big = y.pow(n as i64 + 1);
    let (mut big_count, mut small_count) = (0, 0);
    for f in &candidate.factors {
        match &f.kind {
            FactorKind::Commutator { b, .. } if *b == big => big_count += 1,
            FactorKind::Commutator { b, .. } if *b == y => small_count += 1,
            _ => return Ok(false),
        }
    }
    Ok(big_count == 1 && small_count == n)
}

/// Evaluate `samples` random unreduced words over `x^{±1}, y^{±1}` both
/// letter by letter and after free reduction; report whether all agree.
pub fn homomorphism_check(n: usize, samples: usize, seed: u64) -> Result<bool> {
    let r = rho(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let len = rng.gen_range(0..=40);
        let letters: Vec<Letter> = (0..len)
            .map(|_| Letter::new(rng.gen_range(1..=2), rng.gen_bool(0.5)))
            .collect();
        let reduced = crate::word::reduce(letters.iter().copied());
        if r.eval_letters(&letters)? != r.eval(&reduced)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{culler_cover_shape, Factor};

    #[test]
    fn value_strings_at_one() {
        let r = rho(1).unwrap();
        assert_eq!(r.x.value_string(), "2 1 0");
        assert_eq!(r.y.value_string(), "1 0 2");
        assert_eq!(r.x.to_string(), "(0 2)");
        assert_eq!(r.y.to_string(), "(0 1)");
        let r3 = rho(3).unwrap();
        assert_eq!(r3.y.value_string(), "1 2 3 0 4 5 6");
        assert_eq!(r3.x.value_string(), "6 5 4 3 2 1 0");
    }

    #[test]
    fn commutator_at_one() {
        // right factor first: y^-1, then x^-1, then y, then x
        let c = cover_invariants(1).unwrap();
        assert_eq!(c.commutator.to_string(), "(0 2 1)");
        assert_eq!(c.commutator.cycle_type(), vec![3]);
        assert_eq!((c.euler_characteristic, c.boundary_count, c.genus), (-3, 1, 2));
        assert!(c.passed());
    }

    #[test]
    fn composition_convention() {
        let p = Permutation::from_value_string("1 2 0").unwrap();
        let q = Permutation::from_value_string("0 2 1").unwrap();
        assert_eq!(p.compose(&q).images(), &[1, 0, 2]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(Permutation::from_value_string("0 0 1").is_err());
    }

    #[test]
    fn invariants_up_to_fifty() {
        for n in 1..=50 {
            assert!(cover_invariants(n).unwrap().passed(), "n = {n}");
        }
        assert!(rho(0).is_err());
    }

    #[test]
    fn homomorphism() {
        for n in 1..=5 {
            assert!(homomorphism_check(n, 200, n as u64).unwrap());
        }
    }

    #[test]
    fn culler_shape() {
        let cert = culler_cover_shape();
        assert!(verify_shape_identity(1, &cert).unwrap());
        let mut short = cert.clone();
        short.factors.pop();
        assert!(!verify_shape_identity(1, &short).unwrap());
        let mut wrong = cert.clone();
        wrong.factors.push(Factor::commutator(Word::generator(1), Word::generator(2)));
        wrong.factors.push(Factor::commutator(Word::generator(2), Word::generator(1)));
        assert!(!verify_shape_identity(1, &wrong).unwrap());
        assert!(verify_shape_identity(2, &cert).is_err());
    }
}
