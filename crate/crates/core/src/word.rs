//! Words in a free group of arbitrary finite rank.
//!
//! Generators are identified by a 1-based index. A [`Word`] is always kept
//! freely reduced, so equality of words is equality of group elements.
//! Conjugation follows the convention `a^b = b a b^-1`, so that
//! `(a^b)^c = a^(cb)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Letter {
        assert!(generator >= 1, "generator indices are 1-based");
        let g = i32::try_from(generator).expect("generator index out of range");
        Letter(if inverse { -g } else { g })
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn raw(self) -> i32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduce a raw letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(&top) if top == l.inverse() => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// The single-letter word for generator `g`.
    pub fn generator(g: u32) -> Word {
        Word {
            letters: vec![Letter::new(g, false)],
        }
    }

    /// Build from signed generator indices, e.g. `[1, 2, -1, -2]` for `[x1,x2]`.
    pub fn from_signed(indices: &[i32]) -> Word {
        reduce(indices.iter().map(|&i| {
            assert!(i != 0, "zero is not a generator");
            Letter::new(i.unsigned_abs(), i < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// `self^by = by · self · by^-1`.
    pub fn conjugate(&self, by: &Word) -> Word {
        product([by, self, &by.inverse()])
    }

    /// `[self, other] = self · other · self^-1 · other^-1`.
    pub fn commutator(&self, other: &Word) -> Word {
        product([self, other, &self.inverse(), &other.inverse()])
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn generators(&self) -> BTreeSet<u32> {
        self.letters.iter().map(|l| l.generator()).collect()
    }

    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn contains_generator(&self, g: u32) -> bool {
        self.letters.iter().any(|l| l.generator() == g)
    }

    pub fn substitute(&self, sigma: &Substitution) -> Result<Word> {
        let mut raw = Vec::new();
        for l in &self.letters {
            let image = sigma
                .get(l.generator())
                .ok_or_else(|| Error::MissingBinding(format!("x{}", l.generator())))?;
            if l.is_inverse() {
                raw.extend(image.inverse().letters);
            } else {
                raw.extend(image.letters.iter().copied());
            }
        }
        Ok(reduce(raw))
    }

    pub fn abelianize(&self) -> AbelianImage {
        let mut sums = BTreeMap::new();
        for l in &self.letters {
            *sums.entry(l.generator()).or_insert(0) += l.sign();
        }
        sums.retain(|_, v| *v != 0);
        AbelianImage { sums }
    }

    pub fn is_in_commutator_subgroup(&self) -> bool {
        self.abelianize().is_zero()
    }

    /// Rename generators in order of first appearance (1, 2, ...) and flip
    /// signs so every generator first occurs positively. Both moves are
    /// automorphisms of the free group.
    pub fn canonical_form(&self) -> Word {
        let mut map: BTreeMap<u32, (u32, bool)> = BTreeMap::new();
        let mut next = 1;
        for l in &self.letters {
            map.entry(l.generator()).or_insert_with(|| {
                let v = (next, l.is_inverse());
                next += 1;
                v
            });
        }
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| {
                    let (g, flip) = map[&l.generator()];
                    Letter::new(g, l.is_inverse() != flip)
                })
                .collect(),
        }
    }

    /// Shift every generator index by `offset`.
    pub fn shift(&self, offset: u32) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(l.generator() + offset, l.is_inverse()))
                .collect(),
        }
    }

    /// Signed indices, the compact serialization used for hashing.
    pub fn signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.raw()).collect()
    }
}

/// Reduced product of several words.
pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
    reduce(
        words
            .into_iter()
            .flat_map(|w| w.letters.iter().copied())
            .collect::<Vec<_>>(),
    )
}

/// Reduction of `len` uniformly random letters over generators `1..=rank`.
pub fn random_word<R: rand::Rng + ?Sized>(rng: &mut R, rank: u32, len: usize) -> Word {
    reduce((0..len).map(|_| Letter::new(rng.gen_range(1..=rank), rng.gen_bool(0.5))).collect::<Vec<_>>())
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| format!("{l:?}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An assignment of generator index to word. Applying it is a homomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<u32, Word>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bind generators `1..=images.len()` in order.
    pub fn from_images(images: Vec<Word>) -> Self {
        Substitution {
            map: images
                .into_iter()
                .enumerate()
                .map(|(i, w)| (i as u32 + 1, w))
                .collect(),
        }
    }

    /// Bind `vars[i]` to `images[i]`.
    pub fn zip(vars: &[u32], images: &[Word]) -> Self {
        Substitution {
            map: vars.iter().copied().zip(images.iter().cloned()).collect(),
        }
    }

    pub fn bind(&mut self, generator: u32, image: Word) -> &mut Self {
        self.map.insert(generator, image);
        self
    }

    pub fn with(mut self, generator: u32, image: Word) -> Self {
        self.map.insert(generator, image);
        self
    }

    pub fn get(&self, generator: u32) -> Option<&Word> {
        self.map.get(&generator)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Word)> {
        self.map.iter().map(|(&g, w)| (g, w))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Images of `vars` in order; errors if one is unbound.
    pub fn images(&self, vars: &[u32]) -> Result<Vec<Word>> {
        vars.iter()
            .map(|&v| {
                self.get(v)
                    .cloned()
                    .ok_or_else(|| Error::MissingBinding(format!("x{v}")))
            })
            .collect()
    }

    /// The substitution `v -> self(v)` followed by `other`, i.e.
    /// `w.substitute(&a.then(&b)) == w.substitute(&a).substitute(&b)`.
    pub fn then(&self, other: &Substitution) -> Result<Substitution> {
        let mut map = BTreeMap::new();
        for (g, w) in &self.map {
            map.insert(*g, w.substitute(other)?);
        }
        Ok(Substitution { map })
    }
}

/// Exponent sums per generator. Zero entries are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbelianImage {
    sums: BTreeMap<u32, i64>,
}

impl AbelianImage {
    pub fn get(&self, generator: u32) -> i64 {
        self.sums.get(&generator).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.sums.iter().map(|(&g, &s)| (g, s))
    }

    pub fn add(&self, other: &AbelianImage) -> AbelianImage {
        let mut sums = self.sums.clone();
        for (g, s) in &other.sums {
            *sums.entry(*g).or_insert(0) += s;
        }
        sums.retain(|_, v| *v != 0);
        AbelianImage { sums }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Word {
        Word::generator(1)
    }
    fn y() -> Word {
        Word::generator(2)
    }
    fn z() -> Word {
        Word::generator(3)
    }

    #[test]
    fn cancellation() {
        assert!(x().mul(&x().inverse()).is_identity());
        let w = Word::from_signed(&[1, 2, -2, 1]);
        assert_eq!(w, x().pow(2));
        let c = Word::from_signed(&[1, 2, -1, -2]);
        assert_eq!(c.signed(), vec![1, 2, -1, -2]);
    }

    #[test]
    fn inverse_of_product() {
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(x().mul(&y()).inverse(), Word::from_signed(&[-2, -1]));
    }

    #[test]
    fn conjugation_convention() {
        assert_eq!(x().conjugate(&y()), Word::from_signed(&[2, 1, -2]));
        assert_eq!(x().conjugate(&Word::identity()), x());
        // (x^y)^z = x^(zy)
        assert_eq!(
            x().conjugate(&y()).conjugate(&z()),
            x().conjugate(&z().mul(&y()))
        );
    }

    #[test]
    fn commutator_basics() {
        assert_eq!(x().commutator(&y()), Word::from_signed(&[1, 2, -1, -2]));
        let w = Word::from_signed(&[1, 2, 2, -3]);
        assert!(w.commutator(&w).is_identity());
        assert!(w.commutator(&Word::identity()).is_identity());
    }

    #[test]
    fn powers() {
        assert_eq!(x().pow(3), Word::from_signed(&[1, 1, 1]));
        assert!(x().commutator(&y()).pow(0).is_identity());
        assert_eq!(x().commutator(&y()).pow(-1), y().commutator(&x()));
    }

    #[test]
    fn substitution() {
        let a = Word::generator(5);
        let b = Word::generator(6);
        let sigma = Substitution::new().with(1, a.clone()).with(2, b.clone());
        assert_eq!(x().commutator(&y()).substitute(&sigma).unwrap(), a.commutator(&b));
        let sigma = Substitution::new().with(1, a.commutator(&b));
        assert_eq!(x().substitute(&sigma).unwrap(), a.commutator(&b));
        let err = y().substitute(&sigma).unwrap_err();
        assert!(matches!(err, Error::MissingBinding(ref g) if g == "x2"));
    }

    #[test]
    fn abelianization() {
        assert!(x().commutator(&y()).pow(3).abelianize().is_zero());
        let a = Word::from_signed(&[1, 1, 2]).abelianize();
        assert_eq!(a.get(1), 2);
        assert_eq!(a.get(2), 1);
        let wg = (1..=3)
            .map(|i| Word::generator(2 * i - 1).commutator(&Word::generator(2 * i)))
            .fold(Word::identity(), |acc, c| acc.mul(&c));
        assert!(wg.is_in_commutator_subgroup());
    }

    #[test]
    fn canonical_form_relabels() {
        let w = Word::from_signed(&[-7, 3, 7, -3]);
        assert_eq!(w.canonical_form(), Word::from_signed(&[1, 2, -1, -2]));
    }
}
