//! Truncated Magnus expansion `x -> 1 + X`, `x^-1 -> 1 - X + X^2 - ...`.
//!
//! For a free group the degree of the first nonvanishing homogeneous part
//! of `M(w) - 1` is exactly the lower-central-series depth of `w`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Copy, Debug)]
pub struct MagnusLimits {
    pub max_degree: usize,
    pub max_generators: usize,
}

impl Default for MagnusLimits {
    fn default() -> Self {
        MagnusLimits {
            max_degree: 6,
            max_generators: 10,
        }
    }
}

/// Expansion of a word truncated at some degree, stored densely per degree
/// over the generators that occur in the word.
#[derive(Clone, Debug)]
pub struct MagnusSeries {
    degree: usize,
    generators: Vec<u32>,
    /// `parts[k]` has `r^k` entries indexed by base-`r` monomials.
    parts: Vec<Vec<BigInt>>,
}

impl MagnusSeries {
    pub fn expand(w: &Word, degree: usize, limits: MagnusLimits) -> Result<MagnusSeries> {
        if degree == 0 {
            return Err(Error::InvalidArgument("Magnus degree must be at least 1".into()));
        }
        let generators: Vec<u32> = w.generators().into_iter().collect();
        let r = generators.len();
        if degree > limits.max_degree {
            return Err(Error::Resource {
                what: "Magnus truncation degree".into(),
                required: degree as u128,
                limit: limits.max_degree as u128,
            });
        }
        if r > limits.max_generators {
            return Err(Error::Resource {
                what: "Magnus generator count".into(),
                required: r as u128,
                limit: limits.max_generators as u128,
            });
        }
        let mut parts: Vec<Vec<BigInt>> = (0..=degree)
            .map(|k| vec![BigInt::zero(); r.pow(k as u32)])
            .collect();
        parts[0][0] = BigInt::one();
        let mut s = MagnusSeries {
            degree,
            generators,
            parts,
        };
        for l in w.letters() {
            let i = s.slot(l.generator()).expect("generator collected above");
            s.mul_letter(i, l.is_inverse());
        }
        Ok(s)
    }

    fn slot(&self, g: u32) -> Option<usize> {
        self.generators.binary_search(&g).ok()
    }

    fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Right-multiply by the series of a single letter.
    fn mul_letter(&mut self, i: usize, inverse: bool) {
        let r = self.rank();
        let old = self.parts.clone();
        let max_j = if inverse { self.degree } else { 1 };
        for j in 1..=max_j {
            let negative = inverse && j % 2 == 1;
            // suffix index of i^j in base r, and r^j
            let mut suffix = 0usize;
            let mut scale = 1usize;
            for _ in 0..j {
                suffix = suffix * r + i;
                scale *= r;
            }
            for k in j..=self.degree {
                let (src, dst) = (&old[k - j], &mut self.parts[k]);
                for (m, c) in src.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let idx = m * scale + suffix;
                    if negative {
                        dst[idx] -= c;
                    } else {
                        dst[idx] += c;
                    }
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of the monomial `X_{m[0]} X_{m[1]} ...` (generator indices).
    pub fn coefficient(&self, monomial: &[u32]) -> BigInt {
        if monomial.len() > self.degree {
            return BigInt::zero();
        }
        let r = self.rank();
        let mut idx = 0;
        for g in monomial {
            match self.slot(*g) {
                Some(i) => idx = idx * r + i,
                None => return BigInt::zero(),
            }
        }
        self.parts[monomial.len()][idx].clone()
    }

    /// Nonzero terms of the homogeneous part of degree `k`, in monomial order.
    pub fn homogeneous_part(&self, k: usize) -> Vec<(Vec<u32>, BigInt)> {
        if k > self.degree {
            return Vec::new();
        }
        let r = self.rank();
        self.parts[k]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mut idx, c)| {
                let mut mono = vec![0; k];
                for slot in mono.iter_mut().rev() {
                    *slot = self.generators[idx % r];
                    idx /= r;
                }
                (mono, c.clone())
            })
            .collect()
    }

    pub fn part_is_zero(&self, k: usize) -> bool {
        self.parts.get(k).is_none_or(|p| p.iter().all(|c| c.is_zero()))
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.parts
            .iter()
            .flatten()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}

/// Lower-central-series depth as decided by a truncated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MagnusDepth {
    /// `w` lies in the n-th term but not the (n+1)-th.
    Exact(usize),
    /// Every part up to the truncation degree vanishes.
    AtLeast(usize),
}

impl MagnusDepth {
    /// True when the word is known to lie in the n-th lower central term.
    pub fn at_least(self, n: usize) -> bool {
        match self {
            MagnusDepth::Exact(d) | MagnusDepth::AtLeast(d) => d >= n,
        }
    }
}

pub fn magnus_depth(w: &Word, max_degree: usize) -> Result<MagnusDepth> {
    magnus_depth_with(w, max_degree, MagnusLimits::default())
}

pub fn magnus_depth_with(w: &Word, max_degree: usize, limits: MagnusLimits) -> Result<MagnusDepth> {
    if w.is_identity() {
        return Err(Error::InvalidArgument(
            "the identity lies in every lower central term".into(),
        ));
    }
    let s = MagnusSeries::expand(w, max_degree, limits)?;
    Ok((1..=max_degree)
        .find(|&k| !s.part_is_zero(k))
        .map(MagnusDepth::Exact)
        .unwrap_or(MagnusDepth::AtLeast(max_degree + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_has_depth_one() {
        assert_eq!(magnus_depth(&Word::generator(1), 3).unwrap(), MagnusDepth::Exact(1));
    }

    #[test]
    fn inverse_letter_series() {
        let s = MagnusSeries::expand(&Word::from_signed(&[-1]), 4, MagnusLimits::default()).unwrap();
        assert_eq!(s.coefficient(&[]), BigInt::from(1));
        assert_eq!(s.coefficient(&[1]), BigInt::from(-1));
        assert_eq!(s.coefficient(&[1, 1]), BigInt::from(1));
        assert_eq!(s.coefficient(&[1, 1, 1, 1]), BigInt::from(1));
    }

    #[test]
    fn commutator_degree_two_part() {
        let c = Word::from_signed(&[1, 2, -1, -2]);
        let s = MagnusSeries::expand(&c, 2, MagnusLimits::default()).unwrap();
        assert!(s.part_is_zero(1));
        let part = s.homogeneous_part(2);
        assert_eq!(
            part,
            vec![(vec![1, 2], BigInt::from(1)), (vec![2, 1], BigInt::from(-1))]
        );
    }

    #[test]
    fn empty_word_rejected() {
        assert!(magnus_depth(&Word::identity(), 3).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let w = Word::from_signed(&(1..=11).collect::<Vec<_>>());
        assert!(matches!(magnus_depth(&w, 2), Err(Error::Resource { .. })));
        assert!(matches!(
            magnus_depth(&Word::generator(1), 7),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn proper_power_is_not_deeper() {
        let c = Word::from_signed(&[1, 2, -1, -2]).pow(3);
        assert_eq!(magnus_depth(&c, 4).unwrap(), MagnusDepth::Exact(2));
    }
}
