//! Non-negative intervals with exact rational endpoints; the upper end may be
//! infinite.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_upper(hi: &Option<Rational>) -> String {
    hi.as_ref().map_or_else(|| "inf".to_string(), fmt_rational)
}

/// `"3"`, `"-2"` or `"1/2"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("'{s}' is not a rational number"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Option<Rational>,
}

impl Default for Interval {
    fn default() -> Self {
        Interval::unbounded()
    }
}

impl Interval {
    /// `[0, inf)`.
    pub fn unbounded() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: None,
        }
    }

    pub fn new(lo: Rational, hi: Option<Rational>) -> Result<Self> {
        if lo.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "lower bound {} is negative",
                fmt_rational(&lo)
            )));
        }
        if let Some(h) = &hi {
            if *h < lo {
                return Err(Error::InvalidArgument(format!(
                    "empty interval [{}, {}]",
                    fmt_rational(&lo),
                    fmt_rational(h)
                )));
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn exact(v: Rational) -> Result<Self> {
        Interval::new(v.clone(), Some(v))
    }

    pub fn at_least(lo: Rational) -> Result<Self> {
        Interval::new(lo, None)
    }

    pub fn at_most(hi: Rational) -> Result<Self> {
        Interval::new(Rational::zero(), Some(hi))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.hi.as_ref() == Some(&self.lo)
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo.is_zero() && self.hi.is_none()
    }

    /// `other` lies inside `self`.
    pub fn contains(&self, other: &Interval) -> bool {
        other.lo >= self.lo
            && match (&self.hi, &other.hi) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => b <= a,
            }
    }

    pub fn contains_value(&self, v: &Rational) -> bool {
        *v >= self.lo && self.hi.as_ref().is_none_or(|h| v <= h)
    }

    /// `None` when the intersection is empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = match (&self.hi, &other.hi) {
            (None, h) | (h, None) => h.clone(),
            (Some(a), Some(b)) => Some(a.clone().min(b.clone())),
        };
        Interval::new(lo, hi).ok()
    }

    /// Round inward to integers, for quantities that are counts.
    pub fn integral(&self) -> Option<Interval> {
        let lo = self.lo.ceil();
        let hi = self.hi.as_ref().map(|h| h.floor());
        Interval::new(lo, hi).ok()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(h) => write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(h)),
            None => write!(f, "[{}, inf)", fmt_rational(&self.lo)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("1/2").unwrap(), half());
        assert_eq!(parse_rational(" 4 / 6 ").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(6, 3)), "2");
        assert_eq!(fmt_rational(&rat(3, 6)), "1/2");
    }

    #[test]
    fn intersection_and_containment() {
        let a = Interval::new(half(), Some(int(1))).unwrap();
        let b = Interval::new(rat(2, 3), None).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.to_string(), "[2/3, 1]");
        assert!(a.contains(&c) && b.contains(&c) && !c.contains(&a));
        assert!(Interval::at_most(rat(1, 3)).unwrap().intersect(&b).is_none());
        assert!(Interval::new(int(-1), None).is_err());
        assert!(Interval::unbounded().contains(&b));
    }

    #[test]
    fn integral_rounding() {
        let i = Interval::new(rat(1, 2), Some(rat(7, 3))).unwrap();
        assert_eq!(i.integral().unwrap().to_string(), "[1, 2]");
        assert!(Interval::new(rat(1, 3), Some(rat(2, 3))).unwrap().integral().is_none());
    }
}
