//! Exact field arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every computation in this crate runs over a single field chosen up
//! front. The field is threaded through as a type parameter; `Fp` carries
//! its modulus at runtime, so constructing elements requires a context
//! value (`()` for the rationals, the prime for `Fp`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::hash::Hash;

/// An exactly-computable field. No floating point anywhere.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Hash {
    /// Runtime data needed to build elements (the prime for `Fp`).
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_i64(ctx: Self::Ctx, n: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    /// Parse "a" or "a/b" (exact rational literal). For prime fields the
    /// denominator is inverted mod p.
    fn parse(ctx: Self::Ctx, s: &str) -> Result<Self, FieldParseError>;
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FieldParseError {
    #[error("malformed scalar literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("denominator of {0:?} is not invertible in F_{1}")]
    NotInvertible(String, u32),
}

/// The field of rational numbers, exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational already prints lowest terms, integers without "/1".
        write!(f, "{}", self.0)
    }
}

impl Field for Rat {
    type Ctx = ();

    fn ctx(&self) -> () {}

    fn zero(_: ()) -> Self {
        Rat(BigRational::zero())
    }

    fn one(_: ()) -> Self {
        Rat(BigRational::one())
    }

    fn from_i64(_: (), n: i64) -> Self {
        Rat::int(n)
    }

    fn add(&self, rhs: &Self) -> Self {
        Rat(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rat(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rat(&self.0 * &rhs.0)
    }

    fn neg(&self) -> Self {
        Rat(-&self.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn parse(_: (), s: &str) -> Result<Self, FieldParseError> {
        let (n, d) = split_fraction(s)?;
        let num: BigInt = n
            .parse()
            .map_err(|_| FieldParseError::Malformed(s.to_string()))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| FieldParseError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(FieldParseError::ZeroDenominator(s.to_string()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

fn split_fraction(s: &str) -> Result<(&str, &str), FieldParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FieldParseError::Malformed(s.to_string()));
    }
    match s.split_once('/') {
        Some((n, d)) => Ok((n.trim(), d.trim())),
        None => Ok((s, "1")),
    }
}

/// A prime field F_p with runtime modulus, p < 2^16.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
    v: u32,
}

impl Fp {
    pub fn new(p: u32, v: i64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        let m = v.rem_euclid(p as i64) as u32;
        Fp { p, v: m }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn value(&self) -> u32 {
        self.v
    }

    fn pow(&self, mut e: u64) -> Fp {
        let mut base = self.v as u64;
        let p = self.p as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp {
            p: self.p,
            v: acc as u32,
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Field for Fp {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.p
    }

    fn zero(p: u32) -> Self {
        Fp::new(p, 0)
    }

    fn one(p: u32) -> Self {
        Fp::new(p, 1)
    }

    fn from_i64(p: u32, n: i64) -> Self {
        Fp::new(p, n)
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Fp {
            p: self.p,
            v: (self.v + rhs.v) % self.p,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Fp {
            p: self.p,
            v: (self.v + self.p - rhs.v) % self.p,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Fp {
            p: self.p,
            v: ((self.v as u64 * rhs.v as u64) % self.p as u64) as u32,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            p: self.p,
            v: (self.p - self.v) % self.p,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p as u64 - 2))
        }
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn parse(p: u32, s: &str) -> Result<Self, FieldParseError> {
        let (n, d) = split_fraction(s)?;
        let num: i64 = n
            .parse()
            .map_err(|_| FieldParseError::Malformed(s.to_string()))?;
        let den: i64 = d
            .parse()
            .map_err(|_| FieldParseError::Malformed(s.to_string()))?;
        if den == 0 {
            return Err(FieldParseError::ZeroDenominator(s.to_string()));
        }
        let den = Fp::new(p, den);
        let inv = den
            .inv()
            .ok_or_else(|| FieldParseError::NotInvertible(s.to_string(), p))?;
        Ok(Fp::new(p, num).mul(&inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = Rat::frac(1, 3);
        let b = Rat::frac(1, 6);
        assert_eq!(a.add(&b), Rat::frac(1, 2));
        assert_eq!(a.mul(&b), Rat::frac(1, 18));
        assert_eq!(a.inv().unwrap(), Rat::int(3));
        assert_eq!(format!("{}", Rat::frac(3, 2)), "3/2");
        assert_eq!(format!("{}", Rat::frac(4, 2)), "2");
    }

    #[test]
    fn prime_field_inverse() {
        let p = 5;
        for v in 1..5 {
            let x = Fp::new(p, v);
            assert_eq!(x.mul(&x.inv().unwrap()), Fp::one(p));
        }
        assert!(Fp::zero(p).inv().is_none());
    }

    #[test]
    #[should_panic]
    fn composite_modulus_rejected() {
        Fp::new(6, 1);
    }

    #[test]
    fn parse_fractions() {
        assert_eq!(Rat::parse((), "-3/4").unwrap(), Rat::frac(-3, 4));
        assert_eq!(Fp::parse(7, "1/2").unwrap(), Fp::new(7, 4));
        assert!(Rat::parse((), "1/0").is_err());
        assert!(Fp::parse(7, "x").is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(65521));
        assert!(!is_prime(1));
        assert!(!is_prime(65535));
    }
}
