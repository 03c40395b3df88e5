//! Exact scalar fields: prime fields GF(p) with word-sized elements and the
//! rationals with arbitrary-precision numerators and denominators.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime modulus accepted; products of two reduced elements fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// An exact field. Elements are plain values; all arithmetic goes through the
/// field object so that the modulus never has to be stored per element.
pub trait Field: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Decimal string, `num/den` for non-integral rationals.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a - b * c`, the inner step of every elimination.
    fn mul_sub(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    fn choice(&self) -> FieldChoice {
        match self.characteristic() {
            0 => FieldChoice::Rationals,
            p => FieldChoice::Prime(p as u32),
        }
    }
}

/// GF(p) for a prime `p < 2^31`, elements reduced into `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {p} exceeds 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        base = acc as u32;
        base
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u32> {
        let v = i64::from_str(s.trim())
            .map_err(|_| Error::Parse(format!("bad GF({}) coefficient {s:?}", self.p)))?;
        Ok(self.reduce_i64(v))
    }
    #[inline]
    fn mul_sub(&self, a: &u32, b: &u32, c: &u32) -> u32 {
        let p = self.p as u64;
        let prod = (*b as u64 * *c as u64) % p;
        ((*a as u64 + p - prod) % p) as u32
    }
}

/// The rational numbers, normalized eagerly by `num-rational`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = || Error::Parse(format!("bad rational coefficient {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = BigInt::from_str(n).map_err(|_| bad())?;
                let d = BigInt::from_str(d).map_err(|_| bad())?;
                if d.is_zero() || d.is_negative() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
        }
    }
}

/// Runtime description of a field, used by configuration, serialization and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldChoice {
    Rationals,
    Prime(u32),
}

impl FieldChoice {
    pub fn from_characteristic(ch: u64) -> Result<Self> {
        if ch == 0 {
            Ok(FieldChoice::Rationals)
        } else {
            PrimeField::new(ch).map(|f| FieldChoice::Prime(f.modulus()))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldChoice::Rationals => 0,
            FieldChoice::Prime(p) => *p as u64,
        }
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rationals => write!(f, "QQ"),
            FieldChoice::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Runs `$body` with `$f` bound to a concrete field matching `$choice`.
#[macro_export]
macro_rules! with_field {
    ($choice:expr, $f:ident => $body:expr) => {
        match $choice {
            $crate::field::FieldChoice::Rationals => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldChoice::Prime(p) => {
                let $f = $crate::field::PrimeField::new(p as u64)?;
                $body
            }
        }
    };
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Characteristic guard for Lefschetz constructions with `pairs` hyperbolic
/// pairs: characteristic 0, or an odd prime `p > (pairs + 1) / 2`.
pub fn lefschetz_guard(ch: u64, pairs: usize) -> Result<()> {
    if ch == 2 {
        return Err(Error::Guard(
            "char k = 2: w^2 = 0, the Lefschetz bound does not extend to characteristic 2".into(),
        ));
    }
    if ch != 0 && 2 * ch <= pairs as u64 + 1 {
        return Err(Error::Guard(format!(
            "need char k = 0 or char k > (n+1)/2 with n = {pairs}, got {ch}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.neg(&3), 4);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul_sub(&1, &3, &5), 0);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(MAX_PRIME + 11).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn rational_round_trip() {
        let q = Rationals;
        let x = q.parse("-6/4").unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert_eq!(q.format(&q.from_i64(12)), "12");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("abc").is_err());
    }

    #[test]
    fn guard() {
        assert!(lefschetz_guard(2, 4).is_err());
        assert!(lefschetz_guard(0, 4).is_ok());
        assert!(lefschetz_guard(3, 4).is_ok());
        assert!(lefschetz_guard(3, 5).is_err());
        assert!(lefschetz_guard(5, 5).is_ok());
        assert!(lefschetz_guard(3, 1).is_ok());
    }
}
