use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Ring;
use crate::error::{Error, Result};

/// The prime field `F_p = Z/pZ`, elements stored as residues `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return None;
        }
        // Fermat
        Some(self.pow(&a, (self.p - 2) as u32))
    }

    /// Image of a rational number, `None` when `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.from_bigint(q.denom());
        let inv = self.inv(den)?;
        Some(self.mul(&self.from_bigint(q.numer()), &inv))
    }
}

/// Trial division; the moduli used here are tiny.
pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn describe(&self) -> String {
        format!("F_{}", self.p)
    }

    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad F_{} element {s:?}", self.p)))?;
        Ok(self.reduce_i64(v))
    }
}

/// The ring of integers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn describe(&self) -> String {
        "Z".into()
    }

    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn describe(&self) -> String {
        "Q".into()
    }

    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Largest prime factor of `|n|` (1 for units).
pub(crate) fn largest_prime_factor(n: &BigInt) -> u64 {
    let mut n = n.abs().to_u64().expect("denominators stay small");
    let mut largest = 1;
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            largest = d;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        largest = largest.max(n);
    }
    largest
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_is_checked() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(0), Err(Error::NotPrime(0)));
    }

    #[test]
    fn small_field_arithmetic() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.add(&1, &1), 0);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.mul(&3, &4), 2);
        assert_eq!(f5.from_i64(-1), 4);
        assert_eq!(f5.from_i64(7), 2);
        assert_eq!(f5.inv(2), Some(3));
        assert_eq!(f5.inv(0), None);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f5.from_rational(&half), Some(3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert_eq!(f5.from_rational(&fifth), None);
    }

    #[test]
    fn rational_round_trip_text() {
        let q = Rationals;
        let v = q.parse_elem("-3/6").unwrap();
        assert_eq!(q.fmt_elem(&v), "-1/2");
        assert!(q.parse_elem("1/0").is_err());
    }

    #[test]
    fn prime_factor_helper() {
        assert_eq!(largest_prime_factor(&BigInt::from(1)), 1);
        assert_eq!(largest_prime_factor(&BigInt::from(12)), 3);
        assert_eq!(largest_prime_factor(&BigInt::from(-35)), 7);
    }
}
