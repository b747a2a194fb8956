//! Exact coefficient rings: prime fields, the integers and rationals,
//! sparse multivariate polynomials over any of them, and rational functions
//! in the symbolic variable `K` with factored denominators.
//!
//! Rings are explicit context values implementing [`Ring`]; elements are
//! plain data and all arithmetic goes through the ring. This lets the same
//! series code run over `F_p`, `F_p[r_k, r_{k+1}, ..]` or `Z`.

mod field;
mod poly;
mod ratfunc;

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub use field::{Integers, PrimeField, Rationals};
pub use poly::{Monomial, MultiPoly, PolyRing, VarId};
pub use ratfunc::{reduce_int_poly_mod_p, reduce_mod_p, LinearFactor, RatFunc};

/// A commutative ring with 1, given as a context object.
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Human-readable name of the ring, e.g. `F_5[r_*, s_*]`.
    fn describe(&self) -> String;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// An element bundled with its ring, for callers that need mixed-ring
/// operands to be rejected at run time rather than at compile time.
#[derive(Clone, Debug)]
pub struct RingElement<R: Ring> {
    ring: R,
    value: R::Elem,
}

impl<R: Ring> RingElement<R> {
    pub fn new(ring: R, value: R::Elem) -> Self {
        Self { ring, value }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn value(&self) -> &R::Elem {
        &self.value
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.ring.clone(), self.ring.add(&self.value, &other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.ring.clone(), self.ring.sub(&self.value, &other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.ring.clone(), self.ring.mul(&self.value, &other.value)))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.ring.clone(), self.ring.neg(&self.value))
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.value == other.value)
    }
}

impl<R: Ring> fmt::Display for RingElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.fmt_elem(&self.value))
    }
}
