//! Closed-form depth bounds for `g^p f^{-p}` and for iterated `p`-th powers.

use serde::{Deserialize, Serialize};

use crate::coeffring::PrimeField;
use crate::error::{Error, Result};

/// A validated parameter triple with `n >= k >= 1` and `p` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet {
    pub p: u64,
    pub k: u64,
    pub n: u64,
    /// Least nonnegative residue of `k` mod `p`.
    pub k0: u64,
}

impl ParamSet {
    pub fn new(p: u64, k: u64, n: u64) -> Result<Self> {
        PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::ParameterDomain("k must be positive".into()));
        }
        if n < k {
            return Err(Error::ParameterDomain(format!("n = {n} is below k = {k}")));
        }
        Ok(Self { p, k, n, k0: k % p })
    }

    /// The correction term `e(k, n)`.
    pub fn e(&self) -> u64 {
        let Self { p, k, n, k0 } = *self;
        if k % p == 0 {
            return if n == k {
                0
            } else if n % p == 0 {
                1
            } else {
                0
            };
        }
        // n = 2k - i (mod p), scanned from i = 0
        (0..=k0)
            .find(|&i| (n + i + 2 * p * k - 2 * k) % p == 0)
            .unwrap_or(k0)
    }

    /// Lower bound for `D(g^p f^{-p})`: `n + (p-1)k + e(k,n)`.
    pub fn theorem_bound(&self) -> u64 {
        self.n + (self.p - 1) * self.k + self.e()
    }

    /// Lower bound for `D(g^{p^m} f^{-p^m})`, computed in closed form and
    /// by the step recursion; the two must agree.
    pub fn corollary_bound(&self, m: u32) -> Result<u64> {
        if m == 0 {
            return Err(Error::ParameterDomain("m must be positive".into()));
        }
        let Self { p, k, n, k0 } = *self;
        let pm = p.pow(m);
        let closed = n + (pm - 1) * k + (pm - p) / (p - 1) * k0 + self.e();
        let mut d = self.theorem_bound();
        for i in 1..m {
            let pi = p.pow(i);
            d += (p - 1) * (pi * k + (pi - 1) / (p - 1) * k0) + k0;
        }
        if d != closed {
            return Err(Error::InternalInconsistency(format!(
                "closed form {closed} differs from recursion {d} at {self:?}, m = {m}"
            )));
        }
        Ok(closed)
    }

    /// Residue of the theorem bound mod `p`, predicted case by case and
    /// checked against the bound itself.
    pub fn bound_congruence_class(&self) -> Result<u64> {
        let Self { p, k, n, k0 } = *self;
        let e = self.e();
        let predicted = if k % p == 0 && n % p == 0 && n > k {
            1 % p
        } else if e == k0 {
            n % p
        } else {
            k % p
        };
        let actual = self.theorem_bound() % p;
        if predicted != actual {
            return Err(Error::InternalInconsistency(format!(
                "bound residue {actual} differs from predicted {predicted} at {self:?}"
            )));
        }
        Ok(predicted)
    }

    /// `n <= k + k0`: the bound collapses to the depth of `f^p`.
    pub fn is_low_n(&self) -> bool {
        self.n <= self.k + self.k0
    }
}

/// `D(f^p)` for generic `f` of depth `k`: `pk + k0`.
pub fn pth_power_depth(p: u64, k: u64) -> u64 {
    p * k + k % p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(p: u64, k: u64, n: u64) -> ParamSet {
        ParamSet::new(p, k, n).unwrap()
    }

    #[test]
    fn e_cases() {
        assert_eq!(ps(3, 3, 3).e(), 0);
        assert_eq!(ps(3, 3, 6).e(), 1);
        assert_eq!(ps(3, 3, 4).e(), 0);
        assert_eq!(ps(5, 7, 13).e(), 1);
        assert_eq!(ps(5, 7, 11).e(), 2);
    }

    #[test]
    fn theorem_bounds() {
        assert_eq!(ps(2, 1, 1).theorem_bound(), 3);
        assert_eq!(ps(3, 2, 2).theorem_bound(), 8);
        assert_eq!(ps(2, 1, 3).theorem_bound(), 5);
        assert_eq!(pth_power_depth(2, 1), 3);
        assert_eq!(pth_power_depth(3, 2), 8);
        assert_eq!(pth_power_depth(5, 5), 25);
    }

    #[test]
    fn corollary_bounds() {
        assert_eq!(ps(2, 1, 1).corollary_bound(1).unwrap(), 3);
        assert_eq!(ps(2, 1, 1).corollary_bound(2).unwrap(), 7);
        let q = ps(3, 1, 5);
        assert_eq!(q.corollary_bound(2).unwrap(), 5 + 8 + 3 + q.e());
        assert!(q.corollary_bound(0).is_err());
    }

    #[test]
    fn congruence_classes() {
        assert_eq!(ps(5, 7, 11).bound_congruence_class().unwrap(), 1);
        assert_eq!(ps(5, 7, 13).bound_congruence_class().unwrap(), 2);
        assert_eq!(ps(3, 3, 6).bound_congruence_class().unwrap(), 1);
    }

    #[test]
    fn invalid_parameters() {
        assert!(ParamSet::new(4, 1, 1).is_err());
        assert!(ParamSet::new(3, 0, 1).is_err());
        assert!(ParamSet::new(3, 4, 3).is_err());
    }

    fn grid() -> impl Iterator<Item = ParamSet> {
        [2u64, 3, 5, 7].into_iter().flat_map(|p| {
            (1..=20).flat_map(move |k| (k..=60).map(move |n| ps(p, k, n)))
        })
    }

    #[test]
    fn grid_properties() {
        for q in grid() {
            let e = q.e();
            assert!(e <= q.k0.max(1), "{q:?}");
            q.bound_congruence_class().unwrap();
            assert_eq!(q.corollary_bound(1).unwrap(), q.theorem_bound());
            for m in 2..=4 {
                q.corollary_bound(m).unwrap();
            }
            if q.is_low_n() {
                assert_eq!(q.theorem_bound(), pth_power_depth(q.p, q.k), "{q:?}");
            }
        }
    }

    #[test]
    fn e_is_periodic_in_n() {
        for q in grid() {
            if q.n == q.k {
                continue;
            }
            let shifted = ps(q.p, q.k, q.n + q.p);
            assert_eq!(q.e(), shifted.e(), "{q:?}");
        }
    }
}
