use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::largest_prime_factor;
use super::{Integers, Monomial, MultiPoly, PolyRing, PrimeField, Rationals, Ring, VarId};
use crate::error::{Error, Result};

type QPoly = MultiPoly<BigRational>;

fn qring() -> PolyRing<Rationals> {
    PolyRing::new(Rationals)
}

/// A primitive linear polynomial `u*K + v` with `u > 0` and `gcd(u, v) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    u: i64,
    v: i64,
}

impl LinearFactor {
    /// Splits `b*K + c` (with `b != 0`) into an integer content and a
    /// primitive factor: `b*K + c = content * factor`.
    pub fn primitive(b: i64, c: i64) -> (i64, LinearFactor) {
        assert!(b != 0, "not linear in K");
        let g = b.gcd(&c) * b.signum();
        (g, LinearFactor { u: b / g, v: c / g })
    }

    /// `K - c`.
    pub fn k_minus(c: i64) -> Self {
        LinearFactor { u: 1, v: -c }
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn root(&self) -> BigRational {
        BigRational::new(BigInt::from(-self.v), BigInt::from(self.u))
    }

    /// If the factor is `K - c`, returns `c`.
    pub fn monic_root(&self) -> Option<i64> {
        (self.u == 1).then_some(-self.v)
    }

    pub fn eval(&self, k: &BigRational) -> BigRational {
        k * BigInt::from(self.u) + BigInt::from(self.v)
    }

    pub fn as_poly(&self) -> QPoly {
        let q = qring();
        q.add(
            &q.scale(&q.var(VarId::K), &BigRational::from_integer(self.u.into())),
            &q.int(self.v),
        )
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = if self.u == 1 { "K".to_string() } else { format!("{}*K", self.u) };
        match self.v.cmp(&0) {
            std::cmp::Ordering::Less => write!(f, "{lead} - {}", -self.v),
            std::cmp::Ordering::Equal => f.write_str(&lead),
            std::cmp::Ordering::Greater => write!(f, "{lead} + {}", self.v),
        }
    }
}

/// A rational function with a rational-coefficient polynomial numerator and
/// a denominator kept factored: a product of primitive linear factors in `K`
/// and a power product of variables (in practice a power of `r_k`).
///
/// Integer denominators live in the numerator's rational coefficients.
/// After every operation, factors that divide the numerator are cancelled.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: QPoly,
    den_vars: Monomial,
    den_lin: BTreeMap<LinearFactor, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(v: i64) -> Self {
        Self::from_poly(qring().int(v))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(qring().constant(c))
    }

    pub fn var(v: VarId) -> Self {
        Self::from_poly(qring().var(v))
    }

    pub fn from_poly(num: QPoly) -> Self {
        Self { num, den_vars: Monomial::one(), den_lin: BTreeMap::new() }
    }

    pub fn from_int_poly(q: &MultiPoly<BigInt>) -> Self {
        Self::from_poly(q.map_coeffs(|c| BigRational::from_integer(c.clone()), |c| c.is_zero()))
    }

    /// Builds `num / (den_vars * prod factors)` and normalizes.
    pub fn from_parts(
        num: QPoly,
        den_vars: Monomial,
        den_lin: impl IntoIterator<Item = (LinearFactor, u32)>,
    ) -> Self {
        let mut lin = BTreeMap::new();
        for (f, m) in den_lin {
            *lin.entry(f).or_insert(0) += m;
        }
        Self { num, den_vars, den_lin: lin }.normalize()
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn den_vars(&self) -> &Monomial {
        &self.den_vars
    }

    pub fn linear_factors(&self) -> impl Iterator<Item = (LinearFactor, u32)> + '_ {
        self.den_lin.iter().map(|(f, m)| (*f, *m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is trivial (rational scalars aside).
    pub fn is_polynomial(&self) -> bool {
        self.den_vars.is_one() && self.den_lin.is_empty()
    }

    /// Least common denominator of the numerator's rational coefficients.
    pub fn integer_denominator(&self) -> BigInt {
        self.num
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    /// Largest prime dividing [`Self::integer_denominator`] (1 if none).
    pub fn largest_denominator_prime(&self) -> u64 {
        largest_prime_factor(&self.integer_denominator())
    }

    pub fn neg(&self) -> Self {
        Self { num: qring().neg(&self.num), ..self.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: qring().scale(&self.num, c), ..self.clone() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn mul_poly(&self, q: &QPoly) -> Self {
        Self { num: qring().mul(&self.num, q), ..self.clone() }.normalize()
    }

    pub fn mul_var(&self, v: VarId) -> Self {
        self.mul_poly(&qring().var(v))
    }

    /// Divides by the integer linear form `b*K + c`.
    pub fn div_linear(&self, b: i64, c: i64) -> Self {
        assert!(b != 0 || c != 0, "division by zero");
        if b == 0 {
            return self.scale(&BigRational::new(1.into(), c.into()));
        }
        let (content, f) = LinearFactor::primitive(b, c);
        let mut out = self.scale(&BigRational::new(1.into(), content.into()));
        *out.den_lin.entry(f).or_insert(0) += 1;
        out.normalize()
    }

    pub fn div_var(&self, v: VarId) -> Self {
        let mut out = self.clone();
        out.den_vars = out.den_vars.mul(&Monomial::var(v));
        out.normalize()
    }

    fn expanded_den(&self) -> QPoly {
        let q = qring();
        let mut d = q.term(BigRational::one(), self.den_vars.clone());
        for (f, m) in &self.den_lin {
            d = q.mul(&d, &q.pow(&f.as_poly(), *m));
        }
        d
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let factors: Vec<(LinearFactor, u32)> = self.linear_factors().collect();
        for (f, mut m) in factors {
            while m > 0 {
                match divide_by_linear(&self.num, f) {
                    Some(q) => {
                        self.num = q;
                        m -= 1;
                    }
                    None => break,
                }
            }
            if m == 0 {
                self.den_lin.remove(&f);
            } else {
                self.den_lin.insert(f, m);
            }
        }
        if !self.den_vars.is_one() {
            let common = Monomial::from_pairs(
                self.den_vars
                    .pairs()
                    .iter()
                    .map(|&(v, e)| (v, e.min(self.num.min_exponent(v)))),
            );
            if !common.is_one() {
                self.num = self.num.map_monomials(|m| common.quotient_of(m));
                self.den_vars = common.quotient_of(&self.den_vars);
            }
        }
        self
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        let q = qring();
        q.mul(&self.num, &other.expanded_den()) == q.mul(&other.num, &self.expanded_den())
    }

    /// Substitutes a rational value for `K`.
    pub fn eval_k(&self, k: &BigRational) -> Result<Self> {
        let mut scale = BigRational::one();
        for (f, m) in &self.den_lin {
            let d = f.eval(k);
            if d.is_zero() {
                return Err(Error::HigherOrderPole { at: k.to_string(), order: *m });
            }
            scale *= num_traits::pow(d, *m as usize);
        }
        let num = qring().substitute(&self.num, &BTreeMap::from([(VarId::K, k.clone())]));
        Ok(Self {
            num: qring().scale(&num, &scale.recip()),
            den_vars: self.den_vars.clone(),
            den_lin: BTreeMap::new(),
        }
        .normalize())
    }

    /// Substitutes scalars for numerator variables (not `K`, not variables
    /// appearing in the denominator).
    pub fn substitute(&self, asg: &BTreeMap<VarId, BigRational>) -> Self {
        debug_assert!(!asg.contains_key(&VarId::K));
        debug_assert!(asg.keys().all(|v| self.den_vars.exponent(*v) == 0));
        Self { num: qring().substitute(&self.num, asg), ..self.clone() }.normalize()
    }

    /// Residue at `K = c` of a function with at most a simple pole there:
    /// the value of `(K - c) * self` at `K = c`.
    pub fn residue(&self, c: &BigRational) -> Result<Self> {
        let pole = self.den_lin.iter().find(|(f, _)| f.root() == *c);
        let Some((&f, &m)) = pole else {
            return Ok(Self::zero());
        };
        if m >= 2 {
            return Err(Error::HigherOrderPole { at: c.to_string(), order: m });
        }
        let mut rest = self.clone();
        rest.den_lin.remove(&f);
        let value = rest.eval_k(c)?;
        Ok(value.scale(&BigRational::new(1.into(), f.u.into())))
    }
}

/// Exact division of `num` by the linear factor, if it divides.
fn divide_by_linear(num: &QPoly, f: LinearFactor) -> Option<QPoly> {
    let q = qring();
    let coeffs = q.coefficients_in(num, VarId::K);
    if coeffs.len() < 2 {
        return None;
    }
    let u = BigRational::from_integer(f.u.into());
    let v = BigRational::from_integer(f.v.into());
    let uinv = u.recip();
    let deg = coeffs.len() - 1;
    let mut quot = vec![QPoly::zero(); deg];
    quot[deg - 1] = q.scale(&coeffs[deg], &uinv);
    for d in (1..deg).rev() {
        let t = q.sub(&coeffs[d], &q.scale(&quot[d], &v));
        quot[d - 1] = q.scale(&t, &uinv);
    }
    let rem = q.sub(&coeffs[0], &q.scale(&quot[0], &v));
    rem.is_zero().then(|| q.from_coefficients_in(&quot, VarId::K))
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let q = qring();
        let vars = self.den_vars.lcm(&other.den_vars);
        let mut lin = self.den_lin.clone();
        for (f, m) in &other.den_lin {
            let e = lin.entry(*f).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |x: &RatFunc| {
            let mut n = q.mul_monomial(&x.num, &x.den_vars.quotient_of(&vars));
            for (f, m) in &lin {
                let have = x.den_lin.get(f).copied().unwrap_or(0);
                if *m > have {
                    n = q.mul(&n, &q.pow(&f.as_poly(), m - have));
                }
            }
            n
        };
        let num = q.add(&lift(self), &lift(other));
        RatFunc { num, den_vars: vars, den_lin: lin }.normalize()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &other.neg()
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let mut lin = self.den_lin.clone();
        for (f, m) in &other.den_lin {
            *lin.entry(*f).or_insert(0) += m;
        }
        RatFunc {
            num: qring().mul(&self.num, &other.num),
            den_vars: self.den_vars.mul(&other.den_vars),
            den_lin: lin,
        }
        .normalize()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = qring().fmt_elem(&self.num);
        if self.is_polynomial() {
            return f.write_str(&num);
        }
        let mut den: Vec<String> = Vec::new();
        for (lf, m) in &self.den_lin {
            if *m == 1 {
                den.push(format!("({lf})"));
            } else {
                den.push(format!("({lf})^{m}"));
            }
        }
        if !self.den_vars.is_one() {
            den.push(self.den_vars.to_string());
        }
        write!(f, "({num})/({})", den.join("*"))
    }
}

/// The reduction `K -> k`, coefficients mod `p`: a rational function whose
/// denominator stays invertible becomes a polynomial over `F_p`. Variables
/// in the denominator must be cancelled by the reduced numerator.
pub fn reduce_mod_p(q: &RatFunc, p: u64, k: u64) -> Result<MultiPoly<u64>> {
    let field = PrimeField::new(p)?;
    if q.num.depends_on(VarId::N) {
        return Err(Error::ParameterDomain("cannot reduce with symbolic n".into()));
    }
    let kq = BigRational::from_integer(k.into());
    let mut den = BigRational::one();
    for (f, m) in &q.den_lin {
        den *= num_traits::pow(f.eval(&kq), *m as usize);
    }
    let den_inv = (!den.is_zero())
        .then(|| field.from_rational(&den.recip()))
        .flatten()
        .ok_or_else(|| Error::NotReducible {
            p,
            reason: format!("denominator of {q} vanishes mod {p} at K = {k}"),
        })?;
    let num = qring().substitute(&q.num, &BTreeMap::from([(VarId::K, kq)]));
    let reduced = num.try_map_coeffs(
        |c| {
            field
                .from_rational(c)
                .map(|x| field.mul(&x, &den_inv))
                .ok_or_else(|| Error::NotReducible {
                    p,
                    reason: format!("coefficient {c} has denominator divisible by {p}"),
                })
        },
        |x| *x == 0,
    )?;
    if let Some((m, _)) = reduced.terms().find(|(m, _)| !q.den_vars.divides(m)) {
        return Err(Error::NotReducible {
            p,
            reason: format!("{} does not cancel against term {m}", q.den_vars),
        });
    }
    Ok(reduced.map_monomials(|m| q.den_vars.quotient_of(m)))
}

/// [`reduce_mod_p`] for integer polynomials.
pub fn reduce_int_poly_mod_p(q: &MultiPoly<BigInt>, p: u64, k: u64) -> Result<MultiPoly<u64>> {
    let field = PrimeField::new(p)?;
    let ints = PolyRing::new(Integers);
    let sub = ints.substitute(q, &BTreeMap::from([(VarId::K, BigInt::from(k))]));
    if sub.depends_on(VarId::N) {
        return Err(Error::ParameterDomain("cannot reduce with symbolic n".into()));
    }
    Ok(sub.map_coeffs(|c| field.from_bigint(c), |x| *x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(j: u32) -> RatFunc {
        RatFunc::var(VarId::R(j))
    }

    #[test]
    fn linear_factor_normal_form() {
        assert_eq!(LinearFactor::primitive(2, -4), (2, LinearFactor::k_minus(2)));
        assert_eq!(LinearFactor::primitive(-3, 6), (-3, LinearFactor::k_minus(2)));
        let (c, f) = LinearFactor::primitive(2, -1);
        assert_eq!((c, f.u(), f.v()), (1, 2, -1));
        assert_eq!(f.to_string(), "2*K - 1");
    }

    #[test]
    fn cancellation_after_arithmetic() {
        // (K - 1) / (K - 1) = 1
        let k = RatFunc::var(VarId::K);
        let x = (&k - &RatFunc::one()).div_linear(1, -1);
        assert!(x.is_polynomial());
        assert_eq!(x, RatFunc::one());
        // r1^2 / r1 = r1
        let y = (&r(1) * &r(1)).div_var(VarId::R(1));
        assert!(y.is_polynomial());
        assert_eq!(y, r(1));
    }

    #[test]
    fn sums_share_denominators() {
        // 1/(K-1) - 1/(K-2) = -1/((K-1)(K-2))
        let a = RatFunc::one().div_linear(1, -1);
        let b = RatFunc::one().div_linear(1, -2);
        let d = &a - &b;
        let expect = RatFunc::int(-1).div_linear(1, -1).div_linear(1, -2);
        assert_eq!(d, expect);
        assert_eq!(d.linear_factors().count(), 2);
        assert!((&d - &expect).is_zero());
    }

    #[test]
    fn residue_examples() {
        // r_{k+1} / (r_k (K - 1)) at K = 1, with k = 1
        let q = r(2).div_var(VarId::R(1)).div_linear(1, -1);
        let res = q.residue(&BigRational::one()).unwrap();
        assert_eq!(res, r(2).div_var(VarId::R(1)));
        let regular = r(2).div_linear(1, -3);
        assert!(regular.residue(&BigRational::one()).unwrap().is_zero());
        let double = RatFunc::one().div_linear(1, -2).div_linear(1, -2);
        let two = BigRational::from_integer(2.into());
        assert!(matches!(double.residue(&two), Err(Error::HigherOrderPole { order: 2, .. })));
    }

    #[test]
    fn residue_of_non_monic_factor() {
        // 1/(2K - 1) = (1/2)/(K - 1/2): residue 1/2 at K = 1/2
        let q = RatFunc::one().div_linear(2, -1);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(q.residue(&half).unwrap(), RatFunc::constant(half));
    }

    #[test]
    fn reduction_examples() {
        // (n - 1 - K) r_{k+1} with n = 5, K -> 1, p = 3
        let ints = PolyRing::new(Integers);
        let q = ints.parse("(4 - K)*r2").unwrap();
        assert!(reduce_int_poly_mod_p(&q, 3, 1).unwrap().is_zero());
        let seven = RatFunc::int(7);
        assert_eq!(reduce_mod_p(&seven, 5, 0).unwrap(), PolyRing::new(PrimeField::new(5).unwrap()).int(2));
        let pole = RatFunc::one().div_linear(1, -1);
        for p in [2, 3, 5, 7] {
            assert!(matches!(reduce_mod_p(&pole, p, 1), Err(Error::NotReducible { .. })));
        }
        // r2 / r1 does not reduce, r1^2 / r1 does
        assert!(reduce_mod_p(&r(2).div_var(VarId::R(1)), 3, 1).is_err());
        let ok = RatFunc::from_parts(qring().parse("r1^2*r2").unwrap(), Monomial::var(VarId::R(1)), []);
        let f3 = PolyRing::new(PrimeField::new(3).unwrap());
        assert_eq!(reduce_mod_p(&ok, 3, 1).unwrap(), f3.parse("r1*r2").unwrap());
    }

    #[test]
    fn reduction_inverts_small_denominators() {
        // (K + 1)/(2 (K - 4)) at K = 2 over F_5: 3/(2*(-2)) = 3/(-4) = 3/1 = 3
        let q = (&RatFunc::var(VarId::K) + &RatFunc::one()).div_linear(2, -8);
        let f5 = PolyRing::new(PrimeField::new(5).unwrap());
        assert_eq!(reduce_mod_p(&q, 5, 2).unwrap(), f5.int(3));
    }
}
