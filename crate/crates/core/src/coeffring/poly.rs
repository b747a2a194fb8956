use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::Ring;
use crate::error::{Error, Result};

/// A polynomial variable: `r_j`, `s_j`, the symbolic `K`, or a symbolic `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    R(u32),
    S(u32),
    K,
    N,
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::R(j) => write!(f, "r{j}"),
            VarId::S(j) => write!(f, "s{j}"),
            VarId::K => f.write_str("K"),
            VarId::N => f.write_str("n"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown variable {s:?}"));
        match s {
            "K" => Ok(VarId::K),
            "n" => Ok(VarId::N),
            _ => {
                let (kind, idx) = s.split_at(1);
                let j: u32 = idx.parse().map_err(|_| bad())?;
                match kind {
                    "r" => Ok(VarId::R(j)),
                    "s" => Ok(VarId::S(j)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// A power product of variables, stored sparsely with exponents > 0 and
/// variables in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .map(|&(v, e)| (v, e - self.exponent(v)))
                .filter(|&(_, e)| e > 0)
                .collect(),
        )
    }

    /// Drops variable `v`, returning the remaining monomial and its exponent.
    pub fn split_off(&self, v: VarId) -> (Monomial, u32) {
        let e = self.exponent(v);
        (Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect()), e)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let vars: BTreeSet<VarId> = self.0.iter().chain(&other.0).map(|&(v, _)| v).collect();
        Monomial(
            vars.into_iter()
                .map(|v| (v, self.exponent(v).max(other.exponent(v))))
                .collect(),
        )
    }
}

// Graded lexicographic: total degree first, then lexicographic with
// variables earlier in `VarId` order ranking higher.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (x, y) in self.0.iter().zip(&other.0) {
                if x.0 != y.0 {
                    return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial: monomial to nonzero coefficient.
///
/// Arithmetic needs the coefficient ring and lives on [`PolyRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C> Default for MultiPoly<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C: Clone> MultiPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// True iff some term has positive exponent on `v`.
    pub fn depends_on(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn max_exponent(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn min_exponent(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0)
    }

    /// Sub-polynomial of the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient; `is_zero` decides which results to drop.
    pub fn map_coeffs<D>(&self, f: impl Fn(&C) -> D, is_zero: impl Fn(&D) -> bool) -> MultiPoly<D> {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !is_zero(c))
                .collect(),
        }
    }

    pub fn try_map_coeffs<D>(
        &self,
        f: impl Fn(&C) -> Result<D>,
        is_zero: impl Fn(&D) -> bool,
    ) -> Result<MultiPoly<D>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !is_zero(&d) {
                terms.insert(m.clone(), d);
            }
        }
        Ok(MultiPoly { terms })
    }

    /// Rewrites every monomial through `f`; colliding images must not occur.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect(),
        }
    }
}

/// The polynomial ring over a coefficient ring `base`, in any of the
/// [`VarId`] variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn constant(&self, c: R::Elem) -> MultiPoly<R::Elem> {
        self.term(c, Monomial::one())
    }

    pub fn term(&self, c: R::Elem, m: Monomial) -> MultiPoly<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn var(&self, v: VarId) -> MultiPoly<R::Elem> {
        self.term(self.base.one(), Monomial::var(v))
    }

    pub fn int(&self, v: i64) -> MultiPoly<R::Elem> {
        self.constant(self.base.from_i64(v))
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (Monomial, R::Elem)>,
    ) -> MultiPoly<R::Elem> {
        let mut out: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&self.base, &mut out, m, c);
        }
        out.retain(|_, c| !self.base.is_zero(c));
        MultiPoly { terms: out }
    }

    pub fn scale(&self, q: &MultiPoly<R::Elem>, c: &R::Elem) -> MultiPoly<R::Elem> {
        q.map_coeffs(|x| self.base.mul(x, c), |x| self.base.is_zero(x))
    }

    pub fn mul_monomial(&self, q: &MultiPoly<R::Elem>, m: &Monomial) -> MultiPoly<R::Elem> {
        MultiPoly {
            terms: q.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    /// The constant term as a scalar.
    pub fn constant_term(&self, q: &MultiPoly<R::Elem>) -> R::Elem {
        q.coefficient(&Monomial::one())
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    /// Partial substitution of scalars for variables; unassigned variables stay.
    pub fn substitute(
        &self,
        q: &MultiPoly<R::Elem>,
        asg: &BTreeMap<VarId, R::Elem>,
    ) -> MultiPoly<R::Elem> {
        if asg.is_empty() {
            return q.clone();
        }
        let mut out = BTreeMap::new();
        for (m, c) in &q.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match asg.get(&v) {
                    Some(val) => coeff = self.base.mul(&coeff, &self.base.pow(val, e)),
                    None => rest.push((v, e)),
                }
            }
            if !self.base.is_zero(&coeff) {
                accumulate(&self.base, &mut out, Monomial(rest), coeff);
            }
        }
        out.retain(|_, c| !self.base.is_zero(c));
        MultiPoly { terms: out }
    }

    /// Full evaluation; every occurring variable must be assigned.
    pub fn eval(&self, q: &MultiPoly<R::Elem>, asg: &BTreeMap<VarId, R::Elem>) -> Result<R::Elem> {
        if let Some(v) = q.variables().into_iter().find(|v| !asg.contains_key(v)) {
            return Err(Error::IncompleteSpecialization(v));
        }
        Ok(self.constant_term(&self.substitute(q, asg)))
    }

    /// Substitutes a polynomial for a single variable.
    pub fn compose_var(
        &self,
        q: &MultiPoly<R::Elem>,
        v: VarId,
        value: &MultiPoly<R::Elem>,
    ) -> MultiPoly<R::Elem> {
        let mut out = self.zero();
        for coeff in self.coefficients_in(q, v).iter().rev() {
            out = self.add(&self.mul(&out, value), coeff);
        }
        out
    }

    /// Coefficients of `q` viewed as a polynomial in `v`, lowest power first.
    pub fn coefficients_in(&self, q: &MultiPoly<R::Elem>, v: VarId) -> Vec<MultiPoly<R::Elem>> {
        let deg = q.max_exponent(v) as usize;
        let mut parts: Vec<BTreeMap<Monomial, R::Elem>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &q.terms {
            let (rest, e) = m.split_off(v);
            parts[e as usize].insert(rest, c.clone());
        }
        parts.into_iter().map(|terms| MultiPoly { terms }).collect()
    }

    /// Inverse of [`Self::coefficients_in`].
    pub fn from_coefficients_in(&self, parts: &[MultiPoly<R::Elem>], v: VarId) -> MultiPoly<R::Elem> {
        let mut out = BTreeMap::new();
        for (e, part) in parts.iter().enumerate() {
            let m = if e == 0 {
                Monomial::one()
            } else {
                Monomial::var(v).pow(e as u32)
            };
            for (n, c) in &part.terms {
                out.insert(n.mul(&m), c.clone());
            }
        }
        MultiPoly { terms: out }
    }

    /// Parses `r1*r2 + 2*r1^3 - K`, with parentheses and integer powers.
    pub fn parse(&self, s: &str) -> Result<MultiPoly<R::Elem>> {
        let mut parser = PolyParser { ring: self, src: s.as_bytes(), pos: 0 };
        let q = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(q)
    }
}

impl Monomial {
    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|&(v, x)| (v, x * e)).filter(|&(_, x)| x > 0).collect())
    }
}

fn accumulate<R: Ring>(base: &R, out: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, c: R::Elem) {
    match out.get_mut(&m) {
        Some(existing) => *existing = base.add(existing, &c),
        None => {
            out.insert(m, c);
        }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = MultiPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        MultiPoly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_bigint(&self, v: &BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(v))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    let s = self.base.add(x, c);
                    if self.base.is_zero(&s) {
                        terms.remove(m);
                    } else {
                        *x = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        MultiPoly { terms }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.map_coeffs(|c| self.base.neg(c), |_| false)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return MultiPoly::zero();
        }
        if a.len() == 1 && a.terms.keys().next().unwrap().is_one() {
            let c = a.terms.values().next().unwrap();
            return self.scale(b, c);
        }
        if b.len() == 1 && b.terms.keys().next().unwrap().is_one() {
            let c = b.terms.values().next().unwrap();
            return self.scale(a, c);
        }
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = self.base.mul(ca, cb);
                if self.base.is_zero(&c) {
                    continue;
                }
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(x) => *x = self.base.add(x, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !self.base.is_zero(c)).collect(),
        }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn describe(&self) -> String {
        format!("{}[vars]", self.base.describe())
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // highest monomial first
        for (i, (m, c)) in a.terms.iter().rev().enumerate() {
            let mut cs = self.base.fmt_elem(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = cs == "1";
            if m.is_one() {
                out.push_str(&cs);
            } else if unit {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{cs}*{m}"));
            }
        }
        out
    }

    fn parse_elem(&self, s: &str) -> Result<Self::Elem> {
        self.parse(s)
    }
}

struct PolyParser<'a, R> {
    ring: &'a PolyRing<R>,
    src: &'a [u8],
    pos: usize,
}

impl<R: Ring> PolyParser<'_, R> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn expr(&mut self) -> Result<MultiPoly<R::Elem>> {
        let ring = self.ring;
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            ring.neg(&self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = ring.add(&acc, &self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = ring.sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<R::Elem>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = self.ring.mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly<R::Elem>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly<R::Elem>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.ring.constant(self.ring.base.parse_elem(text)?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.ring.var(name.parse()?))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Integers, PrimeField};

    fn f2() -> PolyRing<PrimeField> {
        PolyRing::new(PrimeField::new(2).unwrap())
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        let ring = f2();
        let s = ring.add(&ring.var(VarId::R(1)), &ring.var(VarId::R(2)));
        let sq = ring.mul(&s, &s);
        assert_eq!(sq, ring.parse("r1^2 + r2^2").unwrap());
    }

    #[test]
    fn depends_on_examples() {
        let ring = f2();
        let q = ring.parse("r1*r2 + r1^3").unwrap();
        assert!(q.depends_on(VarId::R(2)));
        assert!(!q.depends_on(VarId::R(3)));
        assert!(!ring.zero().depends_on(VarId::R(1)));
    }

    #[test]
    fn substitution_examples() {
        let ring = f2();
        let q = ring.parse("r1*r2 + r1^3").unwrap();
        let asg = BTreeMap::from([(VarId::R(1), 1), (VarId::R(2), 0)]);
        assert_eq!(ring.eval(&q, &asg), Ok(1));
        let asg = BTreeMap::from([(VarId::R(1), 1), (VarId::R(2), 1)]);
        assert_eq!(ring.eval(&q, &asg), Ok(0));
        assert_eq!(ring.substitute(&q, &BTreeMap::new()), q);
        let partial = ring.substitute(&q, &BTreeMap::from([(VarId::R(1), 1)]));
        assert_eq!(partial, ring.parse("r2 + 1").unwrap());
        let missing = ring.eval(&q, &BTreeMap::from([(VarId::R(1), 1)]));
        assert_eq!(missing, Err(Error::IncompleteSpecialization(VarId::R(2))));
    }

    #[test]
    fn text_round_trip() {
        let ring = PolyRing::new(Integers);
        for s in ["0", "1", "-3*r1^2*s4 + K - 7", "r1*r2 + r1^3", "-n*K + 2"] {
            let q = ring.parse(s).unwrap();
            let back = ring.parse(&ring.fmt_elem(&q)).unwrap();
            assert_eq!(q, back, "{s}");
        }
    }

    #[test]
    fn graded_order_puts_higher_degree_last() {
        let a = Monomial::from_pairs([(VarId::R(1), 3)]);
        let b = Monomial::from_pairs([(VarId::R(1), 1), (VarId::R(2), 1)]);
        let c = Monomial::var(VarId::R(5));
        assert!(c < b && c < a);
        // same degree: r1 outranks r2
        assert!(b < a);
        assert_eq!(Monomial::one().cmp(&Monomial::one()), Ordering::Equal);
    }

    #[test]
    fn coefficients_in_round_trip() {
        let ring = PolyRing::new(Integers);
        let q = ring.parse("3*K^2*r1 - K + r2*r1 + 5").unwrap();
        let parts = ring.coefficients_in(&q, VarId::K);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[1], ring.int(-1));
        assert_eq!(ring.from_coefficients_in(&parts, VarId::K), q);
        let k_to_2 = ring.compose_var(&q, VarId::K, &ring.int(2));
        assert_eq!(k_to_2, ring.parse("12*r1 + r1*r2 + 3").unwrap());
    }
}
