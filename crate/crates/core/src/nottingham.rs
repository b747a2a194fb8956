//! Truncated elements of the Nottingham group `N(R)`: power series
//! `x + a_2 x^2 + ... + a_N x^N + O(x^{N+1})` under substitution.
//!
//! The product of `f` and `g` is `(fg)(x) = f(g(x))`. Binary operations
//! return a result at the smaller of the two input precisions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeffring::Ring;
use crate::error::{Error, Result};

/// What is known about a depth from a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthResult {
    /// `a_i = 0` for `2 <= i <= d` and `a_{d+1} != 0`.
    Exact(usize),
    /// All visible coefficients vanish; the depth is at least the precision.
    AtLeast(usize),
}

impl DepthResult {
    pub fn exact(self) -> Option<usize> {
        match self {
            DepthResult::Exact(d) => Some(d),
            DepthResult::AtLeast(_) => None,
        }
    }

    /// A lower bound valid in both variants.
    pub fn lower_bound(self) -> usize {
        match self {
            DepthResult::Exact(d) | DepthResult::AtLeast(d) => d,
        }
    }

    /// True when the depth is certainly `>= d`.
    pub fn is_at_least(self, d: usize) -> bool {
        self.lower_bound() >= d
    }
}

impl fmt::Display for DepthResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthResult::Exact(d) => write!(f, "{d}"),
            DepthResult::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// `x + a_2 x^2 + ... + a_N x^N + O(x^{N+1})` over the ring `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<R: Ring> {
    ring: R,
    precision: usize,
    // a_2 ..= a_N
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Series<R> {
    pub fn identity(ring: R, precision: usize) -> Self {
        assert!(precision >= 1, "precision must be positive");
        let coeffs = vec![ring.zero(); precision - 1];
        Self { ring, precision, coeffs }
    }

    /// Builds `x + sum c x^e` from `(e, c)` pairs; exponents above the
    /// precision are dropped, repeated exponents add up.
    pub fn from_terms(ring: R, precision: usize, terms: impl IntoIterator<Item = (usize, R::Elem)>) -> Self {
        let mut s = Self::identity(ring, precision);
        for (e, c) in terms {
            assert!(e >= 2, "the linear coefficient is fixed to 1");
            if e <= precision {
                let slot = &mut s.coeffs[e - 2];
                *slot = s.ring.add(slot, &c);
            }
        }
        s
    }

    /// Builds from `a_2, a_3, ...`; missing coefficients are zero.
    pub fn from_coeffs(ring: R, precision: usize, coeffs: impl IntoIterator<Item = R::Elem>) -> Self {
        Self::from_terms(ring, precision, coeffs.into_iter().enumerate().map(|(i, c)| (i + 2, c)))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coefficient of `x^i` for `1 <= i <= N`.
    pub fn coeff(&self, i: usize) -> R::Elem {
        match i {
            0 => self.ring.zero(),
            1 => self.ring.one(),
            _ => self.coeffs[i - 2].clone(),
        }
    }

    /// `a_2 ..= a_N`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision >= 1 && precision <= self.precision);
        Self {
            ring: self.ring.clone(),
            precision,
            coeffs: self.coeffs[..precision - 1].to_vec(),
        }
    }

    /// Coefficientwise image under a ring homomorphism.
    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Series<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        Series { ring, precision: self.precision, coeffs }
    }

    pub fn try_map_ring<S: Ring>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> Result<S::Elem>,
    ) -> Result<Series<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(Series { ring, precision: self.precision, coeffs })
    }

    pub fn depth(&self) -> DepthResult {
        match self.coeffs.iter().position(|c| !self.ring.is_zero(c)) {
            // a_{i+2} is the first nonzero coefficient
            Some(i) => DepthResult::Exact(i + 1),
            None => DepthResult::AtLeast(self.precision),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    fn dense(&self, n: usize) -> Vec<R::Elem> {
        let mut v = Vec::with_capacity(n + 1);
        v.push(self.ring.zero());
        v.push(self.ring.one());
        v.extend(self.coeffs[..n - 1].iter().cloned());
        v
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// `x -> self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.precision.min(other.precision);
        let ring = &self.ring;
        let g = other.dense(n);
        let last = self.coeffs[..n - 1]
            .iter()
            .rposition(|c| !ring.is_zero(c))
            .map(|i| i + 2);
        let mut out = g.clone();
        if let Some(last) = last {
            // power = g^m, which has valuation m
            let mut power = g.clone();
            for m in 2..=last {
                power = mul_from(ring, &power, &g, m, n);
                let a = &self.coeffs[m - 2];
                if ring.is_zero(a) {
                    continue;
                }
                for i in m..=n {
                    if !ring.is_zero(&power[i]) {
                        out[i] = ring.add(&out[i], &ring.mul(a, &power[i]));
                    }
                }
            }
        }
        Ok(Self { ring: ring.clone(), precision: n, coeffs: out.split_off(2) })
    }

    /// Two-sided inverse, solved coefficient by coefficient from
    /// `h(f(x)) = x` using the powers of `f`.
    pub fn inverse(&self) -> Self {
        let n = self.precision;
        let ring = &self.ring;
        let f = self.dense(n);
        // powers[m] = f^m, for 2 <= m < n
        let mut powers: Vec<Vec<R::Elem>> = vec![Vec::new(), f.clone()];
        for m in 2..n {
            let next = mul_from(ring, &powers[m - 1], &f, m, n);
            powers.push(next);
        }
        let mut b = vec![ring.zero(); n + 1];
        for i in 2..=n {
            let mut acc = ring.neg(&f[i]);
            for (m, bm) in b.iter().enumerate().take(i).skip(2) {
                if !ring.is_zero(bm) && !ring.is_zero(&powers[m][i]) {
                    acc = ring.sub(&acc, &ring.mul(bm, &powers[m][i]));
                }
            }
            b[i] = acc;
        }
        Self { ring: ring.clone(), precision: n, coeffs: b.split_off(2) }
    }

    /// `m`-th power by binary powering; negative `m` inverts first.
    pub fn pow(&self, m: i64) -> Self {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Self::identity(self.ring.clone(), self.precision);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq).expect("same ring");
            }
        }
        acc
    }

    /// `m`-th power by `|m|` successive compositions.
    pub fn pow_iterated(&self, m: i64) -> Self {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.ring.clone(), self.precision);
        for _ in 0..m.unsigned_abs() {
            acc = acc.compose(&base).expect("same ring");
        }
        acc
    }

    /// `[f, g] = f^{-1} g^{-1} f g`, i.e. `x -> f^{-1}(g^{-1}(f(g(x))))`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let fg = self.compose(other)?;
        let inner = other.inverse().compose(&fg)?;
        self.inverse().compose(&inner)
    }

    /// Equality of all coefficients up to `x^n`.
    pub fn agrees_to(&self, other: &Self, n: usize) -> bool {
        assert!(n <= self.precision && n <= other.precision);
        self.coeffs[..n.saturating_sub(1)] == other.coeffs[..n.saturating_sub(1)]
    }

    /// Text form `x + c*x^e + ... + O(x^{N+1})`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("x");
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let e = i + 2;
            let cs = self.ring.fmt_elem(c);
            if self.ring.is_one(c) {
                out.push_str(&format!(" + x^{e}"));
            } else if needs_parens(&cs) {
                out.push_str(&format!(" + ({cs})*x^{e}"));
            } else {
                out.push_str(&format!(" + {cs}*x^{e}"));
            }
        }
        out.push_str(&format!(" + O(x^{})", self.precision + 1));
        out
    }

    /// Parses the output of [`Self::to_text`].
    pub fn parse(ring: R, s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in series {s:?}"));
        let parts = split_top_level(s);
        let (first, rest) = parts.split_first().ok_or_else(|| bad("empty input"))?;
        if first.trim() != "x" {
            return Err(bad("leading term must be x"));
        }
        let (last, middle) = rest.split_last().ok_or_else(|| bad("missing O-term"))?;
        let order = last
            .trim()
            .strip_prefix("O(x^")
            .and_then(|t| t.strip_suffix(')'))
            .and_then(|t| t.trim_matches(|c| c == '{' || c == '}').parse::<usize>().ok())
            .ok_or_else(|| bad("malformed O-term"))?;
        if order < 2 {
            return Err(bad("precision must be positive"));
        }
        let mut terms = Vec::new();
        for t in middle {
            let t = t.trim();
            let (coeff, exp) = match t.rsplit_once("x^") {
                Some((c, e)) => (c, e),
                None => return Err(bad("term without x^")),
            };
            let e: usize = exp.trim().parse().map_err(|_| bad("bad exponent"))?;
            if e < 2 || e >= order {
                return Err(bad("exponent out of range"));
            }
            let coeff = coeff.trim();
            let c = if coeff.is_empty() {
                ring.one()
            } else {
                let c = coeff.strip_suffix('*').ok_or_else(|| bad("missing '*'"))?.trim();
                let c = c
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .unwrap_or(c);
                ring.parse_elem(c)?
            };
            terms.push((e, c));
        }
        Ok(Self::from_terms(ring, order - 1, terms))
    }
}

impl<R: Ring> fmt::Display for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains(' ') || s.starts_with('-')
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&s[start..]);
    parts
}

/// Coefficients `lo..=n` of `a * b`, where `a` has valuation `lo - 1` and
/// `b` valuation 1; everything below `lo` is zero.
fn mul_from<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], lo: usize, n: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); n + 1];
    for (j, aj) in a.iter().enumerate().take(n).skip(lo - 1) {
        if ring.is_zero(aj) {
            continue;
        }
        for (t, bt) in b.iter().enumerate().take(n - j + 1).skip(1) {
            if ring.is_zero(bt) {
                continue;
            }
            out[j + t] = ring.add(&out[j + t], &ring.mul(aj, bt));
        }
    }
    out
}
