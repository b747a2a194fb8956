//! Matrix descriptions of the commutator chain and of substitution.
//!
//! Two families live here. [`DepthMatrix`] holds the small upper-triangular
//! matrices that carry the leading coefficients of `u_h` to `u_{h+1}`.
//! [`CompositionMatrix`] is the truncated matrix `M` for which `I + M`
//! sends the coefficient vector of `h` to that of `h(f(x))`, with
//! `m_ij = [x^j] f(x)^i` for generic `f`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bounds::ParamSet;
use crate::coeffring::{reduce_int_poly_mod_p, Monomial, MultiPoly, Ring, VarId};
use crate::error::{Error, Result};
use crate::generic::{generic_f, poly_ring, u_chain, PolyFp, Specialization};
use crate::identities::{c_table, int_ring};

type Poly = MultiPoly<u64>;

fn r(j: u64) -> VarId {
    VarId::R(j as u32)
}

/// A square matrix over `F_p[r_*, s_*]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    ring: PolyFp,
    rows: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn zero(ring: PolyFp, size: usize) -> Self {
        Self { rows: vec![vec![ring.zero(); size]; size], ring }
    }

    pub fn identity(ring: PolyFp, size: usize) -> Self {
        let mut m = Self::zero(ring, size);
        for i in 0..size {
            m.rows[i][i] = m.ring.one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn ring(&self) -> &PolyFp {
        &self.ring
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        self.rows.iter().map(|row| row[j].clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        assert_eq!(n, other.size());
        let ring = &self.ring;
        let mut out = Self::zero(ring.clone(), n);
        for i in 0..n {
            for t in 0..n {
                let a = &self.rows[i][t];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[t][j];
                    if !b.is_zero() {
                        out.rows[i][j] = ring.add(&out.rows[i][j], &ring.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (row, orow) in out.rows.iter_mut().zip(&other.rows) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x = self.ring.add(x, y);
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Poly]) -> Vec<Poly> {
        let ring = &self.ring;
        (0..self.size())
            .map(|j| {
                v.iter().enumerate().fold(ring.zero(), |acc, (i, x)| {
                    ring.add(&acc, &ring.mul(x, &self.rows[i][j]))
                })
            })
            .collect()
    }
}

/// One of the `(e+1) x (e+1)` chain matrices, or a product of them.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthMatrix {
    pub p: u64,
    pub k: u64,
    pub n: u64,
    pub h: u64,
    /// `(h-2)k + n`.
    pub n_h: i64,
    pub matrix: PolyMatrix,
}

impl DepthMatrix {
    /// `A_h`, with `(i, j)` entry `((h-2)k + n + 2i - j) r_{k+j-i}`.
    pub fn a(p: u64, k: u64, n: u64, e: u64, h: u64) -> Result<Self> {
        let ring = poly_ring(p)?;
        let field = *ring.base();
        let n_h = (h as i64 - 2) * k as i64 + n as i64;
        let size = e as usize + 1;
        let mut m = PolyMatrix::zero(ring.clone(), size);
        for i in 0..size {
            for j in i..size {
                let c = field.reduce_i64(n_h + 2 * i as i64 - j as i64);
                m.rows[i][j] = ring.scale(&ring.var(r(k + (j - i) as u64)), &c);
            }
        }
        Ok(Self { p, k, n, h, n_h, matrix: m })
    }

    /// `A'_h`: `A_h` of size `k + 1` with `C((h-1)k+n+1, 2) r_k^2` added at
    /// `(0, k)`. Only meaningful when `e(k, n) = k = k0`.
    pub fn a_prime(ps: &ParamSet, h: u64) -> Result<Self> {
        let e = ps.e();
        if !(e == ps.k && ps.k == ps.k0) {
            return Err(Error::ParameterDomain(format!(
                "corrected matrix needs e(k,n) = k = k0, got e = {e} at {ps:?}"
            )));
        }
        let mut a = Self::a(ps.p, ps.k, ps.n, ps.k, h)?;
        let ring = a.matrix.ring.clone();
        let top = (h - 1) * ps.k + ps.n + 1;
        let binom = BigInt::from(top) * BigInt::from(top - 1) / 2u32;
        let c = ring.base().from_bigint(&binom);
        let extra = ring.scale(&ring.term(1, Monomial::from_pairs([(r(ps.k), 2)])), &c);
        let k = ps.k as usize;
        a.matrix.rows[0][k] = ring.add(&a.matrix.rows[0][k], &extra);
        Ok(a)
    }

    /// `A_1 A_2 ... A_h` (`Pi_h`), or the primed product.
    pub fn pi(ps: &ParamSet, e: u64, h: u64, primed: bool) -> Result<Self> {
        let ring = poly_ring(ps.p)?;
        let mut acc = PolyMatrix::identity(ring, e as usize + 1);
        for step in 1..=h {
            let a = if primed { Self::a_prime(ps, step)? } else { Self::a(ps.p, ps.k, ps.n, e, step)? };
            acc = acc.mul(&a.matrix);
        }
        let n_h = (h as i64 - 2) * ps.k as i64 + ps.n as i64;
        Ok(Self { p: ps.p, k: ps.k, n: ps.n, h, n_h, matrix: acc })
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        self.matrix.entry(i, j)
    }
}

/// `v_p = v_1 Pi_{p-1}` with `v_1 = (s_n, .., s_{n+e})`.
pub fn propagate_v(ps: &ParamSet) -> Result<Vec<Poly>> {
    let e = ps.e();
    if e >= ps.k {
        return Err(Error::ParameterDomain(format!("need e(k,n) < k, got e = {e} at {ps:?}")));
    }
    let pi = DepthMatrix::pi(ps, e, ps.p - 1, false)?;
    let ring = pi.matrix.ring().clone();
    let v1: Vec<_> = (0..=e).map(|i| ring.var(VarId::S((ps.n + i) as u32))).collect();
    Ok(pi.matrix.left_apply(&v1))
}

/// Coefficients of `x^{(p-1)k+n+1} ..= x^{(p-1)k+n+e+1}` in `u_p`.
pub fn chain_window(ps: &ParamSet) -> Result<Vec<Poly>> {
    let e = ps.e();
    let lo = ((ps.p - 1) * ps.k + ps.n + 1) as usize;
    let hi = lo + e as usize;
    let chain = u_chain(ps, hi)?;
    let up = &chain[ps.p as usize - 1];
    Ok((lo..=hi).map(|i| up.coeff(i)).collect())
}

/// Outcome of inspecting the columns of `Pi_{p-1}` (or its primed form).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiStructureReport {
    pub params: ParamSet,
    pub e: u64,
    pub primed: bool,
    /// Columns `0 .. e-1` vanish identically.
    pub zero_columns: bool,
    /// A specialization with a nonzero value in column `e`.
    pub witness: Option<Specialization>,
    pub last_column_values: Vec<u64>,
    /// For the primed product: whether it differs from the plain one only
    /// at `(0, k)`, and the scalar `m` with difference `m r_k^p`.
    pub only_corner_differs: Option<bool>,
    pub corner_scalar: Option<u64>,
}

impl PiStructureReport {
    pub fn pass(&self) -> bool {
        self.zero_columns && self.witness.is_some() && self.only_corner_differs != Some(false)
    }
}

pub fn pi_structure_check(ps: &ParamSet) -> Result<PiStructureReport> {
    let ParamSet { p, k, n, k0 } = *ps;
    if n < (p - 1) * k + p || k % p == 0 {
        return Err(Error::ParameterDomain(format!(
            "need n >= (p-1)k + p and p not dividing k, got {ps:?}"
        )));
    }
    let e = ps.e();
    let primed = e >= k;
    let pi = DepthMatrix::pi(ps, e, p - 1, primed)?;
    let ring = pi.matrix.ring().clone();
    let size = e as usize + 1;
    let zero_columns = (0..e as usize).all(|j| pi.matrix.column(j).iter().all(MultiPoly::is_zero));

    let (mut only_corner_differs, mut corner_scalar) = (None, None);
    if primed {
        let plain = DepthMatrix::pi(ps, e, p - 1, false)?;
        let mut same = true;
        for i in 0..size {
            for j in 0..size {
                if (i, j) != (0, k as usize) && pi.entry(i, j) != plain.entry(i, j) {
                    same = false;
                }
            }
        }
        let diff = ring.sub(pi.entry(0, k as usize), plain.entry(0, k as usize));
        let rkp = Monomial::from_pairs([(r(k), p as u32)]);
        let scalar = diff.coefficient(&rkp).copied().unwrap_or(0);
        same &= diff == ring.term(scalar, rkp);
        only_corner_differs = Some(same);
        corner_scalar = Some(scalar);
    }

    // r_k = 1, r_i = 0 for k < i < k+k0, and r_{k+k0} in {1, 0}
    let vars: Vec<VarId> = (0..size)
        .flat_map(|i| pi.matrix.column(e as usize)[i].variables())
        .collect();
    let mut candidates = Vec::new();
    for top in [1, 0] {
        let mut values: BTreeMap<VarId, u64> = vars.iter().map(|&v| (v, 0)).collect();
        values.insert(r(k + k0), top);
        values.insert(r(k), 1);
        candidates.push(Specialization { values, seed: None });
    }
    let mut witness = None;
    let mut last_column_values = Vec::new();
    for sigma in candidates {
        let column = pi.matrix.column(e as usize);
        let values: Vec<u64> = column
            .iter()
            .map(|q| ring.eval(q, &sigma.values))
            .collect::<Result<_>>()?;
        let hit = values.iter().any(|&v| v != 0);
        last_column_values = values;
        if hit {
            witness = Some(sigma);
            break;
        }
    }
    Ok(PiStructureReport {
        params: *ps,
        e,
        primed,
        zero_columns,
        witness,
        last_column_values,
        only_corner_differs,
        corner_scalar,
    })
}

/// `c_{hj}` reduced at `K = k` equals entry `(0, j)` of `Pi_h`.
pub fn pi_equals_cbar_check(ps: &ParamSet, h: u64, j: u64) -> Result<bool> {
    let e = ps.e();
    if j > e {
        return Err(Error::ParameterDomain(format!("need j <= e(k,n) = {e}, got {j}")));
    }
    let n = int_ring().int(ps.n as i64);
    let table = c_table(h as usize, j as usize, ps.k, &n);
    let reduced = reduce_int_poly_mod_p(&table[h as usize][j as usize], ps.p, ps.k)?;
    let pi = DepthMatrix::pi(ps, e, h, false)?;
    Ok(&reduced == pi.entry(0, j as usize))
}

/// Multinomial coefficient `i! / (n_0! n_1! ...)` with `n_0 = i - sum`.
fn multinomial(i: u64, counts: &[u32]) -> BigInt {
    let mut rest = BigInt::from(i);
    let mut acc = BigInt::from(1);
    for &c in counts {
        acc *= num_integer::binomial(rest.clone(), BigInt::from(c));
        rest -= c;
    }
    acc
}

/// Partitions of `d` into parts `>= k`, as `(part, multiplicity)` lists.
fn partitions(d: u64, k: u64) -> Vec<Vec<(u64, u32)>> {
    fn go(rest: u64, max: u64, k: u64, cur: &mut Vec<(u64, u32)>, out: &mut Vec<Vec<(u64, u32)>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let top = max.min(rest);
        for part in (k..=top).rev() {
            for mult in 1..=(rest / part) as u32 {
                cur.push((part, mult));
                go(rest - part * u64::from(mult), part - 1, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(d, d, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `m_ij` by the multinomial formula, reduced mod `p`.
pub fn m_entry(p: u64, k: u64, i: u64, j: u64) -> Result<Poly> {
    let ring = poly_ring(p)?;
    Ok(m_entry_with(&ring, k, i, j, &partitions(j.saturating_sub(i), k)))
}

fn m_entry_with(ring: &PolyFp, k: u64, i: u64, j: u64, parts: &[Vec<(u64, u32)>]) -> Poly {
    if j <= i || j - i < k {
        return if i == j { ring.one() } else { ring.zero() };
    }
    let field = ring.base();
    let terms = parts.iter().filter_map(|part| {
        let used: u64 = part.iter().map(|&(_, c)| u64::from(c)).sum();
        if used > i {
            return None;
        }
        let counts: Vec<u32> = part.iter().map(|&(_, c)| c).collect();
        let c = field.from_bigint(&multinomial(i, &counts));
        let m = Monomial::from_pairs(part.iter().map(|&(l, c)| (r(l), c)));
        Some((m, c))
    });
    ring.from_terms(terms)
}

/// `m_ij` by summing `r_{l_1} ... r_{l_i}` over all compositions
/// `l_1 + ... + l_i = j - i` with every `l` either 0 or at least `k`.
pub fn m_entry_enumerated(p: u64, k: u64, i: u64, j: u64) -> Result<Poly> {
    let ring = poly_ring(p)?;
    if j < i {
        return Ok(ring.zero());
    }
    fn go(ring: &PolyFp, k: u64, slots: u64, rest: u64, acc: &Poly, out: &mut Poly) {
        if slots == 0 {
            if rest == 0 {
                *out = ring.add(out, acc);
            }
            return;
        }
        go(ring, k, slots - 1, rest, acc, out);
        for l in k.max(1)..=rest {
            let next = ring.mul(acc, &ring.var(r(l)));
            go(ring, k, slots - 1, rest - l, &next, out);
        }
    }
    let mut out = ring.zero();
    go(&ring, k, i, j - i, &ring.one(), &mut out);
    Ok(out)
}

/// The leading `N x N` block of `M`, indices `1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionMatrix {
    pub p: u64,
    pub k: u64,
    pub size: usize,
    m: PolyMatrix,
}

impl CompositionMatrix {
    pub fn new(p: u64, k: u64, size: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ParameterDomain("k must be positive".into()));
        }
        let ring = poly_ring(p)?;
        let mut cache: HashMap<u64, Vec<Vec<(u64, u32)>>> = HashMap::new();
        let mut m = PolyMatrix::zero(ring.clone(), size);
        for i in 1..=size as u64 {
            for j in (i + 1)..=size as u64 {
                let parts = cache.entry(j - i).or_insert_with(|| partitions(j - i, k));
                m.rows[i as usize - 1][j as usize - 1] = m_entry_with(&ring, k, i, j, parts);
            }
        }
        Ok(Self { p, k, size, m })
    }

    /// `m_ij`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        self.m.entry(i - 1, j - 1)
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.m
    }

    /// Row 1 of `M^h`: `m^{(h)}_{1j}` for `j = 1..=N`.
    pub fn power_row(&self, h: u32) -> Vec<Poly> {
        let ring = self.m.ring();
        let mut row = vec![ring.zero(); self.size];
        row[0] = ring.one();
        for _ in 0..h {
            row = self.m.left_apply(&row);
        }
        row
    }

    /// Checks `(I + M)^p = I + M^p` on the truncation.
    pub fn frobenius_check(&self) -> bool {
        let ring = self.m.ring().clone();
        let id = PolyMatrix::identity(ring, self.size);
        let i_plus_m = id.add(&self.m);
        let mut lhs = id.clone();
        let mut mp = id.clone();
        for _ in 0..self.p {
            lhs = lhs.mul(&i_plus_m);
            mp = mp.mul(&self.m);
        }
        lhs == id.add(&mp)
    }
}

/// `m^{(p)}_{1j}` for `j = 2..=N`, i.e. the coefficients of `x^j` in
/// `f^p`; cross-checked against repeated composition.
pub fn m_power_row(p: u64, k: u64, size: usize) -> Result<Vec<Poly>> {
    let cm = CompositionMatrix::new(p, k, size)?;
    let row: Vec<Poly> = cm.power_row(p as u32).into_iter().skip(1).collect();
    if size > k as usize {
        let fp = generic_f(p, k, size)?.series.pow_iterated(p as i64);
        if fp.coeffs() != row.as_slice() {
            return Err(Error::InternalInconsistency(format!(
                "matrix row and composition disagree for p = {p}, k = {k}, N = {size}"
            )));
        }
    } else if row.iter().any(|c| !c.is_zero()) {
        return Err(Error::InternalInconsistency("nonzero row below depth".into()));
    }
    Ok(row)
}

/// `m_{i,i+d} = m_{i+p,i+p+d}` when `d < pk` and `ik >= d + 1 - k`.
pub fn modp_periodicity_check(k: u64, p: u64, d: u64, i: u64) -> Result<bool> {
    if d == 0 || d >= p * k || i == 0 || i * k + k < d + 1 {
        return Err(Error::ParameterDomain(format!(
            "need 0 < d < pk and i >= (d+1-k)/k, got k = {k}, p = {p}, d = {d}, i = {i}"
        )));
    }
    Ok(m_entry(p, k, i, i + d)? == m_entry(p, k, i + p, i + p + d)?)
}

/// `m_{i,i+n+t}` split into the part free of `r_j` (`j >= n`) and the
/// coefficients of `r_{n+w}`, `w = 0..=t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpandSplit {
    pub a: Poly,
    pub linear: Vec<Poly>,
    /// The coefficients match `i r_{n+t}` and `i m_{i-1,i-1+t-w}`.
    pub matches_prediction: bool,
    /// `a + sum linear[w] r_{n+w}` gives back `m_{i,i+n+t}`.
    pub reconstructs: bool,
}

pub fn expand_split(p: u64, i: u64, t: u64, k: u64, n: u64) -> Result<ExpandSplit> {
    if i < 2 || t >= n || n < k {
        return Err(Error::ParameterDomain(format!(
            "need i >= 2, 0 <= t < n and n >= k, got i = {i}, t = {t}, n = {n}"
        )));
    }
    let ring = poly_ring(p)?;
    let field = *ring.base();
    let m = m_entry(p, k, i, i + n + t)?;
    let (a, linear) = split_linear(&ring, &m, n, t)?;
    let mut matches = true;
    for (w, coeff) in linear.iter().enumerate() {
        let w = w as u64;
        let expected = if w == t {
            ring.constant(i % p)
        } else if w + k <= t {
            ring.scale(&m_entry(p, k, i - 1, i - 1 + t - w)?, &field.reduce_i64(i as i64))
        } else {
            ring.zero()
        };
        matches &= *coeff == expected;
    }
    let rebuilt = linear.iter().enumerate().fold(a.clone(), |acc, (w, c)| {
        ring.add(&acc, &ring.mul(c, &ring.var(r(n + w as u64))))
    });
    Ok(ExpandSplit { a, linear, matches_prediction: matches, reconstructs: rebuilt == m })
}

/// Splits `q` as `C + sum_{w<=s} E_w r_{n+w}` where `C` is free of every
/// `r_j` with `j >= n`. Fails if some term is not of that shape.
fn split_linear(ring: &PolyFp, q: &Poly, n: u64, s: u64) -> Result<(Poly, Vec<Poly>)> {
    let mut c = Vec::new();
    let mut e: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); s as usize + 1];
    for (mono, coeff) in q.terms() {
        let high: Vec<(VarId, u32)> = mono
            .pairs()
            .iter()
            .copied()
            .filter(|(v, _)| matches!(v, VarId::R(j) if u64::from(*j) >= n))
            .collect();
        match high.as_slice() {
            [] => c.push((mono.clone(), *coeff)),
            [(VarId::R(j), 1)] if u64::from(*j) <= n + s => {
                let w = (u64::from(*j) - n) as usize;
                e[w].push((mono.split_off(VarId::R(*j)).0, *coeff));
            }
            _ => {
                return Err(Error::InternalInconsistency(format!(
                    "term {mono} is not linear in r_n .. r_{}",
                    n + s
                )))
            }
        }
    }
    Ok((ring.from_terms(c), e.into_iter().map(|t| ring.from_terms(t)).collect()))
}

/// The coefficient of `x^{1+s+n+(p-1)k}` in `f^p`, split into a part
/// `C` in `r_k .. r_{n-1}` and coefficients `E^(w)` of `r_{n+w}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsDecomposition {
    pub params: ParamSet,
    pub s: u64,
    pub c: Poly,
    pub e: Vec<Poly>,
}

impl EnsDecomposition {
    /// `E^(w)` only involves `r_k .. r_{k+s-w}`.
    pub fn degree_constraints_hold(&self) -> bool {
        let k = self.params.k;
        let c_ok = self.c.variables().iter().all(|v| matches!(v, VarId::R(j) if u64::from(*j) >= k && u64::from(*j) < self.params.n));
        let e_ok = self.e.iter().enumerate().all(|(w, q)| {
            q.variables()
                .iter()
                .all(|v| matches!(v, VarId::R(j) if u64::from(*j) >= k && u64::from(*j) <= k + self.s - w as u64))
        });
        c_ok && e_ok
    }

    pub fn all_e_vanish(&self) -> bool {
        self.e.iter().all(MultiPoly::is_zero)
    }
}

fn ens_domain(ps: &ParamSet, s: u64) -> Result<()> {
    if ps.n <= ps.k + s || ps.p * ps.k <= ps.k + s {
        return Err(Error::ParameterDomain(format!(
            "need n > k + s and pk > k + s, got s = {s} at {ps:?}"
        )));
    }
    Ok(())
}

pub fn ens_decompose(ps: &ParamSet, s: u64) -> Result<EnsDecomposition> {
    ens_domain(ps, s)?;
    let ParamSet { p, k, n, .. } = *ps;
    let target = (1 + s + n + (p - 1) * k) as usize;
    let cm = CompositionMatrix::new(p, k, target)?;
    let coeff = cm.power_row(p as u32)[target - 1].clone();
    let (c, e) = split_linear(cm.matrix().ring(), &coeff, n, s)?;
    Ok(EnsDecomposition { params: *ps, s, c, e })
}

/// `E^(w)` agrees between `n` and `n + p`.
pub fn ens_periodicity_check(ps: &ParamSet, s: u64) -> Result<bool> {
    let shifted = ParamSet::new(ps.p, ps.k, ps.n + ps.p)?;
    let a = ens_decompose(ps, s)?;
    let b = ens_decompose(&shifted, s)?;
    Ok(a.e == b.e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(p: u64, k: u64, n: u64) -> ParamSet {
        ParamSet::new(p, k, n).unwrap()
    }

    fn text(q: &Poly, p: u64) -> String {
        poly_ring(p).unwrap().fmt_elem(q)
    }

    #[test]
    fn chain_matrix_entries() {
        let a = DepthMatrix::a(5, 1, 9, 1, 1).unwrap();
        assert_eq!(text(a.entry(0, 0), 5), "3*r1");
        assert_eq!(text(a.entry(0, 1), 5), "2*r2");
        assert!(a.entry(1, 0).is_zero());
        assert_eq!(text(a.entry(1, 1), 5), "4*r1");
        // diagonal (n_h + i) r_k
        let a = DepthMatrix::a(7, 2, 13, 3, 3).unwrap();
        for i in 0..4 {
            let c = (a.n_h + i as i64).rem_euclid(7) as u64;
            assert_eq!(*a.entry(i, i), poly_ring(7).unwrap().scale(&poly_ring(7).unwrap().var(r(2)), &c));
        }
    }

    #[test]
    fn corrected_matrix() {
        // p = 3, k = 1, n = 6: k0 = 1, 6 = 2 - i mod 3 has no solution in 0..=1
        let q = ps(3, 1, 6);
        assert_eq!(q.e(), 1);
        for h in 1..=3 {
            let a = DepthMatrix::a(3, 1, 6, 1, h).unwrap();
            let b = DepthMatrix::a_prime(&q, h).unwrap();
            let top = (h - 1) + 6 + 1;
            let binom = (top * (top - 1) / 2) % 3;
            let ring = poly_ring(3).unwrap();
            let diff = ring.sub(b.entry(0, 1), a.entry(0, 1));
            assert_eq!(diff, ring.term(binom, Monomial::from_pairs([(r(1), 2)])));
            assert_eq!(a.entry(0, 0), b.entry(0, 0));
            assert_eq!(a.entry(1, 1), b.entry(1, 1));
        }
        assert!(DepthMatrix::a_prime(&ps(3, 1, 5), 1).is_err());
    }

    #[test]
    fn propagation_matches_chain() {
        for q in [ps(3, 2, 9), ps(3, 1, 7), ps(5, 1, 9), ps(3, 2, 8)] {
            if q.e() < q.k {
                assert_eq!(propagate_v(&q).unwrap(), chain_window(&q).unwrap(), "{q:?}");
            }
        }
        assert!(propagate_v(&ps(3, 1, 6)).is_err());
    }

    #[test]
    fn scalar_case() {
        let q = ps(3, 1, 8);
        assert_eq!(q.e(), 0);
        let v = propagate_v(&q).unwrap();
        let ring = poly_ring(3).unwrap();
        let diag = (1..=2u64).fold(ring.var(VarId::S(8)), |acc, h| {
            let c = ((h as i64 - 2) + 8).rem_euclid(3) as u64;
            ring.mul(&acc, &ring.scale(&ring.var(r(1)), &c))
        });
        assert_eq!(v, vec![diag]);
    }

    #[test]
    fn pi_structure() {
        let r = pi_structure_check(&ps(3, 1, 7)).unwrap();
        assert!(r.pass());
        let r = pi_structure_check(&ps(3, 1, 6)).unwrap();
        assert!(r.primed && r.pass());
        let r = pi_structure_check(&ps(5, 2, 14)).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(pi_structure_check(&ps(3, 1, 4)).is_err());
        assert!(pi_structure_check(&ps(3, 3, 12)).is_err());
    }

    #[test]
    fn pi_and_c_agree() {
        assert!(pi_equals_cbar_check(&ps(3, 1, 7), 1, 0).unwrap());
        assert!(pi_equals_cbar_check(&ps(3, 1, 7), 0, 0).unwrap());
        let q = ps(5, 2, 13);
        for h in 0..=4 {
            for j in 0..=q.e() {
                assert!(pi_equals_cbar_check(&q, h, j).unwrap(), "h = {h}, j = {j}");
            }
        }
    }

    #[test]
    fn pi_shift_property() {
        // pi_{hij}(n) = pi_{h,0,j-i}(n+i) at a common size
        let (p, k, size) = (5u64, 2u64, 3u64);
        for n in 9..14 {
            for h in 1..4 {
                let base = DepthMatrix::pi(&ps(p, k, n), size - 1, h, false).unwrap();
                for i in 0..size as usize {
                    let shifted = DepthMatrix::pi(&ps(p, k, n + i as u64), size - 1, h, false).unwrap();
                    for j in i..size as usize {
                        assert_eq!(base.entry(i, j), shifted.entry(0, j - i));
                    }
                }
            }
        }
    }

    #[test]
    fn composition_matrix_entries() {
        assert!(m_entry(3, 2, 1, 2).unwrap().is_zero());
        for d in 2..7 {
            assert_eq!(m_entry(3, 2, 1, 1 + d).unwrap(), poly_ring(3).unwrap().var(r(d)));
        }
        assert_eq!(text(&m_entry(5, 2, 2, 4).unwrap(), 5), "2*r2");
        for p in [2, 3] {
            for k in 1..=3 {
                for i in 1..=4 {
                    for j in i..=i + 7 {
                        assert_eq!(m_entry(p, k, i, j).unwrap(), m_entry_enumerated(p, k, i, j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn power_rows() {
        let row = m_power_row(2, 1, 5).unwrap();
        assert_eq!(text(&row[2], 2), "r1^3 + r1*r2");
        assert_eq!(text(&row[3], 2), "r1^2*r2 + r2^2");
        for (p, k) in [(2, 1), (3, 1), (3, 2), (2, 3)] {
            let depth = crate::bounds::pth_power_depth(p, k) as usize;
            let row = m_power_row(p, k, depth + 2).unwrap();
            assert!(row[..depth - 1].iter().all(MultiPoly::is_zero));
            assert!(!row[depth - 1].is_zero());
        }
    }

    #[test]
    fn frobenius_on_truncations() {
        for (p, k, n) in [(2, 1, 8), (3, 1, 7), (3, 2, 9)] {
            assert!(CompositionMatrix::new(p, k, n).unwrap().frobenius_check());
        }
    }

    #[test]
    fn modp_examples() {
        assert!(modp_periodicity_check(1, 2, 1, 1).unwrap());
        assert!(modp_periodicity_check(2, 3, 3, 1).unwrap());
        assert!(modp_periodicity_check(1, 2, 2, 1).is_err());
    }

    #[test]
    fn expand_examples() {
        for (p, k, n) in [(2, 1, 4), (3, 1, 5), (3, 2, 6), (5, 2, 7)] {
            for i in 2..5 {
                for t in 0..n {
                    let sp = expand_split(p, i, t, k, n).unwrap();
                    assert!(sp.matches_prediction && sp.reconstructs, "p={p} k={k} n={n} i={i} t={t}");
                    if t < k {
                        assert!(sp.linear[..t as usize].iter().all(MultiPoly::is_zero));
                    }
                }
            }
        }
        assert!(expand_split(3, 1, 0, 1, 4).is_err());
    }

    #[test]
    fn ens_examples() {
        let d = ens_decompose(&ps(2, 1, 3), 0).unwrap();
        assert_eq!(text(&d.c, 2), "r1^2*r2 + r2^2");
        assert!(d.e[0].is_zero());
        assert!(ens_periodicity_check(&ps(2, 1, 3), 0).unwrap());
        assert!(ens_periodicity_check(&ps(3, 1, 4), 1).unwrap());
        assert!(ens_decompose(&ps(3, 1, 2), 1).is_err());
        let d = ens_decompose(&ps(3, 2, 7), 2).unwrap();
        assert!(d.degree_constraints_hold());
    }
}
