//! Series with indeterminate coefficients over `F_p[r_k, r_{k+1}, .., s_n, ..]`.
//!
//! Computing with [`generic_f`] and [`generic_u1`] settles a statement for
//! every specialization at once; the second half of the module works with
//! concrete specializations over `F_p`, including the witness search.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::ParamSet;
use crate::coeffring::{MultiPoly, PolyRing, PrimeField, Ring, VarId};
use crate::error::{Error, Result};
use crate::nottingham::{DepthResult, Series};

/// `F_p[r_*, s_*]`.
pub type PolyFp = PolyRing<PrimeField>;
/// A series with polynomial coefficients over `F_p`.
pub type PolySeries = Series<PolyFp>;
/// A series over `F_p`.
pub type FpSeries = Series<PrimeField>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// Coefficient of `x^{j+1}` is `r_j` for `j >= k`.
    F,
    /// Coefficient of `x^{j+1}` is `s_j` for `j >= n`.
    U1,
    Derived,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericSeries {
    pub role: Role,
    pub series: PolySeries,
}

pub fn poly_ring(p: u64) -> Result<PolyFp> {
    Ok(PolyRing::new(PrimeField::new(p)?))
}

fn indeterminate_series(
    p: u64,
    depth: u64,
    precision: usize,
    var: fn(u32) -> VarId,
    role: Role,
) -> Result<GenericSeries> {
    if precision < depth as usize + 1 {
        return Err(Error::ParameterDomain(format!(
            "precision {precision} cannot show depth {depth}"
        )));
    }
    let ring = poly_ring(p)?;
    let terms: Vec<_> = (depth as usize..precision)
        .map(|j| (j + 1, ring.var(var(j as u32))))
        .collect();
    Ok(GenericSeries { role, series: Series::from_terms(ring, precision, terms) })
}

/// `x + r_k x^{k+1} + ... + r_{N-1} x^N`.
pub fn generic_f(p: u64, k: u64, precision: usize) -> Result<GenericSeries> {
    indeterminate_series(p, k, precision, VarId::R, Role::F)
}

/// `x + s_n x^{n+1} + ... + s_{N-1} x^N`.
pub fn generic_u1(p: u64, n: u64, precision: usize) -> Result<GenericSeries> {
    indeterminate_series(p, n, precision, VarId::S, Role::U1)
}

/// `g = u_1 f`.
pub fn generic_g(ps: &ParamSet, precision: usize) -> Result<GenericSeries> {
    let f = generic_f(ps.p, ps.k, precision)?;
    let u = generic_u1(ps.p, ps.n, precision)?;
    Ok(GenericSeries { role: Role::Derived, series: u.series.compose(&f.series)? })
}

/// Coefficients of `f^p` that involve some `r_j` with `j >= n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientVerdict {
    pub exponent: usize,
    pub offending: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub params: ParamSet,
    pub bound: u64,
    pub verdicts: Vec<CoefficientVerdict>,
    pub pass: bool,
}

/// Checks that the coefficients of `x^2 ..= x^B` in `f^p` never mention
/// `r_j` for `j >= n`, where `B` is the theorem bound.
pub fn verify_independence(ps: &ParamSet) -> Result<IndependenceReport> {
    let bound = ps.theorem_bound();
    let precision = bound as usize;
    let f = generic_f(ps.p, ps.k, precision)?;
    let fp = f.series.pow(ps.p as i64);
    let verdicts: Vec<_> = (2..=precision)
        .map(|i| {
            let offending = fp
                .coeff(i)
                .variables()
                .into_iter()
                .filter(|v| matches!(v, VarId::R(j) if u64::from(*j) >= ps.n))
                .map(|v| v.to_string())
                .collect();
            CoefficientVerdict { exponent: i, offending }
        })
        .collect();
    let pass = verdicts.iter().all(|v| v.offending.is_empty());
    Ok(IndependenceReport { params: *ps, bound, verdicts, pass })
}

/// `u_1, .., u_p` with `u_{i+1} = [u_i, f]`.
pub fn u_chain(ps: &ParamSet, precision: usize) -> Result<Vec<PolySeries>> {
    let f = generic_f(ps.p, ps.k, precision)?.series;
    let mut chain = vec![generic_u1(ps.p, ps.n, precision)?.series];
    for _ in 1..ps.p {
        let next = chain.last().expect("nonempty").commutator(&f)?;
        chain.push(next);
    }
    Ok(chain)
}

/// Comparison of `g^p f^{-p}` with the end of the commutator chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpCongruenceReport {
    pub params: ParamSet,
    /// Coefficients are compared up to `x^precision`, `n + (p-1)k + p`.
    pub precision: usize,
    /// `g^p f^{-p} = u_p` up to `x^precision`.
    pub literal: bool,
    /// `g^p f^{-p} = u_p u_{p+1}` up to `x^precision`.
    pub corrected: bool,
    /// Depth of `(g^p f^{-p})^{-1} u_p`.
    pub discrepancy_depth: DepthResult,
    /// Depth of `u_{p+1} = [u_p, f]`.
    pub next_depth: DepthResult,
}

impl UpCongruenceReport {
    /// The corrected identity holds, and `u_p` alone is right up to the
    /// depth of `u_{p+1}`.
    pub fn holds(&self) -> bool {
        self.corrected && self.discrepancy_depth.lower_bound() >= self.next_depth.lower_bound()
    }
}

/// Compares `g^p f^{-p}` with `u_p` modulo `x^{n+(p-1)k+p+1}`.
///
/// Collecting `(u_1 f)^p` leaves one extra factor `u_{p+1}`, whose depth is
/// only guaranteed to be `n + pk`; for `k < p` it can fall inside the
/// compared range, so both the bare and the corrected forms are reported.
pub fn verify_up_congruence(ps: &ParamSet) -> Result<UpCongruenceReport> {
    let ParamSet { p, k, n, .. } = *ps;
    if n < (p - 1) * k + p {
        return Err(Error::ParameterDomain(format!(
            "need n >= (p-1)k + p = {}, got n = {n}",
            (p - 1) * k + p
        )));
    }
    let precision = (n + (p - 1) * k + p) as usize;
    let f = generic_f(p, k, precision)?.series;
    let u = generic_u1(p, n, precision)?.series;
    let g = u.compose(&f)?;
    let lhs = g.pow(p as i64).compose(&f.pow(-(p as i64)))?;
    let chain = u_chain(ps, precision)?;
    let up = &chain[p as usize - 1];
    let next = up.commutator(&f)?;
    Ok(UpCongruenceReport {
        params: *ps,
        precision,
        literal: lhs == *up,
        corrected: lhs == up.compose(&next)?,
        discrepancy_depth: lhs.inverse().compose(up)?.depth(),
        next_depth: next.depth(),
    })
}

/// An assignment of `F_p` values to variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub values: BTreeMap<VarId, u64>,
    pub seed: Option<u64>,
}

impl Specialization {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u64)>) -> Self {
        Self { values: pairs.into_iter().collect(), seed: None }
    }

    /// Uniform values for `vars`, nonzero on `nonzero`.
    pub fn random(p: u64, vars: &[VarId], nonzero: &[VarId], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = vars
            .iter()
            .map(|&v| {
                let x = if nonzero.contains(&v) { rng.gen_range(1..p) } else { rng.gen_range(0..p) };
                (v, x)
            })
            .collect();
        Self { values, seed: Some(seed) }
    }
}

/// Coefficientwise evaluation of a polynomial series.
pub fn specialize_series(s: &PolySeries, sigma: &Specialization) -> Result<FpSeries> {
    let ring = s.ring().clone();
    let field = *ring.base();
    s.try_map_ring(field, |c| ring.eval(c, &sigma.values))
}

impl Serialize for VarId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Where a witness candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateSource {
    /// `f = x + x^{k+1}`, `g = (x + c x^{n+1}) f`.
    Monomial,
    /// `g' = (x + x^{k+k0+1}) f` paired with `h = (x + c x^{n+1}) f`.
    MonomialPair,
    /// `r_k = r_{k+k0} = 1`, intermediate `r_i = 0`.
    Recipe,
    Random,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub params: ParamSet,
    pub f: FpSeries,
    pub g: FpSeries,
    /// `D(g^p f^{-p})`, equal to the theorem bound.
    pub depth: u64,
    pub source: CandidateSource,
    /// 1-based position in the enumeration order.
    pub index: usize,
}

struct Candidate {
    f: FpSeries,
    g: FpSeries,
    source: CandidateSource,
}

fn monomial(field: PrimeField, precision: usize, exp: u64, c: u64) -> FpSeries {
    Series::from_terms(field, precision, [(exp as usize, c)])
}

fn structured_candidates(ps: &ParamSet, precision: usize) -> Vec<Candidate> {
    let field = PrimeField::new(ps.p).expect("validated");
    let ParamSet { p, k, n, k0 } = *ps;
    let mut out = Vec::new();
    let f = monomial(field, precision, k + 1, 1);
    for c in 1..p {
        let u = monomial(field, precision, n + 1, c);
        let g = u.compose(&f).expect("same ring");
        out.push(Candidate { f: f.clone(), g, source: CandidateSource::Monomial });
    }
    if n < k + k0 {
        let g0 = monomial(field, precision, k + k0 + 1, 1).compose(&f).expect("same ring");
        for c in 1..p {
            let h = monomial(field, precision, n + 1, c).compose(&f).expect("same ring");
            out.push(Candidate { f: g0.clone(), g: h, source: CandidateSource::MonomialPair });
        }
    }
    // r_k = r_{k+k0} = 1 with optional r_{2k}, and monomial u
    for extra in 0..2u64 {
        let mut terms = vec![(k as usize + 1, 1u64)];
        if k0 > 0 {
            terms.push(((k + k0) as usize + 1, 1));
        }
        if extra == 1 {
            if 2 * k == k + k0 {
                continue;
            }
            terms.push((2 * k as usize + 1, 1));
        }
        let f = Series::from_terms(field, precision, terms);
        for c in 1..p {
            let u = monomial(field, precision, n + 1, c);
            let g = u.compose(&f).expect("same ring");
            out.push(Candidate { f: f.clone(), g, source: CandidateSource::Recipe });
        }
    }
    out
}

fn random_pair(ps: &ParamSet, precision: usize, rng: &mut ChaCha8Rng) -> (FpSeries, FpSeries) {
    let field = PrimeField::new(ps.p).expect("validated");
    let mut draw = |depth: u64| {
        let terms: Vec<_> = ((depth as usize + 1)..=precision)
            .map(|e| {
                let c = if e == depth as usize + 1 { rng.gen_range(1..ps.p) } else { rng.gen_range(0..ps.p) };
                (e, c)
            })
            .collect();
        Series::from_terms(field, precision, terms)
    };
    let f = draw(ps.k);
    let u = draw(ps.n);
    let g = u.compose(&f).expect("same ring");
    (f, g)
}

/// Depth of `g^m f^{-m}` for `m = p^e`, if `D(f) = k` and `D(g f^{-1}) = n`
/// hold exactly; `None` when the hypotheses fail.
pub fn power_quotient_depth(ps: &ParamSet, f: &FpSeries, g: &FpSeries, m: u64) -> Option<DepthResult> {
    if f.depth() != DepthResult::Exact(ps.k as usize) {
        return None;
    }
    let u = g.compose(&f.inverse()).ok()?;
    if u.depth() != DepthResult::Exact(ps.n as usize) {
        return None;
    }
    let m = m as i64;
    g.pow(m).compose(&f.pow(-m)).ok().map(|q| q.depth())
}

/// Searches for `f, g` over `F_p` with `D(f) = k`, `D(g f^{-1}) = n` and
/// `D(g^p f^{-p})` equal to the theorem bound. Structured candidates come
/// first, then `budget` random ones drawn from `seed`.
pub fn witness_search(ps: &ParamSet, budget: usize, seed: u64) -> Result<Witness> {
    let bound = ps.theorem_bound();
    let precision = (bound + 1 + ps.p) as usize;
    let mut candidates = structured_candidates(ps, precision);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let (f, g) = random_pair(ps, precision, &mut rng);
        candidates.push(Candidate { f, g, source: CandidateSource::Random });
    }
    let hit = candidates.par_iter().enumerate().find_first(|(_, c)| {
        power_quotient_depth(ps, &c.f, &c.g, ps.p) == Some(DepthResult::Exact(bound as usize))
    });
    match hit {
        Some((i, c)) => Ok(Witness {
            params: *ps,
            f: c.f.clone(),
            g: c.g.clone(),
            depth: bound,
            source: c.source,
            index: i + 1,
        }),
        None => Err(Error::WitnessNotFound { tried: candidates.len() }),
    }
}

/// Outcome of sampling random pairs against a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub params: ParamSet,
    pub power: u64,
    pub bound: u64,
    pub seed: u64,
    pub tested: usize,
    pub discarded: usize,
    pub violations: usize,
    /// Smallest depth seen among tested samples.
    pub min_observed: Option<DepthResult>,
}

/// Draws `samples` random pairs with the hypothesis depths and checks
/// `D(g^{p^m} f^{-p^m}) >= bound(m)`.
pub fn sampled_power_check(ps: &ParamSet, m: u32, samples: usize, seed: u64) -> Result<SampleReport> {
    let bound = ps.corollary_bound(m)?;
    let power = ps.p.pow(m);
    let precision = bound as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples).map(|_| random_pair(ps, precision, &mut rng)).collect();
    let depths: Vec<_> = pairs
        .par_iter()
        .map(|(f, g)| power_quotient_depth(ps, f, g, power))
        .collect();
    let tested: Vec<DepthResult> = depths.iter().flatten().copied().collect();
    Ok(SampleReport {
        params: *ps,
        power,
        bound,
        seed,
        tested: tested.len(),
        discarded: samples - tested.len(),
        violations: tested.iter().filter(|d| !d.is_at_least(bound as usize)).count(),
        min_observed: tested.iter().copied().min_by_key(|d| d.lower_bound()),
    })
}

/// Coefficient of `x^i` in a polynomial series, for tests and reports.
pub fn coefficient_text(s: &PolySeries, i: usize) -> String {
    s.ring().fmt_elem(&s.coeff(i))
}

/// Every variable occurring in the coefficients of `s`.
pub fn series_variables(s: &PolySeries) -> Vec<VarId> {
    let mut vars: Vec<VarId> = s
        .coeffs()
        .iter()
        .flat_map(MultiPoly::variables)
        .collect();
    vars.sort();
    vars.dedup();
    vars
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(p: u64, k: u64, n: u64) -> ParamSet {
        ParamSet::new(p, k, n).unwrap()
    }

    #[test]
    fn generic_series_shapes() {
        let f = generic_f(2, 1, 4).unwrap().series;
        assert_eq!(f.to_text(), "x + r1*x^2 + r2*x^3 + r3*x^4 + O(x^5)");
        let f = generic_f(3, 2, 3).unwrap().series;
        assert_eq!(f.to_text(), "x + r2*x^3 + O(x^4)");
        assert_eq!(f.depth(), DepthResult::Exact(2));
        let u = generic_u1(2, 1, 3).unwrap().series;
        assert_eq!(u.to_text(), "x + s1*x^2 + s2*x^3 + O(x^4)");
        let u = generic_u1(3, 5, 6).unwrap().series;
        assert_eq!(u.to_text(), "x + s5*x^6 + O(x^7)");
        assert_eq!(u.depth(), DepthResult::Exact(5));
        assert!(generic_f(3, 4, 4).is_err());
    }

    #[test]
    fn square_of_generic_series_in_characteristic_two() {
        let f2 = generic_f(2, 1, 4).unwrap().series.pow(2);
        assert_eq!(coefficient_text(&f2, 2), "0");
        assert_eq!(coefficient_text(&f2, 3), "0");
        assert_eq!(coefficient_text(&f2, 4), "r1^3 + r1*r2");
    }

    #[test]
    fn independence_small_cases() {
        assert!(verify_independence(&ps(2, 1, 3)).unwrap().pass);
        assert!(verify_independence(&ps(2, 1, 2)).unwrap().pass);
        for n in 1..=8 {
            assert!(verify_independence(&ps(3, 1, n)).unwrap().pass, "n = {n}");
        }
    }

    #[test]
    fn chain_depths() {
        let q = ps(3, 1, 5);
        let chain = u_chain(&q, q.theorem_bound() as usize + 1).unwrap();
        assert_eq!(chain[1].depth(), DepthResult::Exact(6));
        assert_eq!(chain[0], generic_u1(3, 5, q.theorem_bound() as usize + 1).unwrap().series);

        let q = ps(3, 3, 6);
        let chain = u_chain(&q, 12).unwrap();
        assert!(chain[1].depth().is_at_least(10));
        for (i, u) in chain.iter().enumerate() {
            assert!(u.depth().is_at_least((q.n + i as u64 * q.k) as usize));
        }
    }

    #[test]
    fn up_congruence() {
        let r = verify_up_congruence(&ps(2, 1, 3)).unwrap();
        assert!(r.literal && r.corrected && r.holds());
        let r = verify_up_congruence(&ps(3, 1, 7)).unwrap();
        assert!(r.literal && r.holds());
        // u_4 has depth 9 < 10, so only the corrected form survives
        let r = verify_up_congruence(&ps(3, 1, 5)).unwrap();
        assert!(!r.literal);
        assert!(r.corrected && r.holds());
        assert_eq!(r.discrepancy_depth, DepthResult::Exact(9));
        assert_eq!(r.next_depth, DepthResult::Exact(9));
        assert!(matches!(verify_up_congruence(&ps(3, 1, 4)), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn specialization_examples() {
        let f = generic_f(2, 1, 4).unwrap().series;
        let sigma = Specialization::from_pairs([(VarId::R(1), 1), (VarId::R(2), 0), (VarId::R(3), 0)]);
        assert_eq!(specialize_series(&f, &sigma).unwrap().to_text(), "x + x^2 + O(x^5)");
        let sigma = Specialization::from_pairs([(VarId::R(1), 1), (VarId::R(2), 1), (VarId::R(3), 0)]);
        assert_eq!(specialize_series(&f, &sigma).unwrap().to_text(), "x + x^2 + x^3 + O(x^5)");
        let partial = Specialization::from_pairs([(VarId::R(1), 1)]);
        assert_eq!(
            specialize_series(&f, &partial),
            Err(Error::IncompleteSpecialization(VarId::R(2)))
        );
    }

    #[test]
    fn witness_examples() {
        let w = witness_search(&ps(2, 1, 1), 0, 0).unwrap();
        assert_eq!(w.f.to_text(), "x + x^2 + O(x^7)");
        assert_eq!(w.g.to_text(), "x + x^4 + O(x^7)");
        assert_eq!(w.depth, 3);
        assert_eq!(w.source, CandidateSource::Monomial);

        let w = witness_search(&ps(3, 1, 2), 0, 0).unwrap();
        assert_eq!(w.depth, 4);
        assert_ne!(w.source, CandidateSource::Random);

        let w = witness_search(&ps(2, 1, 2), 50, 7).unwrap();
        assert_eq!(w.depth, 3);
        assert_eq!(power_quotient_depth(&w.params, &w.f, &w.g, 2), Some(DepthResult::Exact(3)));
    }

    #[test]
    fn witness_search_is_deterministic() {
        let q = ps(3, 2, 9);
        let a = witness_search(&q, 30, 11).unwrap();
        let b = witness_search(&q, 30, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fourth_power_example() {
        let field = PrimeField::new(2).unwrap();
        let f = Series::from_terms(field, 17, [(2, 1)]);
        let g = Series::from_terms(field, 17, [(4, 1)]);
        let d = power_quotient_depth(&ps(2, 1, 1), &f, &g, 4).unwrap();
        assert_eq!(d, DepthResult::Exact(15));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn specialization_is_a_homomorphism(p in prop::sample::select(vec![2u64, 3, 5]), k in 1u64..3, seed: u64) {
            let n = 8usize;
            let f = generic_f(p, k, n).unwrap().series;
            let u = generic_u1(p, k + 1, n).unwrap().series;
            let vars: Vec<_> = series_variables(&f).into_iter().chain(series_variables(&u)).collect();
            let sigma = Specialization::random(p, &vars, &[], seed);
            let fu = f.compose(&u).unwrap();
            prop_assert_eq!(
                specialize_series(&fu, &sigma).unwrap(),
                specialize_series(&f, &sigma).unwrap().compose(&specialize_series(&u, &sigma).unwrap()).unwrap()
            );
            prop_assert_eq!(
                specialize_series(&f.pow(2), &sigma).unwrap(),
                specialize_series(&f, &sigma).unwrap().pow(2)
            );
        }

        #[test]
        fn specialized_bound(p in prop::sample::select(vec![2u64, 3, 5]), k in 1u64..4, dn in 0u64..6, seed: u64) {
            let q = ps(p, k, k + dn);
            let r = sampled_power_check(&q, 1, 4, seed).unwrap();
            prop_assert_eq!(r.violations, 0);
        }
    }
}
