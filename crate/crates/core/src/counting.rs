//! Closed-form counts of cyclic p^n-extensions with conductor dividing P^α,
//! and brute-force oracles that recount the same objects.

use std::collections::{BTreeMap, HashMap};
use std::time::Duration;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{phi_prime_power, AlgebraError, FiniteField, Poly, PolyRing, ResidueRing};
use crate::asw::{conductor_exponent, Asw, AswError};
use crate::witt::{WittError, WittVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Asw(#[from] AswError),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration of {needed} exceeds cap {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error("identity failed: {0}")]
    Mismatch(String),
    #[error("class count did not stabilize within {rounds} rounds: {counts:?}")]
    Unstable { rounds: usize, counts: Vec<u64> },
}

impl CountError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            CountError::CapExceeded { .. } | CountError::Algebra(AlgebraError::CapExceeded { .. })
        )
    }
}

/// (q = p^s, d, α, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CountParams {
    pub p: u32,
    pub s: u32,
    pub d: u32,
    pub alpha: u32,
    pub n: u32,
}

impl CountParams {
    pub fn new(p: u32, s: u32, d: u32, alpha: u32, n: u32) -> Result<Self, CountError> {
        if !crate::algebra::is_prime(p as u64) {
            return Err(CountError::InvalidParams(format!("p = {p} is not prime")));
        }
        if s == 0 || d == 0 || alpha == 0 || n == 0 {
            return Err(CountError::InvalidParams("s, d, α and n must be positive".into()));
        }
        Ok(CountParams { p, s, d, alpha, n })
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.s)
    }

    pub fn with_alpha(self, alpha: u32) -> Self {
        CountParams { alpha, ..self }
    }

    pub fn with_n(self, n: u32) -> Self {
        CountParams { n, ..self }
    }

    fn pn(&self, k: u32) -> u64 {
        (self.p as u64).pow(k)
    }

    /// q^{d e}.
    fn qd_pow(&self, e: u64) -> BigUint {
        BigUint::from(self.q()).pow((self.d as u64 * e) as u32)
    }

    pub fn field(&self) -> Result<FiniteField, CountError> {
        Ok(FiniteField::new(self.p, self.s)?)
    }
}

/// Pass, fail, or not run because a cap was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One formula-versus-oracle comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub check_id: String,
    pub params: serde_json::Value,
    pub formula_value: Option<BigInt>,
    pub oracle_value: Option<BigInt>,
    pub identity_checks: Vec<(String, bool)>,
    pub note: Option<String>,
    pub wall_time: Duration,
    skipped: bool,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>, params: serde_json::Value) -> Self {
        VerificationReport {
            check_id: check_id.into(),
            params,
            formula_value: None,
            oracle_value: None,
            identity_checks: Vec::new(),
            note: None,
            wall_time: Duration::ZERO,
            skipped: false,
        }
    }

    pub fn formula(mut self, v: impl Into<BigInt>) -> Self {
        self.formula_value = Some(v.into());
        self
    }

    pub fn oracle(mut self, v: impl Into<BigInt>) -> Self {
        self.oracle_value = Some(v.into());
        self
    }

    pub fn check(mut self, name: impl Into<String>, ok: bool) -> Self {
        self.identity_checks.push((name.into(), ok));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.skipped = true;
        self.note = Some(reason.into());
        self
    }

    pub fn status(&self) -> Status {
        if self.skipped {
            return Status::Skipped;
        }
        let values_agree = match (&self.formula_value, &self.oracle_value) {
            (Some(f), Some(o)) => f == o,
            _ => true,
        };
        if values_agree && self.identity_checks.iter().all(|(_, ok)| *ok) {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn exact_div(num: BigUint, den: u64, what: &str) -> Result<BigUint, CountError> {
    let (quot, rem) = num.div_rem(&BigUint::from(den));
    if !rem.is_zero() {
        return Err(CountError::Mismatch(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(quot)
}

/// Number of cyclic subgroups of order p^n in (F_q[T]/P^α)^*.
pub fn v_n(params: &CountParams) -> Result<BigUint, CountError> {
    let a = params.alpha as u64;
    if a <= params.pn(params.n - 1) {
        return Ok(BigUint::zero());
    }
    let hi = params.qd_pow(a - ceil_div(a, params.pn(params.n)));
    let lo = params.qd_pow(a - ceil_div(a, params.pn(params.n - 1)));
    let phi_pn = params.pn(params.n - 1) * (params.p as u64 - 1);
    exact_div(hi - lo, phi_pn, "v_n")
}

/// Σ_{i=r}^{s} Φ(P^i) and the telescoped value q^{ds} - q^{d(r-1)}.
pub fn telescoping(params: &CountParams, r: u32, s: u32) -> (BigUint, BigUint) {
    let sum = (r..=s).map(|i| phi_prime_power(params.q(), params.d, i)).sum();
    let closed = params.qd_pow(s as u64) - params.qd_pow(r as u64 - 1);
    (sum, closed)
}

fn w_sum(params: &CountParams, alpha: u32) -> BigUint {
    let p = params.p;
    (1..alpha)
        .filter(|l| l % p != 0)
        .map(|l| phi_prime_power(params.q(), params.d, l - l / p))
        .sum()
}

fn w_closed(params: &CountParams, alpha: u32) -> BigUint {
    let am1 = alpha as u64 - 1;
    params.qd_pow(am1 - am1 / params.p as u64) - 1u32
}

/// w(α) = Σ_{1 ≤ λ < α, p ∤ λ} Φ(P^{λ-⌊λ/p⌋}); the sum and closed forms must agree.
pub fn w(params: &CountParams, alpha: u32) -> Result<BigUint, CountError> {
    if alpha == 0 {
        return Err(CountError::InvalidParams("w needs α ≥ 1".into()));
    }
    let sum = w_sum(params, alpha);
    let closed = w_closed(params, alpha);
    if sum != closed {
        return Err(CountError::Mismatch(format!("w({alpha}): sum {sum} != closed form {closed}")));
    }
    Ok(sum)
}

/// t_1(α) = w(α)/(p-1), checked against v_1(α).
pub fn t1(params: &CountParams, alpha: u32) -> Result<BigUint, CountError> {
    let t = exact_div(w(params, alpha)?, params.p as u64 - 1, "t_1")?;
    let v1 = v_n(&params.with_alpha(alpha).with_n(1))?;
    if t != v1 {
        return Err(CountError::Mismatch(format!("t_1({alpha}) = {t} but v_1({alpha}) = {v1}")));
    }
    Ok(t)
}

/// δ_i = ⌊(α-1)/p^{n-i}⌋ + 1 for i = 1..n.
pub fn deltas(params: &CountParams) -> Vec<u32> {
    (1..=params.n)
        .map(|i| ((params.alpha as u64 - 1) / params.pn(params.n - i) + 1) as u32)
        .collect()
}

/// s_n(α) = w(δ_1) Π_{i≥2} (w(δ_i) + 1), checked against p^{n-1}(p-1) v_n(α).
pub fn s_n(params: &CountParams) -> Result<BigUint, CountError> {
    let ds = deltas(params);
    let mut s = w(params, ds[0])?;
    for &d in &ds[1..] {
        s *= w(params, d)? + 1u32;
    }
    let rhs = v_n(params)? * params.pn(params.n - 1) * (params.p as u64 - 1);
    if s != rhs {
        return Err(CountError::Mismatch(format!("s_n = {s} but p^(n-1)(p-1) v_n = {rhs}")));
    }
    Ok(s)
}

/// (⌊⌊α/p^s⌋/p⌋, ⌊⌊α/p⌋/p^s⌋, ⌊α/p^{s+1}⌋), all equal.
pub fn floor_nesting(p: u32, alpha: i64, s: u32) -> Result<i64, CountError> {
    let ps = (p as i64).pow(s);
    let a = alpha.div_euclid(ps).div_euclid(p as i64);
    let b = alpha.div_euclid(p as i64).div_euclid(ps);
    let c = alpha.div_euclid(ps * p as i64);
    if a != b || b != c {
        return Err(CountError::Mismatch(format!("floor identity at p={p} α={alpha} s={s}: {a} {b} {c}")));
    }
    Ok(a)
}

/// ⌈α/p^s⌉ = ⌊(α-1)/p^s⌋ + 1.
pub fn ceil_via_floor(p: u32, alpha: i64, s: u32) -> Result<i64, CountError> {
    let ps = (p as i64).pow(s);
    let ceil = -((-alpha).div_euclid(ps));
    let rhs = (alpha - 1).div_euclid(ps) + 1;
    if ceil != rhs {
        return Err(CountError::Mismatch(format!("ceil identity at p={p} α={alpha} s={s}: {ceil} vs {rhs}")));
    }
    Ok(ceil)
}

/// v_n(α)/v_{n-1}(δ) and q^{d(α-⌈α/p⌉)}/p; `None` when v_{n-1}(δ) = 0.
pub fn ratio_check(params: &CountParams) -> Result<Option<(BigRational, BigRational)>, CountError> {
    if params.n < 2 {
        return Err(CountError::InvalidParams("ratio check needs n ≥ 2".into()));
    }
    let a = params.alpha as u64;
    let delta = ((a - 1) / params.p as u64 + 1) as u32;
    let den = v_n(&params.with_alpha(delta).with_n(params.n - 1))?;
    if den.is_zero() {
        return Ok(None);
    }
    let lhs = BigRational::new(BigInt::from(v_n(params)?), BigInt::from(den));
    let rhs = BigRational::new(
        BigInt::from(params.qd_pow(a - ceil_div(a, params.p as u64))),
        BigInt::from(params.p),
    );
    if lhs != rhs {
        return Err(CountError::Mismatch(format!("ratio {lhs} != {rhs}")));
    }
    Ok(Some((lhs, rhs)))
}

/// (1 + w(α))/p = q^{d(α-⌈α/p⌉)}/p.
pub fn ln1_bound(params: &CountParams) -> Result<BigUint, CountError> {
    let a = params.alpha as u64;
    let lhs = exact_div(w(params, params.alpha)? + 1u32, params.p as u64, "(1 + w(α))/p")?;
    let rhs = exact_div(params.qd_pow(a - ceil_div(a, params.p as u64)), params.p as u64, "q^(...)/p")?;
    if lhs != rhs {
        return Err(CountError::Mismatch(format!("(1+w)/p = {lhs} but q^(...)/p = {rhs}")));
    }
    Ok(lhs)
}

/// The prime used by the oracles: the override if given, else the canonical prime of degree d.
pub fn oracle_prime(params: &CountParams, ring: &PolyRing, prime: Option<&Poly>) -> Result<Poly, CountError> {
    match prime {
        None => Ok(ring.canonical_prime(params.d as usize)?),
        Some(p) => {
            let p = ring.monic(p);
            if p.len() as u32 != params.d + 1 {
                return Err(CountError::InvalidParams(format!("prime {p} does not have degree {}", params.d)));
            }
            if !ring.is_irreducible(&p)? {
                return Err(CountError::InvalidParams(format!("{p} is not irreducible")));
            }
            Ok(p)
        }
    }
}

fn check_cap(q: u64, exp: u64, cap: u64) -> Result<u64, CountError> {
    q.checked_pow(exp as u32)
        .filter(|&n| n <= cap)
        .ok_or_else(|| CountError::CapExceeded { needed: format!("{q}^{exp}"), cap })
}

/// For k = 1..=n_max, the number of elements of (F_q[T]/P^α)^* of order exactly p^k.
///
/// Every residue is visited; A has order p^k iff A^{p^k} = 1 and A^{p^{k-1}} != 1,
/// and p-th powers are Frobenius followed by reduction.
pub fn oracle_order_histogram(
    params: &CountParams,
    prime: Option<&Poly>,
    n_max: u32,
    cap: u64,
) -> Result<Vec<u64>, CountError> {
    let ring = PolyRing::new(params.field()?);
    let prime = oracle_prime(params, &ring, prime)?;
    let size = check_cap(params.q(), (params.d * params.alpha) as u64, cap)?;
    let modulus = ring.pow(&prime, params.alpha as u64);
    let rr = ResidueRing::new(ring.clone(), &modulus)?;
    let one = rr.reduce(&Poly::one());
    let deg = rr.degree();
    let hist = (0..size)
        .into_par_iter()
        .fold(
            || vec![0u64; n_max as usize + 1],
            |mut acc, idx| {
                let mut a = ring.poly_from_index(idx, deg);
                for k in 0..=n_max as usize {
                    if a == one {
                        acc[k] += 1;
                        break;
                    }
                    a = rr.reduce(&ring.frobenius(&a));
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n_max as usize + 1],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    Ok(hist[1..].to_vec())
}

/// Cyclic subgroups of order p^n, counted as (elements of order p^n)/φ(p^n).
pub fn oracle_cyclic_subgroups(params: &CountParams, prime: Option<&Poly>, cap: u64) -> Result<BigUint, CountError> {
    let hist = oracle_order_histogram(params, prime, params.n, cap)?;
    let elems = hist[params.n as usize - 1];
    exact_div(BigUint::from(elems), params.pn(params.n - 1) * (params.p as u64 - 1), "element count")
}

/// Degree-p classes β = Q/P^λ, λ < α, p ∤ λ, modulo β ~ jβ + ℘(h/P^{⌊λ/p⌋}).
///
/// Returns the count for each λ; the total is their sum.
pub fn oracle_as_classes_by_lambda(
    params: &CountParams,
    prime: Option<&Poly>,
    cap: u64,
) -> Result<BTreeMap<u32, u64>, CountError> {
    let field = params.field()?;
    let ring = PolyRing::new(field.clone());
    let prime = oracle_prime(params, &ring, prime)?;
    let p = params.p;
    let d = params.d as u64;
    let mut out = BTreeMap::new();
    for lambda in (1..params.alpha).filter(|l| l % p != 0) {
        let gamma = lambda / p;
        check_cap(params.q(), d * lambda as u64, cap)?;
        let orbit_size = check_cap(params.q(), d * gamma as u64, cap)?;
        let pl = ring.pow(&prime, lambda as u64);
        let rr = ResidueRing::new(ring.clone(), &pl)?;
        let shift_p = ring.pow(&prime, (lambda - p * gamma) as u64);
        let shift_1 = ring.pow(&prime, (lambda - gamma) as u64);
        // ℘(h/P^γ) · P^λ = h^p P^{λ-pγ} - h P^{λ-γ}
        let wps: Vec<Poly> = (0..orbit_size)
            .map(|i| {
                let h = ring.poly_from_index(i, (d * gamma as u64) as usize);
                ring.sub(&ring.mul(&ring.pow(&h, p as u64), &shift_p), &ring.mul(&h, &shift_1))
            })
            .collect();
        let units: Vec<Poly> = rr.units(cap)?.collect();
        let count = units
            .par_iter()
            .filter(|q| {
                // q is counted iff it is the minimum of its orbit
                (1..p as i64).all(|j| {
                    let jq = ring.scale(field.from_int(j), q);
                    wps.iter().all(|c| &ring.add(&jq, c) >= *q)
                })
            })
            .count() as u64;
        out.insert(lambda, count);
    }
    Ok(out)
}

pub fn oracle_as_classes(params: &CountParams, prime: Option<&Poly>, cap: u64) -> Result<BigUint, CountError> {
    Ok(BigUint::from(oracle_as_classes_by_lambda(params, prime, cap)?.values().sum::<u64>()))
}

/// Outcome of the Witt-vector class oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AswOracleReport {
    pub classes: u64,
    pub candidates: u64,
    /// (pole bound, class count) for every round run.
    pub rounds: Vec<(u32, u64)>,
    /// Class count by conductor exponent M_n.
    pub by_conductor: BTreeMap<u64, u64>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Length-n normal forms supported at P alone, with λ_1 > 0 and M_n ≤ α-1,
/// counted up to β ~ m ⊙ β ⊞ ℘(c) with c a vector of pole parts at P.
///
/// The pole bound B on c starts at ⌈α/p⌉ and grows by one per round until two
/// consecutive rounds give the same count.
pub fn oracle_asw_classes(
    params: &CountParams,
    prime: Option<&Poly>,
    cap: u64,
    max_rounds: usize,
) -> Result<AswOracleReport, CountError> {
    if params.n > 3 {
        return Err(CountError::InvalidParams(format!("n = {} exceeds 3", params.n)));
    }
    let field = params.field()?;
    let asw = Asw::new(field.clone(), params.n as usize)?;
    let ring = asw.k().poly_ring().clone();
    let prime = oracle_prime(params, &ring, prime)?;
    let p = params.p;
    let n = params.n as usize;
    let d = params.d as u64;
    let q = params.q();

    // admissible λ vectors
    let mut lambda_vecs: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &lambda_vecs {
            for l in 0..params.alpha {
                if (l == 0 && v.is_empty()) || (l > 0 && l % p == 0) {
                    continue;
                }
                let mut w = v.clone();
                w.push(l);
                next.push(w);
            }
        }
        lambda_vecs = next;
    }
    lambda_vecs.retain(|l| conductor_exponent(p, l).map(|m| m < params.alpha as u64).unwrap_or(false));

    let mut candidates: Vec<(WittVector<_>, u64)> = Vec::new();
    let mut total: u64 = 0;
    for lv in &lambda_vecs {
        let mut count: u64 = 1;
        for &l in lv.iter().filter(|&&l| l > 0) {
            let phi = phi_prime_power(q, params.d, l).to_u64().unwrap_or(u64::MAX);
            count = count.saturating_mul(phi);
        }
        total = total.saturating_add(count);
    }
    if total > cap {
        return Err(CountError::CapExceeded { needed: format!("{total} candidates"), cap });
    }
    for lv in &lambda_vecs {
        let m = conductor_exponent(p, lv)?;
        let mut levels: Vec<Vec<crate::algebra::RationalFunction>> = vec![vec![]];
        for &l in lv {
            let options: Vec<_> = if l == 0 {
                vec![asw.k().from_poly(Poly::zero())]
            } else {
                let pl = ring.pow(&prime, l as u64);
                let rr = ResidueRing::new(ring.clone(), &pl)?;
                let units: Vec<Poly> = rr.units(cap)?.collect();
                units.into_iter().map(|u| asw.k().make(u, pl.clone()).expect("nonzero")).collect()
            };
            levels = levels
                .into_iter()
                .flat_map(|pre| {
                    options.iter().map(move |o| {
                        let mut v = pre.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        candidates.extend(levels.into_iter().map(|c| (WittVector::new(c), m)));
    }
    let index: HashMap<WittVector<_>, usize> =
        candidates.iter().enumerate().map(|(i, (v, _))| (v.clone(), i)).collect();
    let units: Vec<i64> = (1..(p as i64).pow(n as u32)).filter(|m| m % p as i64 != 0).collect();

    let start = ceil_div(params.alpha as u64, p as u64).max(1) as u32;
    let mut rounds: Vec<(u32, u64)> = Vec::new();
    let mut final_roots: Option<Vec<usize>> = None;
    for r in 0..max_rounds {
        let bound = start + r as u32;
        let per_comp = check_cap(q, d * bound as u64, cap)?;
        let corrections = per_comp
            .checked_pow(n as u32)
            .filter(|&c| c <= cap)
            .ok_or_else(|| CountError::CapExceeded { needed: format!("{per_comp}^{n} corrections"), cap })?;
        let pb = ring.pow(&prime, bound as u64);
        let comp = |i: u64| asw.k().make(ring.poly_from_index(i, (d * bound as u64) as usize), pb.clone()).expect("nonzero");
        let wp_corrections: Vec<WittVector<_>> = (0..corrections)
            .into_par_iter()
            .map(|mut idx| {
                let mut comps = Vec::with_capacity(n);
                for _ in 0..n {
                    comps.push(comp(idx % per_comp));
                    idx /= per_comp;
                }
                asw.witt().wp(&WittVector::new(comps)).expect("matching length")
            })
            .collect();
        let edges: Vec<Vec<usize>> = candidates
            .par_iter()
            .map(|(beta, _)| -> Result<Vec<usize>, CountError> {
                let mut out = Vec::new();
                for &m in &units {
                    let mb = asw.witt().int_mul(m, beta)?;
                    for c in &wp_corrections {
                        let x = asw.witt().add(&mb, c)?;
                        let nf = asw.witt_normalize(&crate::asw::AswGenerator::new(x))?;
                        match index.get(&nf.normalized_beta) {
                            Some(&j) => out.push(j),
                            None => {
                                return Err(CountError::Mismatch(format!(
                                    "{} is equivalent to {} which is not a candidate",
                                    beta, nf.normalized_beta
                                )))
                            }
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, _>>()?;
        let mut uf = UnionFind((0..candidates.len()).collect());
        for (i, targets) in edges.iter().enumerate() {
            for &j in targets {
                uf.union(i, j);
            }
        }
        let roots: Vec<usize> = (0..candidates.len()).filter(|&i| uf.find(i) == i).collect();
        rounds.push((bound, roots.len() as u64));
        let stable = rounds.len() >= 2 && rounds[rounds.len() - 2].1 == rounds[rounds.len() - 1].1;
        final_roots = Some(roots);
        if stable {
            break;
        }
    }
    let stable = rounds.len() >= 2 && rounds[rounds.len() - 2].1 == rounds[rounds.len() - 1].1;
    if !stable && !candidates.is_empty() {
        return Err(CountError::Unstable { rounds: max_rounds, counts: rounds.iter().map(|r| r.1).collect() });
    }
    let roots = final_roots.unwrap_or_default();
    let mut by_conductor = BTreeMap::new();
    for &r in &roots {
        *by_conductor.entry(candidates[r].1).or_insert(0u64) += 1;
    }
    Ok(AswOracleReport { classes: roots.len() as u64, candidates: candidates.len() as u64, rounds, by_conductor })
}
