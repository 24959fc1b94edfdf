//! Carlitz polynomials C_M(u) = Σ a_i u^{q^i} over F_q[T], normalized by C_T(u) = Tu + u^q.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Fq, Poly, PolyRing, RatFunField, RationalFunction};
use crate::ring::FqAlgebra;

/// Largest u-degree accepted by [`gcd_check`].
pub const DEFAULT_U_DEGREE_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CarlitzError {
    #[error("C_0 is the zero map; a nonzero polynomial is required")]
    ZeroInput,
    #[error("u-degree {degree} exceeds cap {cap}")]
    CapExceeded { degree: String, cap: u64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Sparse q-polynomial: coeffs[i] multiplies u^{q^i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzPoly {
    pub m: Poly,
    pub coeffs: BTreeMap<u32, Poly>,
}

impl CarlitzPoly {
    pub fn coeff(&self, i: u32) -> Poly {
        self.coeffs.get(&i).cloned().unwrap_or_else(Poly::zero)
    }

    /// Largest i with a nonzero coefficient of u^{q^i}.
    pub fn top_index(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// u-degree q^{top index}, if it fits.
    pub fn u_degree(&self, q: u64) -> Option<u64> {
        self.top_index().and_then(|i| q.checked_pow(i))
    }

    /// Nonzero terms of the formal u-derivative as (u-exponent, coefficient).
    pub fn u_derivative(&self, ring: &PolyRing) -> Vec<(u64, Poly)> {
        let f = ring.field();
        let p = f.p() as u64;
        let q = f.q() as u64;
        self.coeffs
            .iter()
            .filter_map(|(&i, a)| {
                let e = q.checked_pow(i)?;
                let factor = f.from_int((e % p) as i64);
                let c = ring.scale(factor, a);
                (!c.is_zero()).then(|| (e - 1, c))
            })
            .collect()
    }
}

impl fmt::Display for CarlitzPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(i, c)| format!("({i}, {c})")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn normalize(coeffs: BTreeMap<u32, Poly>) -> BTreeMap<u32, Poly> {
    coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn add_coeffs(ring: &PolyRing, a: &BTreeMap<u32, Poly>, b: &BTreeMap<u32, Poly>) -> BTreeMap<u32, Poly> {
    let mut out = a.clone();
    for (i, c) in b {
        let e = out.entry(*i).or_insert_with(Poly::zero);
        *e = ring.add(e, c);
    }
    normalize(out)
}

/// C_M via F_q-linearity from C_{T^{j+1}} = T C_{T^j} + (C_{T^j})^q.
pub fn carlitz_poly(ring: &PolyRing, m: &Poly) -> Result<CarlitzPoly, CarlitzError> {
    if m.is_zero() {
        return Err(CarlitzError::ZeroInput);
    }
    let mut power: BTreeMap<u32, Poly> = BTreeMap::from([(0, Poly::one())]);
    let mut acc: BTreeMap<u32, Poly> = BTreeMap::new();
    for (j, &c) in m.coeffs().iter().enumerate() {
        if j > 0 {
            let mut next: BTreeMap<u32, Poly> = BTreeMap::new();
            for (i, a) in &power {
                let e = next.entry(*i).or_insert_with(Poly::zero);
                *e = ring.add(e, &ring.shift(a, 1));
                let e = next.entry(i + 1).or_insert_with(Poly::zero);
                *e = ring.add(e, &qth_power(ring, a));
            }
            power = normalize(next);
        }
        if !c.is_zero() {
            let scaled: BTreeMap<u32, Poly> = power.iter().map(|(i, a)| (*i, ring.scale(c, a))).collect();
            acc = add_coeffs(ring, &acc, &scaled);
        }
    }
    Ok(CarlitzPoly { m: m.clone(), coeffs: acc })
}

/// a^q, as s applications of coefficientwise Frobenius.
fn qth_power(ring: &PolyRing, a: &Poly) -> Poly {
    (0..ring.field().s()).fold(a.clone(), |acc, _| ring.frobenius(&acc))
}

/// Σ a_i b_j^{q^i} u^{q^{i+j}}.
pub fn compose(ring: &PolyRing, a: &CarlitzPoly, b: &CarlitzPoly) -> BTreeMap<u32, Poly> {
    let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
    for (i, ai) in &a.coeffs {
        for (j, bj) in &b.coeffs {
            let mut t = bj.clone();
            for _ in 0..*i {
                t = qth_power(ring, &t);
            }
            let e = out.entry(i + j).or_insert_with(Poly::zero);
            *e = ring.add(e, &ring.mul(ai, &t));
        }
    }
    normalize(out)
}

fn eval_poly_in<R: FqAlgebra>(alg: &R, a: &Poly) -> R::Elem {
    let t = alg.t_image();
    a.coeffs().iter().rev().fold(alg.zero(), |acc, &c| alg.add(&alg.mul(&acc, &t), &alg.scalar(c)))
}

/// C_M(x) in an F_q[T]-algebra.
pub fn carlitz_eval<R: FqAlgebra>(ring: &PolyRing, alg: &R, m: &Poly, x: &R::Elem) -> Result<R::Elem, CarlitzError> {
    if m.is_zero() {
        return Ok(alg.zero());
    }
    let c = carlitz_poly(ring, m)?;
    let q = ring.field().q() as u64;
    let mut acc = alg.zero();
    let mut xpow = x.clone();
    let mut idx = 0u32;
    for (i, a) in &c.coeffs {
        while idx < *i {
            xpow = alg.pow(&xpow, q);
            idx += 1;
        }
        acc = alg.add(&acc, &alg.mul(&eval_poly_in(alg, a), &xpow));
    }
    Ok(acc)
}

/// C_{MN} = C_M ∘ C_N = C_N ∘ C_M and C_{M+N} = C_M + C_N.
pub fn compose_check(ring: &PolyRing, m: &Poly, n: &Poly) -> Result<bool, CarlitzError> {
    let cm = carlitz_poly(ring, m)?;
    let cn = carlitz_poly(ring, n)?;
    let cmn = carlitz_poly(ring, &ring.mul(m, n))?;
    let sum = ring.add(m, n);
    let c_sum = if sum.is_zero() { BTreeMap::new() } else { carlitz_poly(ring, &sum)?.coeffs };
    Ok(compose(ring, &cm, &cn) == cmn.coeffs
        && compose(ring, &cn, &cm) == cmn.coeffs
        && add_coeffs(ring, &cm.coeffs, &cn.coeffs) == c_sum)
}

/// Dense u-coefficients over F_q(T), index = u-exponent.
fn dense(k: &RatFunField, c: &CarlitzPoly) -> Vec<RationalFunction> {
    let q = k.field().q() as u64;
    let deg = c.u_degree(q).expect("checked against the cap") as usize;
    let mut out = vec![k.from_poly(Poly::zero()); deg + 1];
    for (i, a) in &c.coeffs {
        out[q.pow(*i) as usize] = k.from_poly(a.clone());
    }
    out
}

fn trim(v: &mut Vec<RationalFunction>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn make_monic(k: &RatFunField, v: &mut [RationalFunction]) {
    if let Some(lead) = v.last().cloned() {
        let inv = k.inv(&lead).expect("trimmed leading coefficient is nonzero");
        for c in v.iter_mut() {
            if !c.is_zero() {
                *c = k.mul(c, &inv);
            }
        }
    }
}

/// Remainder of a by monic b.
fn rem_monic(k: &RatFunField, mut a: Vec<RationalFunction>, b: &[RationalFunction]) -> Vec<RationalFunction> {
    let db = b.len() - 1;
    trim(&mut a);
    while a.len() > db {
        let shift = a.len() - 1 - db;
        let lead = a.last().cloned().expect("nonempty");
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                a[shift + j] = k.sub(&a[shift + j], &k.mul(&lead, bj));
            }
        }
        trim(&mut a);
    }
    a
}

/// gcd_u(C_M, C_N) over F_q(T) equals C_{gcd(M, N)}, by dense Euclid in u.
pub fn gcd_check(ring: &PolyRing, m: &Poly, n: &Poly, cap: u64) -> Result<bool, CarlitzError> {
    let q = ring.field().q() as u64;
    for x in [m, n] {
        let deg = x.degree().finite().ok_or(CarlitzError::ZeroInput)?;
        match q.checked_pow(deg as u32) {
            Some(d) if d <= cap => {}
            _ => return Err(CarlitzError::CapExceeded { degree: format!("{q}^{deg}"), cap }),
        }
    }
    let k = RatFunField::new(ring.field().clone());
    let mut a = dense(&k, &carlitz_poly(ring, m)?);
    let mut b = dense(&k, &carlitz_poly(ring, n)?);
    make_monic(&k, &mut a);
    make_monic(&k, &mut b);
    while !b.is_empty() {
        let mut r = rem_monic(&k, a, &b);
        make_monic(&k, &mut r);
        a = b;
        b = r;
    }
    let expected = dense(&k, &carlitz_poly(ring, &ring.gcd(m, n))?);
    Ok(a == expected)
}

/// Shape, degree and derivative invariants of C_M.
pub fn shape_check(ring: &PolyRing, m: &Poly) -> Result<bool, CarlitzError> {
    let c = carlitz_poly(ring, m)?;
    let deg = m.degree().finite().expect("nonzero") as u32;
    let lead_ok = c.top_index() == Some(deg) && c.coeff(deg) == Poly::constant(m.leading());
    let linear_ok = c.coeff(0) == *m;
    let deriv_ok = c.u_derivative(ring) == vec![(0, m.clone())];
    let keys_ok = c.coeffs.keys().all(|&i| i <= deg);
    Ok(lead_ok && linear_ok && deriv_ok && keys_ok)
}

/// Scalars act F_q-linearly: C_M(a x + b y) = a C_M(x) + b C_M(y).
pub fn linearity_check<R: FqAlgebra>(
    ring: &PolyRing,
    alg: &R,
    m: &Poly,
    a: Fq,
    x: &R::Elem,
    b: Fq,
    y: &R::Elem,
) -> Result<bool, CarlitzError> {
    let lhs_arg = alg.add(&alg.mul(&alg.scalar(a), x), &alg.mul(&alg.scalar(b), y));
    let lhs = carlitz_eval(ring, alg, m, &lhs_arg)?;
    let cx = carlitz_eval(ring, alg, m, x)?;
    let cy = carlitz_eval(ring, alg, m, y)?;
    let rhs = alg.add(&alg.mul(&alg.scalar(a), &cx), &alg.mul(&alg.scalar(b), &cy));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteField;

    fn ring(p: u32, s: u32) -> PolyRing {
        PolyRing::new(FiniteField::new(p, s).unwrap())
    }

    #[test]
    fn small_polynomials() {
        let r = ring(2, 1);
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(carlitz_poly(&r, &p("1")).unwrap().to_string(), "[(0, 1)]");
        assert_eq!(carlitz_poly(&r, &p("T")).unwrap().to_string(), "[(0, T), (1, 1)]");
        assert_eq!(carlitz_poly(&r, &p("T^2")).unwrap().to_string(), "[(0, T^2), (1, T^2+T), (2, 1)]");
        let r3 = ring(3, 1);
        assert_eq!(carlitz_poly(&r3, &r3.parse("T^2").unwrap()).unwrap().to_string(), "[(0, T^2), (1, T^3+T), (2, 1)]");
        assert_eq!(carlitz_poly(&r, &Poly::zero()), Err(CarlitzError::ZeroInput));
    }

    #[test]
    fn evaluation_examples() {
        let r = ring(2, 1);
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(carlitz_eval(&r, &r, &p("T"), &Poly::one()).unwrap(), p("T+1"));
        // T^2 + (T^2 + T) + 1 over F_2, which is also C_T(C_T(1)) = C_T(T+1)
        let twice = carlitz_eval(&r, &r, &p("T"), &p("T+1")).unwrap();
        assert_eq!(carlitz_eval(&r, &r, &p("T^2"), &Poly::one()).unwrap(), p("T+1"));
        assert_eq!(twice, p("T+1"));
        assert!(carlitz_eval(&r, &r, &p("T^2+1"), &Poly::zero()).unwrap().is_zero());
    }

    #[test]
    fn compose_and_gcd_examples() {
        let r = ring(2, 1);
        let p = |s: &str| r.parse(s).unwrap();
        assert!(compose_check(&r, &p("T"), &p("T")).unwrap());
        assert!(compose_check(&r, &p("1"), &p("T^2+1")).unwrap());
        assert!(compose_check(&r, &p("T"), &p("T+1")).unwrap());
        assert!(gcd_check(&r, &p("T"), &p("T+1"), DEFAULT_U_DEGREE_CAP).unwrap());
        assert!(gcd_check(&r, &p("T^2"), &p("T"), DEFAULT_U_DEGREE_CAP).unwrap());
        assert!(gcd_check(&r, &p("T^2+T"), &p("T^2+T"), DEFAULT_U_DEGREE_CAP).unwrap());
        assert!(matches!(gcd_check(&r, &p("T^3"), &p("T"), 4), Err(CarlitzError::CapExceeded { .. })));
    }

    #[test]
    fn shape_examples() {
        let r = ring(3, 1);
        for m in ["1", "T", "2*T^2+T", "T^3+2"] {
            assert!(shape_check(&r, &r.parse(m).unwrap()).unwrap(), "{m}");
        }
    }
}
