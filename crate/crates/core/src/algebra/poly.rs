//! Univariate polynomials over F_q, the ring R_T = F_q[T].

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;

use super::field::{lex_monic_digits, FiniteField, Fq};
use super::AlgebraError;
use crate::ring::{FqAlgebra, Ring};

/// Degree of a polynomial; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial with coefficients in F_q, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fq::ONE] }
    }

    pub fn constant(c: Fq) -> Self {
        Poly::new(vec![c])
    }

    /// The variable T.
    pub fn t() -> Self {
        Poly { coeffs: vec![Fq::ZERO, Fq::ONE] }
    }

    pub fn monomial(c: Fq, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Number of coefficients, i.e. degree + 1, and 0 for the zero polynomial.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fq::ONE
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    pub fn constant_term(&self) -> Fq {
        self.coeff(0)
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients compared from the constant term upward.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c.0) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "T")?,
                (1, v) => write!(f, "{v}*T")?,
                (k, 1) => write!(f, "T^{k}")?,
                (k, v) => write!(f, "{v}*T^{k}")?,
            }
        }
        Ok(())
    }
}

/// The ring F_q[T]; all polynomial arithmetic goes through this context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FiniteField,
}

impl PolyRing {
    pub fn new(field: FiniteField) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.coeffs.clone();
        for (o, &c) in out.iter_mut().zip(&short.coeffs) {
            *o = self.field.add(*o, c);
        }
        Poly::new(out)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|&c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n).map(|i| self.field.sub(a.coeff(i), b.coeff(i))).collect();
        Poly::new(out)
    }

    pub fn scale(&self, c: Fq, a: &Poly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect() }
    }

    /// Multiplies by T^k.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; k];
        coeffs.extend_from_slice(&a.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(x, y));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = a.clone();
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

    /// Quotient and remainder with deg(rem) < deg(b).
    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        if b.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if a.len() < b.len() {
            return Ok((Poly::zero(), a.clone()));
        }
        let db = b.len() - 1;
        let inv_lead = self.field.inv(b.leading())?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![Fq::ZERO; a.len() - db];
        for k in (0..quot.len()).rev() {
            let top = rem[k + db];
            if top.is_zero() {
                continue;
            }
            let factor = self.field.mul(top, inv_lead);
            quot[k] = factor;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = self.field.sub(rem[k + j], self.field.mul(factor, bj));
            }
        }
        rem.truncate(db);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Exact division; errors when `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        let (q, r) = self.divmod(a, b)?;
        if !r.is_zero() {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(q)
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        !d.is_zero() && self.rem(a, d).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() || a.is_monic() {
            return a.clone();
        }
        let inv = self.field.inv(a.leading()).expect("nonzero leading coefficient");
        self.scale(inv, a)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// (g, s, t) with s*a + t*b = g and g the monic gcd.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(r0.leading()).expect("nonzero");
        (self.scale(inv, &r0), self.scale(inv, &s0), self.scale(inv, &t0))
    }

    /// Inverse of `a` modulo `m`, if gcd(a, m) = 1.
    pub fn inverse_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(a, m);
        if !g.is_one() {
            return None;
        }
        Some(self.rem(&s, m).expect("nonzero modulus"))
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn powmod(&self, a: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut acc = self.rem(&Poly::one(), m).expect("nonzero modulus");
        let mut base = self.rem(a, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly, x: Fq) -> Fq {
        a.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.field.mul(self.field.from_int(k as i64), c))
            .collect();
        Poly::new(coeffs)
    }

    /// Reverses the coefficient order with respect to degree `n`: T^n a(1/T).
    pub fn reverse(&self, a: &Poly, n: usize) -> Poly {
        let mut coeffs = vec![Fq::ZERO; n + 1];
        for (k, &c) in a.coeffs.iter().enumerate() {
            coeffs[n - k] = c;
        }
        Poly::new(coeffs)
    }

    /// Polynomial with every coefficient raised to the p-th power and T replaced by T^p, i.e. a^p.
    pub fn frobenius(&self, a: &Poly) -> Poly {
        let p = self.field.p() as usize;
        if a.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; (a.len() - 1) * p + 1];
        for (k, &c) in a.coeffs.iter().enumerate() {
            coeffs[k * p] = self.field.frobenius(c);
        }
        Poly::new(coeffs)
    }

    /// All monic polynomials of degree `d` in lexicographic order (constant term most significant).
    pub fn monic_polys(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.field.q() as u64;
        let count = q.checked_pow(d as u32).unwrap_or(u64::MAX);
        (0..count).map(move |idx| {
            let digits = lex_monic_digits(idx, d, q);
            Poly::new(digits.into_iter().map(|c| Fq(c as u32)).collect())
        })
    }

    /// All polynomials of degree < `n`, ordered by integer index (coefficient of T^0 least significant).
    pub fn polys_below_degree(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.field.q() as u64;
        let count = q.checked_pow(n as u32).unwrap_or(u64::MAX);
        (0..count).map(move |idx| self.poly_from_index(idx, n))
    }

    pub fn poly_from_index(&self, mut idx: u64, n: usize) -> Poly {
        let q = self.field.q() as u64;
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push(Fq((idx % q) as u32));
            idx /= q;
        }
        Poly::new(coeffs)
    }

    /// Exact irreducibility test (Ben-Or): no factor of degree i <= deg/2 divides T^{q^i} - T.
    pub fn is_irreducible(&self, f: &Poly) -> Result<bool, AlgebraError> {
        let n = match f.degree() {
            Degree::NegInfinity => return Err(AlgebraError::ZeroPolynomial),
            Degree::Finite(n) => n,
        };
        if n == 0 {
            return Ok(false);
        }
        let f = self.monic(f);
        let q = self.field.q() as u64;
        let t = Poly::t();
        let mut x = self.rem(&t, &f)?;
        for _ in 1..=n / 2 {
            x = self.powmod(&x, q, &f);
            let g = self.gcd(&f, &self.sub(&x, &t));
            if !g.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All monic irreducibles of degree `d`, lexicographic order; refuses when q^d exceeds `cap`.
    pub fn monic_irreducibles(&self, d: usize, cap: u64) -> Result<Vec<Poly>, AlgebraError> {
        let q = self.field.q() as u64;
        let size = q.checked_pow(d as u32).filter(|&n| n <= cap);
        if d == 0 || size.is_none() {
            return Err(AlgebraError::CapExceeded { needed: format!("{q}^{d}"), cap });
        }
        Ok(self
            .monic_polys(d)
            .filter(|f| self.is_irreducible(f).unwrap_or(false))
            .collect())
    }

    /// The lexicographically smallest monic irreducible of degree `d`.
    pub fn canonical_prime(&self, d: usize) -> Result<Poly, AlgebraError> {
        if d == 0 {
            return Err(AlgebraError::ZeroPolynomial);
        }
        Ok(self
            .monic_polys(d)
            .find(|f| self.is_irreducible(f).unwrap_or(false))
            .expect("irreducibles exist in every degree"))
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by [`Poly`] order.
    /// The leading coefficient is dropped.
    pub fn factor(&self, f: &Poly) -> Result<Vec<(Poly, u32)>, AlgebraError> {
        if f.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut rest = self.monic(f);
        let mut out = Vec::new();
        let mut k = 1usize;
        while rest.len() > 1 {
            let deg = rest.len() - 1;
            if deg < 2 * k || self.is_irreducible(&rest)? {
                out.push((rest, 1));
                break;
            }
            for g in self.monic_polys(k) {
                let mut mult = 0;
                loop {
                    let (quot, r) = self.divmod(&rest, &g)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = quot;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((g, mult));
                    if rest.len() - 1 < 2 * k {
                        break;
                    }
                }
            }
            k += 1;
        }
        out.sort();
        Ok(out)
    }

    pub fn parse(&self, text: &str) -> Result<Poly, AlgebraError> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(AlgebraError::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero();
        for term in text.split('+') {
            let bad = || AlgebraError::Parse(format!("bad polynomial term {term:?}"));
            let (coef, power) = match term.split_once('T') {
                None => (term, None),
                Some((c, rest)) => {
                    let c = match c {
                        "" => "1",
                        c => c.strip_suffix('*').ok_or_else(bad)?,
                    };
                    let k = match rest {
                        "" => 1usize,
                        r => r.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (c, Some(k))
                }
            };
            let value: u64 = coef.parse().map_err(|_| bad())?;
            let c = self.field.check(value)?;
            acc = self.add(&acc, &Poly::monomial(c, power.unwrap_or(0)));
        }
        Ok(acc)
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::add(self, a, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        PolyRing::neg(self, a)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.field.p() as u64
    }
    fn from_bigint(&self, n: &BigInt) -> Poly {
        Poly::constant(Ring::from_bigint(&self.field, n))
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        PolyRing::sub(self, a, b)
    }
}

impl FqAlgebra for PolyRing {
    fn scalar(&self, c: Fq) -> Poly {
        Poly::constant(c)
    }
    fn t_image(&self) -> Poly {
        Poly::t()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, s: u32) -> PolyRing {
        PolyRing::new(FiniteField::new(p, s).unwrap())
    }

    #[test]
    fn text_round_trip() {
        let r = ring(2, 2);
        for text in ["T^3+T+1", "0", "1", "T", "3*T^2+2*T+3", "2*T^7"] {
            let f = r.parse(text).unwrap();
            assert_eq!(f.to_string(), text);
        }
        assert!(r.parse("4*T").is_err());
        assert!(r.parse("T^").is_err());
        assert_eq!(r.parse("T + T").unwrap(), Poly::zero());
    }

    #[test]
    fn gcd_divmod_eval_examples() {
        let r = ring(2, 1);
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(r.gcd(&p("T^2+T"), &p("T")), p("T"));
        let (q, rem) = r.divmod(&p("T^3+1"), &p("T+1")).unwrap();
        assert_eq!((q.clone(), rem), (p("T^2+T+1"), Poly::zero()));
        assert_eq!(r.mul(&q, &p("T+1")), p("T^3+1"));
        assert_eq!(r.eval(&p("T^2+1"), Fq(1)), Fq(0));
        assert_eq!(r.divmod(&p("T"), &Poly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(Poly::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(Degree::NegInfinity + Degree::Finite(3), Degree::NegInfinity);
    }

    #[test]
    fn irreducibility_examples() {
        let r = ring(2, 1);
        assert!(r.is_irreducible(&r.parse("T^2+T+1").unwrap()).unwrap());
        assert!(!r.is_irreducible(&r.parse("T^2+1").unwrap()).unwrap());
        assert_eq!(
            r.monic_irreducibles(1, 1 << 20).unwrap(),
            vec![r.parse("T").unwrap(), r.parse("T+1").unwrap()]
        );
        assert!(r.monic_irreducibles(30, 1 << 20).is_err());
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_q: (1/n) sum_{d|n} mu(d) q^{n/d}
        for (p, s, n, expected) in [(2, 1, 4, 3), (2, 1, 5, 6), (3, 1, 3, 8), (2, 2, 3, 20), (3, 1, 4, 18)] {
            let r = ring(p, s);
            assert_eq!(r.monic_irreducibles(n, 1 << 20).unwrap().len(), expected);
        }
    }

    #[test]
    fn factorization_reconstructs() {
        let r = ring(3, 1);
        let f = r.parse("T^7+2*T^5+T^4+T^2+2").unwrap();
        let factors = r.factor(&f).unwrap();
        let prod = factors
            .iter()
            .fold(Poly::one(), |acc, (g, e)| r.mul(&acc, &r.pow(g, *e as u64)));
        assert_eq!(prod, r.monic(&f));
        for (g, _) in &factors {
            assert!(r.is_irreducible(g).unwrap());
        }
    }

    #[test]
    fn multiplicative_degree() {
        let r = ring(3, 1);
        let a = r.parse("2*T^3+T").unwrap();
        let b = r.parse("T^2+2").unwrap();
        assert_eq!(r.mul(&a, &b).degree(), Degree::Finite(5));
    }

    #[test]
    fn canonical_prime_order() {
        let r = ring(3, 1);
        assert_eq!(r.canonical_prime(2).unwrap(), r.parse("T^2+1").unwrap());
        let r2 = ring(2, 1);
        assert_eq!(r2.canonical_prime(3).unwrap(), r2.parse("T^3+T^2+1").unwrap());
    }
}
