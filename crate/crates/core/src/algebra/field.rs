//! Finite fields F_q, q = p^s, with table-driven arithmetic.
//!
//! Elements are encoded as integers in [0, q) whose base-p digits are the
//! coefficients of the element in the power basis of F_p[x]/(modulus),
//! constant digit first. The modulus is the lexicographically smallest
//! monic irreducible of degree s (coefficients compared from the constant
//! term upward), so equal (p, s) always produce bit-identical fields.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::AlgebraError;
use crate::ring::Ring;

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: u32 = 16;
/// Largest supported field order; log/exp tables are kept for every element.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of F_q in its integer encoding. Only meaningful together with the field it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldInner {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    trace: Vec<u32>,
    wp_preimage: Vec<Option<u32>>,
}

/// The finite field F_{p^s}. Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.s == other.0.s
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p used only while bootstrapping the field.
fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let inv_lead = fp_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (*r.last().unwrap() as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (factor as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut v = idx;
            for c in g.iter_mut().take(k) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            g[k] = 1;
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic polynomial of degree `deg` at position `idx` of the lexicographic
/// order that compares coefficients from the constant term upward.
pub(crate) fn lex_monic_digits(idx: u64, deg: usize, base: u64) -> Vec<u64> {
    let mut digits = vec![0u64; deg + 1];
    let mut v = idx;
    for i in (0..deg).rev() {
        digits[i] = v % base;
        v /= base;
    }
    digits[deg] = 1;
    digits
}

fn canonical_modulus(p: u32, s: u32) -> Vec<u32> {
    let count = (p as u64).pow(s);
    for idx in 0..count {
        let f: Vec<u32> = lex_monic_digits(idx, s as usize, p as u64)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds the canonical field F_{p^s}.
    pub fn new(p: u32, s: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p as u64) {
            return Err(AlgebraError::NotPrime(p as u64));
        }
        if s == 0 || s > MAX_EXTENSION_DEGREE {
            return Err(AlgebraError::ExtensionDegree { s, max: MAX_EXTENSION_DEGREE });
        }
        let q = (p as u64).checked_pow(s).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or(
            AlgebraError::FieldTooLarge { p, s, max: MAX_FIELD_ORDER },
        )? as u32;
        let modulus = canonical_modulus(p, s);

        let digits = |x: u32| -> Vec<u32> {
            let mut out = Vec::with_capacity(s as usize);
            let mut v = x;
            for _ in 0..s {
                out.push(v % p);
                v /= p;
            }
            out
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * s as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = fp_rem(&prod, &modulus, p);
            r.resize(s as usize, 0);
            encode(&r)
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            let mut base = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let order = q as u64 - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..order as usize {
            exp[i] = cur;
            exp[i + order as usize] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }

        let neg: Vec<u32> = (0..q)
            .map(|x| encode(&digits(x).iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let add_digits = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            encode(&da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect::<Vec<_>>())
        };
        let add_table = if p != 2 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            Some(t)
        } else {
            None
        };

        let mut field = FiniteField(Arc::new(FieldInner {
            p,
            s,
            q,
            modulus,
            add_table,
            neg,
            log,
            exp,
            trace: Vec::new(),
            wp_preimage: Vec::new(),
        }));

        // Absolute traces and smallest preimages under a -> a^p - a.
        let trace: Vec<u32> = (0..q)
            .map(|x| {
                let mut acc = Fq::ZERO;
                let mut cur = Fq(x);
                for _ in 0..s {
                    acc = field.add(acc, cur);
                    cur = field.frobenius(cur);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        let mut wp_preimage = vec![None; q as usize];
        for a in 0..q {
            let img = field.wp(Fq(a));
            if wp_preimage[img.0 as usize].is_none() {
                wp_preimage[img.0 as usize] = Some(a);
            }
        }
        if q <= 64 {
            for x in 0..q as usize {
                if (trace[x] == 0) != wp_preimage[x].is_some() {
                    return Err(AlgebraError::Internal(format!(
                        "trace criterion disagrees with the Artin-Schreier image in F_{q} at {x}"
                    )));
                }
            }
        }
        let inner = Arc::get_mut(&mut field.0).expect("freshly built field is unshared");
        inner.trace = trace;
        inner.wp_preimage = wp_preimage;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn s(&self) -> u32 {
        self.0.s
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    /// Coefficients of the defining polynomial over F_p, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn contains(&self, x: Fq) -> bool {
        x.0 < self.0.q
    }

    pub fn check(&self, value: u64) -> Result<Fq, AlgebraError> {
        if value < self.0.q as u64 {
            Ok(Fq(value as u32))
        } else {
            Err(AlgebraError::NotInField { value, q: self.0.q })
        }
    }

    /// Base-p digits of `x`, constant digit first.
    pub fn coeffs(&self, x: Fq) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.s as usize);
        let mut v = x.0;
        for _ in 0..self.0.s {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fq, AlgebraError> {
        if coeffs.len() != self.0.s as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(AlgebraError::Parse(format!(
                "expected {} digits below {}",
                self.0.s, self.0.p
            )));
        }
        Ok(Fq(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c)))
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let inner = &*self.0;
        if inner.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if inner.s == 1 {
            let r = a.0 + b.0;
            return Fq(if r >= inner.p { r - inner.p } else { r });
        }
        if let Some(t) = &inner.add_table {
            return Fq(t[(a.0 * inner.q + b.0) as usize]);
        }
        let (p, mut x, mut y) = (inner.p, a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..inner.s {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.0;
        Fq(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        Ok(Fq(inner.exp[((order - inner.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let inner = &*self.0;
        let order = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64 * (e % order) % order;
        Fq(inner.exp[l as usize])
    }

    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.0.p as u64)
    }

    /// The unique y with y^p = x.
    pub fn pth_root(&self, x: Fq) -> Fq {
        self.pow(x, (self.0.p as u64).pow(self.0.s - 1))
    }

    /// a^p - a.
    pub fn wp(&self, a: Fq) -> Fq {
        self.sub(self.frobenius(a), a)
    }

    /// Absolute trace to F_p, as an element of F_p.
    pub fn trace(&self, x: Fq) -> u32 {
        self.0.trace[x.0 as usize]
    }

    /// Whether `x` lies in {a^p - a : a in F_q}, decided by the trace.
    pub fn in_wp_image(&self, x: Fq) -> bool {
        self.trace(x) == 0
    }

    /// The smallest-encoded `a` with a^p - a = x, if any.
    pub fn wp_preimage(&self, x: Fq) -> Option<Fq> {
        self.0.wp_preimage[x.0 as usize].map(Fq)
    }

    /// Smallest-encoded element of the coset x + {a^p - a}.
    pub fn wp_coset_min(&self, x: Fq) -> Fq {
        self.elements()
            .filter(|&a| self.0.wp_preimage[a.0 as usize].is_some())
            .map(|img| self.add(x, img))
            .min()
            .expect("0 is always in the image")
    }
}

impl Ring for FiniteField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        Fq::ONE
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::add(self, *a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        FiniteField::neg(self, *a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }
    fn from_bigint(&self, n: &BigInt) -> Fq {
        let r = n.mod_floor(&BigInt::from(self.0.p));
        Fq(r.to_u32().expect("reduced below p"))
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::sub(self, *a, *b)
    }
    fn pow(&self, a: &Fq, e: u64) -> Fq {
        FiniteField::pow(self, *a, e)
    }
}

/// Binary operations accepted by [`FqElem::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element bundled with its owning field, for checked mixed-field arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqElem {
    pub field: FiniteField,
    pub value: Fq,
}

impl FqElem {
    pub fn new(field: &FiniteField, value: u64) -> Result<Self, AlgebraError> {
        Ok(FqElem { field: field.clone(), value: field.check(value)? })
    }

    pub fn apply(&self, op: FqOp, other: &FqElem) -> Result<FqElem, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch);
        }
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            FqOp::Add => f.add(a, b),
            FqOp::Sub => f.sub(a, b),
            FqOp::Mul => f.mul(a, b),
            FqOp::Div => f.div(a, b)?,
        };
        Ok(FqElem { field: f.clone(), value })
    }

    pub fn pow(&self, e: u64) -> FqElem {
        FqElem { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }

    pub fn pth_root(&self) -> FqElem {
        FqElem { field: self.field.clone(), value: self.field.pth_root(self.value) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, s: u32) -> FiniteField {
        FiniteField::new(p, s).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(f(2, 1).modulus(), &[0, 1]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(f(3, 1).q(), 3);
        assert_eq!(f(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(f(2, 2), f(2, 2));
        assert_eq!(f(2, 3).modulus(), f(2, 3).modulus());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), AlgebraError::NotPrime(4));
        assert!(matches!(FiniteField::new(2, 0), Err(AlgebraError::ExtensionDegree { .. })));
        assert!(matches!(FiniteField::new(2, 17), Err(AlgebraError::ExtensionDegree { .. })));
        assert!(matches!(FiniteField::new(101, 3), Err(AlgebraError::FieldTooLarge { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f(2, 1);
        assert_eq!(f2.add(Fq(1), Fq(1)), Fq(0));
        // g = x, g*g = x^2 = x + 1 -> encoding 0b11
        let f4 = f(2, 2);
        assert_eq!(f4.mul(Fq(2), Fq(2)), Fq(3));
        let f3 = f(3, 1);
        assert_eq!(f3.pow(Fq(2), 3), Fq(2));
        assert_eq!(f3.div(Fq(1), Fq(0)), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn pth_root_examples() {
        assert_eq!(f(2, 1).pth_root(Fq(1)), Fq(1));
        let f4 = f(2, 2);
        // brute force table inversion of squaring
        let inverse_square = f4.elements().find(|&y| f4.mul(y, y) == Fq(2)).unwrap();
        assert_eq!(inverse_square, Fq(3));
        assert_eq!(f4.pth_root(Fq(2)), Fq(3));
        assert_eq!(f(3, 1).pth_root(Fq(2)), Fq(2));
    }

    #[test]
    fn wp_image_examples() {
        let f2 = f(2, 1);
        assert!(f2.in_wp_image(Fq(0)));
        assert!(!f2.in_wp_image(Fq(1)));
        let f4 = f(2, 2);
        assert!(f4.in_wp_image(Fq(1)));
        assert_eq!(f4.wp(Fq(2)), Fq(1));
    }

    #[test]
    fn wp_image_matches_exhaustive_enumeration() {
        for (p, s) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (2, 6)] {
            let field = f(p, s);
            let image: std::collections::BTreeSet<Fq> = field.elements().map(|a| field.wp(a)).collect();
            for x in field.elements() {
                assert_eq!(field.in_wp_image(x), image.contains(&x), "F_{} at {x}", field.q());
            }
        }
    }

    #[test]
    fn frobenius_laws_hold_everywhere() {
        for (p, s) in [(2, 3), (3, 2), (5, 1), (2, 4)] {
            let field = f(p, s);
            for x in field.elements() {
                assert_eq!(field.pow(x, field.q() as u64), x);
                for y in field.elements() {
                    assert_eq!(
                        field.frobenius(field.add(x, y)),
                        field.add(field.frobenius(x), field.frobenius(y))
                    );
                }
            }
        }
    }

    #[test]
    fn checked_elements_reject_mixed_fields() {
        let a = FqElem::new(&f(2, 1), 1).unwrap();
        let b = FqElem::new(&f(3, 1), 1).unwrap();
        assert_eq!(a.apply(FqOp::Add, &b), Err(AlgebraError::FieldMismatch));
        assert_eq!(a.apply(FqOp::Add, &a).unwrap().value, Fq(0));
        assert!(FqElem::new(&f(2, 1), 2).is_err());
    }

    #[test]
    fn coset_minimum() {
        let f2 = f(2, 1);
        assert_eq!(f2.wp_coset_min(Fq(1)), Fq(1));
        let f4 = f(2, 2);
        // image of wp in F_4 is {0, 1}
        assert_eq!(f4.wp_coset_min(Fq(1)), Fq(0));
        assert_eq!(f4.wp_coset_min(Fq(3)), Fq(2));
    }
}
