//! The rational function field k = F_q(T) and partial fractions.

use std::fmt;

use num_bigint::BigInt;

use super::field::{FiniteField, Fq};
use super::poly::{Poly, PolyRing};
use super::AlgebraError;
use crate::ring::{FqAlgebra, Ring};

/// A reduced fraction num/den with den monic; zero is 0/1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }
    /// deg num < deg den, or zero.
    pub fn is_proper(&self) -> bool {
        self.num.degree() < self.den.degree()
    }
    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }
}

fn needs_parens(p: &Poly) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

/// One summand Q / P^e of a partial fraction decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFraction {
    pub prime: Poly,
    pub exponent: u32,
    pub numer: Poly,
}

/// f = polynomial part + sum of Q/P^e, one term per prime, sorted by prime.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialFractions {
    pub poly_part: Poly,
    pub terms: Vec<PartialFraction>,
}

/// The field F_q(T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunField {
    ring: PolyRing,
}

impl RatFunField {
    pub fn new(field: FiniteField) -> Self {
        RatFunField { ring: PolyRing::new(field) }
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &FiniteField {
        self.ring.field()
    }

    pub fn make(&self, num: Poly, den: Poly) -> Result<RationalFunction, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.reduce(num, den))
    }

    fn reduce(&self, num: Poly, den: Poly) -> RationalFunction {
        let r = &self.ring;
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = r.gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (r.div_exact(&num, &g).expect("gcd divides"), r.div_exact(&den, &g).expect("gcd divides"))
        };
        let lead = den.leading();
        if lead != Fq::ONE {
            let inv = r.field().inv(lead).expect("nonzero");
            num = r.scale(inv, &num);
            den = r.scale(inv, &den);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(&self, p: Poly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }

    pub fn constant(&self, c: Fq) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let r = &self.ring;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return self.reduce(r.add(&a.num, &b.num), a.den.clone());
        }
        let g = r.gcd(&a.den, &b.den);
        if g.is_one() {
            let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
            // already coprime to the product of coprime denominators
            return RationalFunction { num, den: r.mul(&a.den, &b.den) };
        }
        let bd = r.div_exact(&b.den, &g).expect("gcd divides");
        let ad = r.div_exact(&a.den, &g).expect("gcd divides");
        let num = r.add(&r.mul(&a.num, &bd), &r.mul(&b.num, &ad));
        let den = r.mul(&a.den, &bd);
        self.reduce(num, den)
    }

    pub fn neg(&self, a: &RationalFunction) -> RationalFunction {
        RationalFunction { num: self.ring.neg(&a.num), den: a.den.clone() }
    }

    pub fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        let r = &self.ring;
        if a.is_zero() || b.is_zero() {
            return RationalFunction::from_poly(Poly::zero());
        }
        let g1 = r.gcd(&a.num, &b.den);
        let g2 = r.gcd(&b.num, &a.den);
        let an = r.div_exact(&a.num, &g1).expect("gcd divides");
        let bd = r.div_exact(&b.den, &g1).expect("gcd divides");
        let bn = r.div_exact(&b.num, &g2).expect("gcd divides");
        let ad = r.div_exact(&a.den, &g2).expect("gcd divides");
        // product of monic denominators stays monic
        RationalFunction { num: r.mul(&an, &bn), den: r.mul(&ad, &bd) }
    }

    pub fn inv(&self, a: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.make(a.den.clone(), a.num.clone())
    }

    pub fn div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &RationalFunction, e: u64) -> RationalFunction {
        RationalFunction { num: self.ring.pow(&a.num, e), den: self.ring.pow(&a.den, e) }
    }

    /// c^p - c.
    pub fn wp(&self, c: &RationalFunction) -> RationalFunction {
        let p = self.field().p() as u64;
        self.sub(&self.pow(c, p), c)
    }

    /// Substitutes T -> 1/T and reduces.
    pub fn invert_variable(&self, a: &RationalFunction) -> RationalFunction {
        if a.is_zero() {
            return a.clone();
        }
        let r = &self.ring;
        let dn = a.num.len() - 1;
        let dd = a.den.len() - 1;
        // a(1/T) = T^{dd-dn} rev(num)/rev(den)
        let (num, den) = if dd >= dn {
            (r.shift(&r.reverse(&a.num, dn), dd - dn), r.reverse(&a.den, dd))
        } else {
            (r.reverse(&a.num, dn), r.shift(&r.reverse(&a.den, dd), dn - dd))
        };
        self.reduce(num, den)
    }

    pub fn partial_fractions(&self, f: &RationalFunction) -> PartialFractions {
        let r = &self.ring;
        let (poly_part, rem) = r.divmod(&f.num, &f.den).expect("denominator is nonzero");
        if rem.is_zero() {
            return PartialFractions { poly_part, terms: Vec::new() };
        }
        let mut terms = Vec::new();
        for (prime, e) in r.factor(&f.den).expect("nonzero denominator") {
            let pe = r.pow(&prime, e as u64);
            let cofactor = r.div_exact(&f.den, &pe).expect("factor divides");
            let inv = r.inverse_mod(&cofactor, &pe).expect("coprime prime-power parts");
            let mut numer = r.mulmod(&rem, &inv, &pe);
            let mut exponent = e;
            while exponent > 0 && !numer.is_zero() {
                let (quot, rr) = r.divmod(&numer, &prime).expect("nonzero");
                if !rr.is_zero() {
                    break;
                }
                numer = quot;
                exponent -= 1;
            }
            if !numer.is_zero() && exponent > 0 {
                terms.push(PartialFraction { prime, exponent, numer });
            }
        }
        PartialFractions { poly_part, terms }
    }

    pub fn recombine(&self, pf: &PartialFractions) -> RationalFunction {
        let r = &self.ring;
        pf.terms.iter().fold(self.from_poly(pf.poly_part.clone()), |acc, t| {
            let term = self
                .make(t.numer.clone(), r.pow(&t.prime, t.exponent as u64))
                .expect("prime power is nonzero");
            self.add(&acc, &term)
        })
    }

    pub fn parse(&self, text: &str) -> Result<RationalFunction, AlgebraError> {
        let text = text.trim();
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(AlgebraError::Parse(format!("more than one '/' in {text:?}")));
                    }
                    split = Some(i);
                }
                _ => {}
            }
            if depth < 0 {
                return Err(AlgebraError::Parse(format!("unbalanced parentheses in {text:?}")));
            }
        }
        if depth != 0 {
            return Err(AlgebraError::Parse(format!("unbalanced parentheses in {text:?}")));
        }
        let strip = |s: &str| -> String {
            let s = s.trim();
            match s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                Some(inner) => inner.to_string(),
                None => s.to_string(),
            }
        };
        match split {
            None => {
                let inner = strip(text);
                if inner.contains('/') {
                    return self.parse(&inner);
                }
                Ok(self.from_poly(self.ring.parse(&inner)?))
            }
            Some(i) => {
                let num = self.ring.parse(&strip(&text[..i]))?;
                let den = self.ring.parse(&strip(&text[i + 1..]))?;
                self.make(num, den)
            }
        }
    }
}

impl Ring for RatFunField {
    type Elem = RationalFunction;

    fn zero(&self) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero())
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::from_poly(Poly::one())
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        RatFunField::add(self, a, b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        RatFunField::neg(self, a)
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        RatFunField::mul(self, a, b)
    }
    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.field().p() as u64
    }
    fn from_bigint(&self, n: &BigInt) -> RationalFunction {
        self.constant(Ring::from_bigint(self.field(), n))
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        RatFunField::sub(self, a, b)
    }
    fn pow(&self, a: &RationalFunction, e: u64) -> RationalFunction {
        RatFunField::pow(self, a, e)
    }
}

impl FqAlgebra for RatFunField {
    fn scalar(&self, c: Fq) -> RationalFunction {
        self.constant(c)
    }
    fn t_image(&self) -> RationalFunction {
        self.from_poly(Poly::t())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u32, s: u32) -> RatFunField {
        RatFunField::new(FiniteField::new(p, s).unwrap())
    }

    #[test]
    fn parse_and_print() {
        let k = k(2, 1);
        for text in ["1/T^2", "(T^2+1)/T", "1/(T^2+T)", "T^2+1", "0", "T/(T^2+T+1)"] {
            assert_eq!(k.parse(text).unwrap().to_string(), text);
        }
        assert_eq!(k.parse("T/T^2").unwrap().to_string(), "1/T");
        assert_eq!(k.parse("(1/T)").unwrap().to_string(), "1/T");
        assert!(k.parse("1/0").is_err());
        assert!(k.parse("(1/T").is_err());
    }

    #[test]
    fn partial_fraction_examples() {
        let k = k(2, 1);
        let pf = k.partial_fractions(&k.parse("0").unwrap());
        assert_eq!(pf, PartialFractions::default());

        let f = k.parse("1/(T^2+T)").unwrap();
        let pf = k.partial_fractions(&f);
        assert!(pf.poly_part.is_zero());
        let summary: Vec<_> = pf
            .terms
            .iter()
            .map(|t| (t.prime.to_string(), t.exponent, t.numer.to_string()))
            .collect();
        assert_eq!(summary, vec![("T".into(), 1, "1".into()), ("T+1".into(), 1, "1".into())]);
        assert_eq!(k.recombine(&pf), f);

        let f = k.parse("(T^3+T+1)/T").unwrap();
        let pf = k.partial_fractions(&f);
        assert_eq!(pf.poly_part.to_string(), "T^2+1");
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(k.recombine(&pf), f);
    }

    #[test]
    fn invert_variable_examples() {
        let k = k(2, 1);
        let p = |s: &str| k.parse(s).unwrap();
        assert_eq!(k.invert_variable(&p("T")), p("1/T"));
        assert_eq!(k.invert_variable(&p("1/T")), p("T"));
        assert_eq!(k.invert_variable(&p("(T^2+1)/T")), p("(T^2+1)/T"));
        let f = p("(T^3+T)/(T^2+T+1)");
        assert_eq!(k.invert_variable(&k.invert_variable(&f)), f);
    }

    #[test]
    fn wp_of_reciprocal() {
        let k = k(2, 1);
        assert_eq!(k.wp(&k.parse("1/T").unwrap()), k.parse("(T+1)/T^2").unwrap());
    }
}
