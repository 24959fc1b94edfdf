//! Residue rings F_q[T]/(N), their unit groups, and the polynomial Euler function.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use super::field::{prime_factors, Fq};
use super::poly::{Poly, PolyRing};
use super::AlgebraError;
use crate::ring::{FqAlgebra, Ring};

/// Default bound on the number of ring elements an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// F_q[T]/(N) with representatives of degree < deg N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    ring: PolyRing,
    modulus: Poly,
}

impl ResidueRing {
    pub fn new(ring: PolyRing, modulus: &Poly) -> Result<Self, AlgebraError> {
        if modulus.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let modulus = ring.monic(modulus);
        Ok(ResidueRing { ring, modulus })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// q^{deg N}, the number of residues, if it fits in u64.
    pub fn size(&self) -> Option<u64> {
        (self.ring.field().q() as u64).checked_pow(self.degree() as u32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        self.ring.rem(a, &self.modulus).expect("nonzero modulus")
    }

    pub fn is_unit(&self, a: &Poly) -> bool {
        self.ring.gcd(&self.reduce(a), &self.modulus).is_one()
    }

    fn check_cap(&self, cap: u64) -> Result<u64, AlgebraError> {
        self.size().filter(|&n| n <= cap).ok_or_else(|| AlgebraError::CapExceeded {
            needed: format!("{}^{}", self.ring.field().q(), self.degree()),
            cap,
        })
    }

    /// Every unit, in increasing integer-index order of the representative.
    pub fn units(&self, cap: u64) -> Result<impl Iterator<Item = Poly> + '_, AlgebraError> {
        let size = self.check_cap(cap)?;
        let deg = self.degree();
        Ok((0..size)
            .map(move |idx| self.ring.poly_from_index(idx, deg))
            .filter(move |a| self.ring.gcd(a, &self.modulus).is_one()))
    }

    /// Multiplicative order of a unit, by stripping prime factors off Phi(N).
    pub fn elem_order(&self, a: &Poly) -> Result<u64, AlgebraError> {
        if !self.is_unit(a) {
            return Err(AlgebraError::NotAUnit);
        }
        let phi = phi(&self.ring, &self.modulus)?
            .to_u64()
            .ok_or_else(|| AlgebraError::CapExceeded { needed: "Phi(N) < 2^64".into(), cap: u64::MAX })?;
        let a = self.reduce(a);
        let one = self.reduce(&Poly::one());
        let mut order = phi;
        for r in prime_factors(phi) {
            while order % r == 0 && self.ring.powmod(&a, order / r, &self.modulus) == one {
                order /= r;
            }
        }
        Ok(order)
    }
}

/// Phi(P^i) = q^{d(i-1)} (q^d - 1) for P irreducible of degree d.
pub fn phi_prime_power(q: u64, d: u32, i: u32) -> BigUint {
    if i == 0 {
        return BigUint::one();
    }
    let qd = BigUint::from(q).pow(d);
    qd.pow(i - 1) * (&qd - 1u32)
}

/// |(F_q[T]/N)^*|, computed multiplicatively from the factorization of N.
pub fn phi(ring: &PolyRing, n: &Poly) -> Result<BigUint, AlgebraError> {
    let q = ring.field().q() as u64;
    Ok(ring
        .factor(n)?
        .iter()
        .map(|(p, e)| phi_prime_power(q, (p.len() - 1) as u32, *e))
        .product())
}

impl Ring for ResidueRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        self.reduce(&Poly::one())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.add(a, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        self.ring.neg(a)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.mulmod(a, b, &self.modulus)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.ring.field().p() as u64
    }
    fn from_bigint(&self, n: &BigInt) -> Poly {
        self.reduce(&Poly::constant(Ring::from_bigint(self.ring.field(), n)))
    }
}

impl FqAlgebra for ResidueRing {
    fn scalar(&self, c: Fq) -> Poly {
        self.reduce(&Poly::constant(c))
    }
    fn t_image(&self) -> Poly {
        self.reduce(&Poly::t())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteField;

    fn ring(p: u32, s: u32) -> PolyRing {
        PolyRing::new(FiniteField::new(p, s).unwrap())
    }

    #[test]
    fn phi_examples() {
        let r = ring(2, 1);
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(phi(&r, &p("T")).unwrap(), BigUint::from(1u32));
        assert_eq!(phi(&r, &p("T^3")).unwrap(), BigUint::from(4u32));
        assert_eq!(phi(&r, &p("T^2+T")).unwrap(), BigUint::from(1u32));
        assert_eq!(phi(&r, &Poly::zero()), Err(AlgebraError::ZeroPolynomial));
    }

    #[test]
    fn unit_enumeration_examples() {
        let r = ring(2, 1);
        let n = r.parse("T^2").unwrap();
        let rr = ResidueRing::new(r.clone(), &n).unwrap();
        let units: Vec<String> = rr.units(DEFAULT_ENUMERATION_CAP).unwrap().map(|u| u.to_string()).collect();
        assert_eq!(units, vec!["1", "T+1"]);
        let n3 = ResidueRing::new(r.clone(), &r.parse("T^3").unwrap()).unwrap();
        let units: Vec<String> = n3.units(DEFAULT_ENUMERATION_CAP).unwrap().map(|u| u.to_string()).collect();
        assert_eq!(units, vec!["1", "T+1", "T^2+1", "T^2+T+1"]);
        assert!(n3.units(4).is_err());
    }

    #[test]
    fn order_examples() {
        let r = ring(2, 1);
        let rr = ResidueRing::new(r.clone(), &r.parse("T^3").unwrap()).unwrap();
        assert_eq!(rr.elem_order(&r.parse("T+1").unwrap()).unwrap(), 4);
        assert_eq!(rr.elem_order(&Poly::one()).unwrap(), 1);
        assert_eq!(rr.elem_order(&r.parse("T").unwrap()), Err(AlgebraError::NotAUnit));
    }

    #[test]
    fn phi_matches_unit_count() {
        for (p, s) in [(2, 1), (3, 1), (2, 2)] {
            let r = ring(p, s);
            for n in r.polys_below_degree(5).filter(|n| n.len() > 1).take(200) {
                let rr = ResidueRing::new(r.clone(), &n).unwrap();
                let count = rr.units(DEFAULT_ENUMERATION_CAP).unwrap().count();
                assert_eq!(phi(&r, &n).unwrap(), BigUint::from(count), "N = {n}");
            }
        }
    }

    #[test]
    fn one_plus_p_subgroup_has_p_power_orders() {
        let r = ring(3, 1);
        let prime = r.parse("T^2+1").unwrap();
        let n = r.pow(&prime, 3);
        let rr = ResidueRing::new(r.clone(), &n).unwrap();
        for h in r.polys_below_degree(4) {
            let a = r.add(&Poly::one(), &r.mul(&h, &prime));
            let ord = rr.elem_order(&a).unwrap();
            let mut o = ord;
            while o % 3 == 0 {
                o /= 3;
            }
            assert_eq!(o, 1, "order {ord} of {a}");
        }
    }
}
