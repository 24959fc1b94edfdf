//! The commutative-ring interface shared by every coefficient domain.
//!
//! Rings are context objects: elements are plain values and all arithmetic
//! goes through the ring, which carries whatever tables or moduli the
//! elements need. This lets the Witt-vector machinery evaluate its universal
//! polynomials over finite fields, rational function fields, residue rings
//! and the integers with one code path.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::Fq;

pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Characteristic of the ring; 0 for the integers.
    fn characteristic(&self) -> u64;

    /// Image of an integer under the unique ring map from Z.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        let char = self.characteristic();
        let reduced = if char == 0 {
            n.clone()
        } else {
            n.mod_floor_big(char)
        };
        let mut acc = self.zero();
        let mut base = self.one();
        let mut e = reduced.abs();
        while !e.is_zero() {
            if (&e & BigInt::one()).is_one() {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        if reduced.is_negative() {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
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
}

/// An F_q[T]-algebra: a ring with a structure map from F_q and a chosen image of T.
pub trait FqAlgebra: Ring {
    fn scalar(&self, c: Fq) -> Self::Elem;
    fn t_image(&self) -> Self::Elem;
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: u64) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: u64) -> BigInt {
        let m = BigInt::from(m);
        let r = self % &m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// The integers, used as a torsion-free test domain for Witt vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_pow_and_embedding() {
        let z = Integers;
        assert_eq!(z.pow(&BigInt::from(3), 5), BigInt::from(243));
        assert_eq!(z.from_i64(-7), BigInt::from(-7));
    }
}
