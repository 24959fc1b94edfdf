//! Exact arithmetic for F_q, F_q[T], F_q(T) and the residue rings F_q[T]/(N).

mod field;
mod poly;
mod ratfun;
mod residue;

pub use field::{is_prime, prime_factors, FiniteField, Fq, FqElem, FqOp, MAX_EXTENSION_DEGREE, MAX_FIELD_ORDER};
pub use poly::{Degree, Poly, PolyRing};
pub use ratfun::{PartialFraction, PartialFractions, RatFunField, RationalFunction};
pub use residue::{phi, phi_prime_power, ResidueRing, DEFAULT_ENUMERATION_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {s} outside 1..={max}")]
    ExtensionDegree { s: u32, max: u32 },
    #[error("field of order {p}^{s} exceeds the supported order {max}")]
    FieldTooLarge { p: u32, s: u32, max: u32 },
    #[error("{value} is not an element encoding of F_{q}")]
    NotInField { value: u64, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact")]
    NotDivisible,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("enumeration of {needed} elements exceeds cap {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
