//! Truncated p-typical Witt vectors over an arbitrary coefficient ring.
//!
//! Arithmetic evaluates the universal integer polynomials from
//! [`WittTables`] in the coefficient ring. Over a ring of characteristic p
//! the integer coefficients are reduced mod p first; over the integers they
//! are used as is, which makes the ghost map available as a test oracle.

mod mpoly;
mod tables;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

pub use mpoly::MPoly;
pub use tables::{WittTables, DEFAULT_MAX_LENGTH};

use crate::algebra::AlgebraError;
use crate::ring::Ring;
use tables::{Compiled, PowerCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("Witt length {n} outside 1..={max}")]
    LengthBound { n: usize, max: usize },
    #[error("Witt vectors of lengths {left} and {right} cannot be combined")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("coefficient ring has characteristic {found}, expected {expected}")]
    Characteristic { found: u64, expected: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// A Witt vector (x_1, ..., x_n). Components are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector<E> {
    comps: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn new(comps: Vec<E>) -> Self {
        WittVector { comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> &[E] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<E> {
        self.comps
    }
}

impl<E: fmt::Display> fmt::Display for WittVector<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Splits "(a, b, c)" into its top-level components.
pub fn split_components(text: &str) -> Result<Vec<String>, WittError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| WittError::Parse(format!("expected a parenthesized vector, got {t:?}")))?;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(WittError::Parse(format!("unbalanced parentheses in {t:?}")));
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(WittError::Parse(format!("unbalanced parentheses in {t:?}")));
    }
    out.push(cur.trim().to_string());
    if out.iter().any(|c| c.is_empty()) {
        return Err(WittError::Parse(format!("empty component in {t:?}")));
    }
    Ok(out)
}

/// W_n(R) for a coefficient ring R of characteristic p or 0.
#[derive(Clone)]
pub struct WittRing<R: Ring> {
    base: R,
    tables: Arc<WittTables>,
}

impl<R: Ring + fmt::Debug> fmt::Debug for WittRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({:?})", self.tables.n(), self.base)
    }
}

impl<R: Ring> WittRing<R> {
    pub fn new(base: R, p: u32, n: usize) -> Result<Self, WittError> {
        Self::with_bound(base, p, n, DEFAULT_MAX_LENGTH)
    }

    pub fn with_bound(base: R, p: u32, n: usize, max_len: usize) -> Result<Self, WittError> {
        let ch = base.characteristic();
        if ch != 0 && ch != p as u64 {
            return Err(WittError::Characteristic { found: ch, expected: format!("0 or {p}") });
        }
        let tables = WittTables::get_bounded(p, n, max_len)?;
        Ok(WittRing { base, tables })
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.tables.p()
    }

    pub fn n(&self) -> usize {
        self.tables.n()
    }

    pub fn tables(&self) -> &WittTables {
        &self.tables
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        WittVector::new(vec![self.base.zero(); self.n()])
    }

    pub fn one(&self) -> WittVector<R::Elem> {
        self.single(0, self.base.one())
    }

    /// The vector with `c` at 0-based position `i` and zeros elsewhere.
    pub fn single(&self, i: usize, c: R::Elem) -> WittVector<R::Elem> {
        let mut comps = vec![self.base.zero(); self.n()];
        comps[i] = c;
        WittVector::new(comps)
    }

    pub fn make(&self, comps: Vec<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        if comps.len() != self.n() {
            return Err(WittError::LengthMismatch { left: self.n(), right: comps.len() });
        }
        Ok(WittVector::new(comps))
    }

    pub fn is_zero(&self, x: &WittVector<R::Elem>) -> bool {
        x.comps.iter().all(|c| self.base.is_zero(c))
    }

    fn check(&self, x: &WittVector<R::Elem>) -> Result<(), WittError> {
        if x.len() != self.n() {
            return Err(WittError::LengthMismatch { left: self.n(), right: x.len() });
        }
        Ok(())
    }

    fn binary(&self, polys: &[Compiled], x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let vals: Vec<&R::Elem> = x.comps.iter().chain(y.comps.iter()).collect();
        let mut cache = PowerCache::new(&self.base, vals);
        WittVector::new(polys.iter().map(|f| f.eval(&self.base, &mut cache)).collect())
    }

    pub fn add(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        self.check(y)?;
        if self.is_zero(y) {
            return Ok(x.clone());
        }
        if self.is_zero(x) {
            return Ok(y.clone());
        }
        Ok(self.binary(self.tables.sum_compiled(), x, y))
    }

    pub fn neg(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        let zero = self.zero();
        Ok(self.binary(self.tables.neg_compiled(), x, &zero))
    }

    pub fn sub(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.add(x, &self.neg(y)?)
    }

    pub fn mul(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.binary(self.tables.prod_compiled(), x, y))
    }

    /// m ⊙ x by double-and-add; in characteristic p, m is first reduced mod p^n.
    pub fn int_mul(&self, m: i64, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(x)?;
        let mut m = m as i128;
        if self.base.characteristic() != 0 {
            m = m.rem_euclid((self.p() as i128).pow(self.n() as u32));
        }
        let mut base = if m < 0 { self.neg(x)? } else { x.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = self.zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    fn require_char_p(&self) -> Result<(), WittError> {
        let ch = self.base.characteristic();
        if ch == 0 {
            return Err(WittError::Characteristic { found: 0, expected: self.p().to_string() });
        }
        Ok(())
    }

    /// Componentwise p-th power.
    pub fn frobenius(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.require_char_p()?;
        self.check(x)?;
        let p = self.p() as u64;
        Ok(WittVector::new(x.comps.iter().map(|c| self.base.pow(c, p)).collect()))
    }

    /// ℘(x) = F(x) ⊖ x.
    pub fn wp(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.sub(&self.frobenius(x)?, x)
    }

    /// Ghost components sum_{j <= i} p^{j-1} x_j^{p^{i-j}}; only over characteristic 0.
    pub fn ghost(&self, x: &WittVector<R::Elem>) -> Result<Vec<R::Elem>, WittError> {
        if self.base.characteristic() != 0 {
            return Err(WittError::Characteristic { found: self.base.characteristic(), expected: "0".into() });
        }
        self.check(x)?;
        let p = self.p();
        Ok((1..=self.n())
            .map(|i| {
                (1..=i).fold(self.base.zero(), |acc, j| {
                    let coeff = self.base.from_bigint(&BigInt::from(p).pow((j - 1) as u32));
                    let term = self.base.pow(&x.comps[j - 1], (p as u64).pow((i - j) as u32));
                    self.base.add(&acc, &self.base.mul(&coeff, &term))
                })
            })
            .collect())
    }

    /// ⊞-sum of a sequence of vectors.
    pub fn sum<'a, I>(&self, items: I) -> Result<WittVector<R::Elem>, WittError>
    where
        I: IntoIterator<Item = &'a WittVector<R::Elem>>,
        R::Elem: 'a,
    {
        items.into_iter().try_fold(self.zero(), |acc, v| self.add(&acc, v))
    }

    /// Parses "(c_1, ..., c_n)" with a component parser.
    pub fn parse<F>(&self, text: &str, component: F) -> Result<WittVector<R::Elem>, WittError>
    where
        F: Fn(&str) -> Result<R::Elem, AlgebraError>,
    {
        let parts = split_components(text)?;
        let comps = parts.iter().map(|s| component(s)).collect::<Result<Vec<_>, _>>()?;
        self.make(comps)
    }
}

/// Ghost map of an integer Witt vector, as a free function over BigInt components.
pub fn ghost_map(p: u32, x: &WittVector<BigInt>) -> Vec<BigInt> {
    (1..=x.len())
        .map(|i| {
            (1..=i).fold(BigInt::zero(), |acc, j| {
                acc + BigInt::from(p).pow((j - 1) as u32) * x.comps[j - 1].pow(p.pow((i - j) as u32))
            })
        })
        .collect()
}
