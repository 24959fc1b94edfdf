//! Universal Witt polynomials built by the ghost recursion over Z.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::mpoly::MPoly;
use super::WittError;
use crate::ring::Ring;

/// Default largest Witt length for which tables are built.
pub const DEFAULT_MAX_LENGTH: usize = 4;

/// Sum, negation and product polynomials for W_n over Z[X_1..X_n, Y_1..Y_n].
///
/// Variable i < n is X_{i+1}, variable n + i is Y_{i+1}. Product
/// polynomials are built on first use.
pub struct WittTables {
    p: u32,
    n: usize,
    sum: Vec<MPoly>,
    neg: Vec<MPoly>,
    prod: OnceLock<Vec<MPoly>>,
    sum_c: Vec<Compiled>,
    neg_c: Vec<Compiled>,
    prod_c: OnceLock<Vec<Compiled>>,
}

type CacheSlot = Arc<OnceLock<Result<Arc<WittTables>, WittError>>>;

fn cache() -> &'static Mutex<HashMap<(u32, usize), CacheSlot>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), CacheSlot>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ghost polynomial w_i = sum_{j <= i} p^{j-1} V_j^{p^{i-j}} with V_j = variable offset + j - 1.
fn ghost_poly(p: u32, i: usize, nvars: usize, offset: usize) -> MPoly {
    let mut acc = MPoly::zero(nvars);
    for j in 1..=i {
        let coeff = BigInt::from(p).pow((j - 1) as u32);
        let term = MPoly::var(nvars, offset + j - 1).pow((p as u64).pow((i - j) as u32));
        acc = acc.add(&term.scale(&coeff));
    }
    acc
}

/// Solves sum_{j <= i} p^{j-1} S_j^{p^{i-j}} = G_i for S_1..S_n.
fn ghost_solve(p: u32, targets: &[MPoly]) -> Result<Vec<MPoly>, WittError> {
    let mut out: Vec<MPoly> = Vec::with_capacity(targets.len());
    for (idx, g) in targets.iter().enumerate() {
        let i = idx + 1;
        let mut rest = g.clone();
        for (jdx, s) in out.iter().enumerate() {
            let j = jdx + 1;
            let coeff = BigInt::from(p).pow((j - 1) as u32);
            rest = rest.sub(&s.pow((p as u64).pow((i - j) as u32)).scale(&coeff));
        }
        let div = BigInt::from(p).pow((i - 1) as u32);
        let s = rest
            .div_exact(&div)
            .ok_or_else(|| WittError::Internal(format!("inexact division by {div} at component {i}")))?;
        out.push(s);
    }
    Ok(out)
}

impl WittTables {
    /// Cached tables for (p, n) with the default length bound.
    pub fn get(p: u32, n: usize) -> Result<Arc<WittTables>, WittError> {
        Self::get_bounded(p, n, DEFAULT_MAX_LENGTH)
    }

    pub fn get_bounded(p: u32, n: usize, max_len: usize) -> Result<Arc<WittTables>, WittError> {
        if n == 0 || n > max_len {
            return Err(WittError::LengthBound { n, max: max_len });
        }
        if !crate::algebra::is_prime(p as u64) {
            return Err(WittError::NotPrime(p));
        }
        let slot = {
            let mut map = cache().lock().expect("witt table cache poisoned");
            map.entry((p, n)).or_default().clone()
        };
        slot.get_or_init(|| Self::build(p, n).map(Arc::new)).clone()
    }

    fn build(p: u32, n: usize) -> Result<WittTables, WittError> {
        let nv = 2 * n;
        let sum_targets: Vec<MPoly> =
            (1..=n).map(|i| ghost_poly(p, i, nv, 0).add(&ghost_poly(p, i, nv, n))).collect();
        let neg_targets: Vec<MPoly> = (1..=n).map(|i| ghost_poly(p, i, nv, 0).neg()).collect();
        let sum = ghost_solve(p, &sum_targets)?;
        let neg = ghost_solve(p, &neg_targets)?;
        let sum_c = sum.iter().map(|f| Compiled::new(f, p)).collect();
        let neg_c = neg.iter().map(|f| Compiled::new(f, p)).collect();
        Ok(WittTables { p, n, sum, neg, prod: OnceLock::new(), sum_c, neg_c, prod_c: OnceLock::new() })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sum_polys(&self) -> &[MPoly] {
        &self.sum
    }

    pub fn neg_polys(&self) -> &[MPoly] {
        &self.neg
    }

    pub fn prod_polys(&self) -> &[MPoly] {
        self.prod.get_or_init(|| {
            let nv = 2 * self.n;
            let targets: Vec<MPoly> = (1..=self.n)
                .map(|i| ghost_poly(self.p, i, nv, 0).mul(&ghost_poly(self.p, i, nv, self.n)))
                .collect();
            // sum and negation succeeded for this p, so the product recursion is exact too
            ghost_solve(self.p, &targets).expect("product ghost recursion is exact")
        })
    }

    pub(crate) fn sum_compiled(&self) -> &[Compiled] {
        &self.sum_c
    }

    pub(crate) fn neg_compiled(&self) -> &[Compiled] {
        &self.neg_c
    }

    pub(crate) fn prod_compiled(&self) -> &[Compiled] {
        self.prod_c
            .get_or_init(|| self.prod_polys().iter().map(|f| Compiled::new(f, self.p)).collect())
    }

    /// Re-derives the ghost identities for all three operations as polynomial identities over Z.
    pub fn verify_ghost_compatibility(&self) -> bool {
        let (p, n) = (self.p, self.n);
        let nv = 2 * n;
        let ghost_of = |polys: &[MPoly], i: usize| -> MPoly {
            let mut acc = MPoly::zero(nv);
            for j in 1..=i {
                let coeff = BigInt::from(p).pow((j - 1) as u32);
                acc = acc.add(&polys[j - 1].pow((p as u64).pow((i - j) as u32)).scale(&coeff));
            }
            acc
        };
        (1..=n).all(|i| {
            let gx = ghost_poly(p, i, nv, 0);
            let gy = ghost_poly(p, i, nv, n);
            ghost_of(&self.sum, i) == gx.add(&gy)
                && ghost_of(&self.neg, i) == gx.neg()
                && ghost_of(self.prod_polys(), i) == gx.mul(&gy)
        })
    }
}

/// A polynomial flattened for repeated evaluation.
pub(crate) struct Compiled {
    terms: Vec<Term>,
}

struct Term {
    coeff: BigInt,
    coeff_mod_p: u32,
    vars: Vec<(usize, u32)>,
}

impl Compiled {
    fn new(f: &MPoly, p: u32) -> Compiled {
        let terms = f
            .terms()
            .map(|(exps, c)| {
                let vars: Vec<(usize, u32)> =
                    exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, &e)| (v, e)).collect();
                let coeff_mod_p = c.mod_floor(&BigInt::from(p)).to_u32().expect("residue below p");
                Term { coeff: c.clone(), coeff_mod_p, vars }
            })
            .collect();
        Compiled { terms }
    }

    pub(crate) fn eval<R: Ring>(&self, ring: &R, powers: &mut PowerCache<R>) -> R::Elem {
        let char_p = ring.characteristic() != 0;
        let mut acc = ring.zero();
        'terms: for t in &self.terms {
            if char_p && t.coeff_mod_p == 0 {
                continue;
            }
            let mut prod: Option<R::Elem> = None;
            for &(v, e) in &t.vars {
                if powers.is_zero(v) {
                    continue 'terms;
                }
                let pw = powers.get(ring, v, e);
                prod = Some(match prod {
                    None => pw.clone(),
                    Some(x) => ring.mul(&x, pw),
                });
            }
            let mono = prod.unwrap_or_else(|| ring.one());
            let scaled = if char_p {
                match t.coeff_mod_p {
                    1 => mono,
                    c => ring.mul(&ring.from_i64(c as i64), &mono),
                }
            } else if t.coeff.is_one() {
                mono
            } else {
                ring.mul(&ring.from_bigint(&t.coeff), &mono)
            };
            acc = ring.add(&acc, &scaled);
        }
        acc
    }
}

/// Lazily computed powers of the evaluation point's coordinates.
pub(crate) struct PowerCache<'a, R: Ring> {
    vals: Vec<&'a R::Elem>,
    zero: Vec<bool>,
    cache: Vec<HashMap<u32, R::Elem>>,
}

impl<'a, R: Ring> PowerCache<'a, R> {
    pub(crate) fn new(ring: &R, vals: Vec<&'a R::Elem>) -> Self {
        let zero = vals.iter().map(|v| ring.is_zero(v)).collect();
        let cache = vals.iter().map(|_| HashMap::new()).collect();
        PowerCache { vals, zero, cache }
    }

    fn is_zero(&self, v: usize) -> bool {
        self.zero[v]
    }

    fn get(&mut self, ring: &R, v: usize, e: u32) -> &R::Elem {
        let val = self.vals[v];
        self.cache[v].entry(e).or_insert_with(|| if e == 1 { val.clone() } else { ring.pow(val, e as u64) })
    }
}

impl std::fmt::Debug for WittTables {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WittTables(p={}, n={})", self.p, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sum_polynomials() {
        let t = WittTables::get(2, 1).unwrap();
        assert_eq!(t.sum_polys()[0].to_string(), "X1 + Y1");
        let t = WittTables::get(2, 2).unwrap();
        assert_eq!(t.sum_polys()[1].to_string(), "-X1*Y1 + X2 + Y2");
        let t = WittTables::get(3, 2).unwrap();
        assert_eq!(t.sum_polys()[1].to_string(), "-X1^2*Y1 - X1*Y1^2 + X2 + Y2");
    }

    #[test]
    fn length_bound_enforced() {
        assert_eq!(WittTables::get(2, 5).unwrap_err(), WittError::LengthBound { n: 5, max: 4 });
        assert!(WittTables::get_bounded(2, 5, 5).is_ok());
        assert!(WittTables::get(4, 2).is_err());
    }

    #[test]
    fn cache_returns_one_table() {
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| WittTables::get(3, 3).unwrap())).collect();
        let tables: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(tables.windows(2).all(|w| Arc::ptr_eq(&w[0], &w[1])));
    }

    #[test]
    fn ghost_compatibility_small() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
            assert!(WittTables::get(p, n).unwrap().verify_ghost_compatibility(), "p={p} n={n}");
        }
    }
}
