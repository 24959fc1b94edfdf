//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A polynomial in `nvars` variables over Z, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut out = MPoly::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut out = MPoly::zero(nvars);
        out.terms.insert(exps, BigInt::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides every coefficient by `k`; `None` if some division is inexact.
    pub fn div_exact(&self, k: &BigInt) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (quot, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return None;
            }
            terms.insert(e.clone(), quot);
        }
        Some(MPoly { nvars: self.nvars, terms })
    }
}

impl fmt::Display for MPoly {
    /// Variables print as X1..Xn, Y1..Yn when the variable count is even, else as V0.. .
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let half = self.nvars / 2;
        let name = |i: usize| -> String {
            if self.nvars % 2 == 0 && half > 0 {
                if i < half {
                    format!("X{}", i + 1)
                } else {
                    format!("Y{}", i - half + 1)
                }
            } else {
                format!("V{i}")
            }
        };
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (exps, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { name(i) } else { format!("{}^{}", name(i), e) })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
