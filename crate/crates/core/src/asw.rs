//! Artin-Schreier-Witt generators over F_q(T) and their normal forms.
//!
//! A generator is a Witt vector β over k = F_q(T). Normalization adds
//! ℘(c) for an explicit certificate c, so the output is always checkable
//! against the input by Witt arithmetic alone.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteField, Fq, PartialFractions, Poly, PolyRing, RatFunField, RationalFunction};
use crate::witt::{WittError, WittRing, WittVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AswError {
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not in normal form: {0}")]
    NotNormal(String),
    #[error("invalid conductor data: {0}")]
    Conductor(String),
}

/// β = (β_1, ..., β_n) over F_q(T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AswGenerator {
    pub beta: WittVector<RationalFunction>,
}

impl AswGenerator {
    pub fn new(beta: WittVector<RationalFunction>) -> Self {
        AswGenerator { beta }
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }
}

impl fmt::Display for AswGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.beta)
    }
}

/// Pole data at one prime: levels[i] = (Q_{i+1}, λ_{i+1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBlock {
    pub prime: Poly,
    pub levels: Vec<(Poly, u32)>,
}

impl PrimeBlock {
    pub fn lambdas(&self) -> Vec<u32> {
        self.levels.iter().map(|(_, l)| *l).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AswNormalForm {
    pub n: usize,
    pub primes: Vec<PrimeBlock>,
    /// Polynomial parts f_1..f_n.
    pub mu: Vec<Poly>,
    pub certificate: WittVector<RationalFunction>,
    pub normalized_beta: WittVector<RationalFunction>,
}

impl AswNormalForm {
    pub fn block(&self, prime: &Poly) -> Option<&PrimeBlock> {
        self.primes.iter().find(|b| &b.prime == prime)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "primes": self.primes.iter().map(|b| json!({
                "P": b.prime.to_string(),
                "levels": b.levels.iter().map(|(q, l)| json!([q.to_string(), l])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "mu": self.mu.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "certificate": self.certificate.to_string(),
            "normalized_beta": self.normalized_beta.to_string(),
        })
    }
}

impl fmt::Display for AswNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "primes=[")?;
        for (k, b) in self.primes.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let levels: Vec<String> = b.levels.iter().map(|(q, l)| format!("({q}, {l})")).collect();
            write!(f, "({}, [{}])", b.prime, levels.join(", "))?;
        }
        let mu: Vec<String> = self.mu.iter().map(|m| m.to_string()).collect();
        write!(f, "] mu=[{}] certificate={} normalized={}", mu.join(", "), self.certificate, self.normalized_beta)
    }
}

/// Splitting type (e, f, g) of the infinite place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InfinityBehavior {
    pub s: usize,
    pub t: usize,
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

impl InfinityBehavior {
    pub fn label(&self) -> &'static str {
        match (self.e, self.f, self.g) {
            (1, 1, _) => "decomposed",
            (1, _, 1) => "inert",
            (_, 1, 1) => "ramified",
            _ => "mixed",
        }
    }
}

/// M_n = max_i p^{n-i} λ_i for a ramified prime.
pub fn conductor_exponent(p: u32, lambdas: &[u32]) -> Result<u64, AswError> {
    check_lambdas(p, lambdas)?;
    let n = lambdas.len();
    Ok(lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| (p as u64).pow((n - 1 - i) as u32) * l as u64)
        .max()
        .unwrap_or(0))
}

/// The same exponent through M_n = max{p M_{n-1}, λ_n}.
pub fn conductor_exponent_recursive(p: u32, lambdas: &[u32]) -> Result<u64, AswError> {
    check_lambdas(p, lambdas)?;
    Ok(lambdas[1..].iter().fold(lambdas[0] as u64, |m, &l| (p as u64 * m).max(l as u64)))
}

fn check_lambdas(p: u32, lambdas: &[u32]) -> Result<(), AswError> {
    match lambdas.first() {
        None => return Err(AswError::Conductor("empty λ vector".into())),
        Some(0) => return Err(AswError::Conductor("λ_1 = 0, the prime is not ramified".into())),
        _ => {}
    }
    if let Some(l) = lambdas.iter().find(|&&l| l > 0 && l % p == 0) {
        return Err(AswError::Conductor(format!("λ = {l} is divisible by p = {p}")));
    }
    Ok(())
}

/// Normalization context for W_n(F_q(T)).
#[derive(Clone, Debug)]
pub struct Asw {
    k: RatFunField,
    witt: WittRing<RatFunField>,
}

impl Asw {
    pub fn new(field: FiniteField, n: usize) -> Result<Self, AswError> {
        Self::with_bound(field, n, crate::witt::DEFAULT_MAX_LENGTH)
    }

    pub fn with_bound(field: FiniteField, n: usize, max_len: usize) -> Result<Self, AswError> {
        let p = field.p();
        let k = RatFunField::new(field);
        let witt = WittRing::with_bound(k.clone(), p, n, max_len)?;
        Ok(Asw { k, witt })
    }

    pub fn k(&self) -> &RatFunField {
        &self.k
    }

    pub fn witt(&self) -> &WittRing<RatFunField> {
        &self.witt
    }

    pub fn n(&self) -> usize {
        self.witt.n()
    }

    fn p(&self) -> u32 {
        self.k.field().p()
    }

    fn ring(&self) -> &PolyRing {
        self.k.poly_ring()
    }

    pub fn parse(&self, text: &str) -> Result<AswGenerator, AswError> {
        Ok(AswGenerator::new(self.witt.parse(text, |s| self.k.parse(s))?))
    }

    /// p-th root in F_q[T]/(P) for P irreducible: x^{p^{sd-1}}.
    fn residue_pth_root(&self, x: &Poly, prime: &Poly) -> Poly {
        let r = self.ring();
        let sd = self.k.field().s() as usize * (prime.len() - 1);
        let mut y = r.rem(x, prime).expect("nonzero prime");
        for _ in 1..sd {
            y = r.powmod(&y, self.p() as u64, prime);
        }
        y
    }

    /// Hasse normal form of a single rational function: returns (β + ℘(c), c).
    pub fn hasse_normalize(&self, beta: &RationalFunction) -> (RationalFunction, RationalFunction) {
        let r = self.ring();
        let fld = self.k.field();
        let p = self.p();
        let pf = self.k.partial_fractions(beta);
        let mut cert = self.k.from_poly(Poly::zero());
        let mut terms = Vec::new();
        for mut term in pf.terms {
            while term.exponent > 0 && term.exponent % p == 0 {
                let m = term.exponent / p;
                let b = self.residue_pth_root(&term.numer, &term.prime);
                let pe_m = r.pow(&term.prime, (term.exponent - m) as u64);
                // adding ℘(-b/P^m) replaces Q by Q - b^p + b P^{e-m}
                let bp = r.pow(&b, p as u64);
                let mut numer = r.add(&r.sub(&term.numer, &bp), &r.mul(&b, &pe_m));
                let corr = self
                    .k
                    .make(r.neg(&b), r.pow(&term.prime, m as u64))
                    .expect("prime power is nonzero");
                cert = self.k.add(&cert, &corr);
                let mut e = term.exponent;
                while e > 0 && !numer.is_zero() && r.divides(&term.prime, &numer) {
                    numer = r.div_exact(&numer, &term.prime).expect("divisible");
                    e -= 1;
                }
                if numer.is_zero() {
                    e = 0;
                }
                term.numer = numer;
                term.exponent = e;
            }
            if term.exponent > 0 {
                terms.push(term);
            }
        }
        let mut f = pf.poly_part;
        while let Some(deg) = f.degree().finite() {
            if deg == 0 || deg % p as usize != 0 {
                break;
            }
            let m = deg / p as usize;
            let b = fld.pth_root(f.leading());
            // adding ℘(-b T^m) removes b^p T^{pm} and adds b T^m
            let bp_t = Poly::monomial(fld.pow(b, p as u64), deg);
            f = r.add(&r.sub(&f, &bp_t), &Poly::monomial(b, m));
            cert = self.k.add(&cert, &self.k.from_poly(Poly::monomial(fld.neg(b), m)));
        }
        let c0 = f.constant_term();
        let rep = fld.wp_coset_min(c0);
        if rep != c0 {
            let a = fld.wp_preimage(fld.sub(rep, c0)).expect("same coset");
            f = r.add(&f, &Poly::constant(fld.sub(rep, c0)));
            cert = self.k.add(&cert, &self.k.constant(a));
        }
        // terms may have merged into fewer primes; rebuild through recombination
        let out = self.k.recombine(&PartialFractions { poly_part: f, terms });
        (out, cert)
    }

    fn block_vector(&self, block: &PrimeBlock) -> WittVector<RationalFunction> {
        let r = self.ring();
        WittVector::new(
            block
                .levels
                .iter()
                .map(|(q, l)| {
                    self.k.make(q.clone(), r.pow(&block.prime, *l as u64)).expect("prime power is nonzero")
                })
                .collect(),
        )
    }

    fn mu_vector(&self, mu: &[Poly]) -> WittVector<RationalFunction> {
        WittVector::new(mu.iter().map(|f| self.k.from_poly(f.clone())).collect())
    }

    /// ⊞ of every prime block and μ.
    pub fn recompose(&self, primes: &[PrimeBlock], mu: &[Poly]) -> Result<WittVector<RationalFunction>, AswError> {
        let mut acc = self.witt.zero();
        for b in primes {
            acc = self.witt.add(&acc, &self.block_vector(b))?;
        }
        Ok(self.witt.add(&acc, &self.mu_vector(mu))?)
    }

    /// Level-by-level normalization with certificate.
    pub fn witt_normalize(&self, g: &AswGenerator) -> Result<AswNormalForm, AswError> {
        let w = &self.witt;
        let n = self.n();
        if g.n() != n {
            return Err(WittError::LengthMismatch { left: n, right: g.n() }.into());
        }
        let mut beta = g.beta.clone();
        let mut cert = w.zero();
        let mut blocks: BTreeMap<Poly, Vec<(Poly, u32)>> = BTreeMap::new();
        let mut mu = vec![Poly::zero(); n];
        for i in 0..n {
            let current: Vec<PrimeBlock> = blocks
                .iter()
                .map(|(p, l)| PrimeBlock { prime: p.clone(), levels: l.clone() })
                .collect();
            let partial = self.recompose(&current, &mu)?;
            let residual = w.sub(&beta, &partial)?;
            if residual.comps()[..i].iter().any(|c| !c.is_zero()) {
                return Err(WittError::Internal(format!("residual prefix nonzero at level {}", i + 1)).into());
            }
            let (normal, c) = self.hasse_normalize(&residual.comps()[i]);
            if !c.is_zero() {
                let v = w.single(i, c);
                beta = w.add(&beta, &w.wp(&v)?)?;
                cert = w.add(&cert, &v)?;
            }
            let pf = self.k.partial_fractions(&normal);
            for t in pf.terms {
                blocks.entry(t.prime).or_insert_with(|| vec![(Poly::zero(), 0); n])[i] = (t.numer, t.exponent);
            }
            mu[i] = pf.poly_part;
        }
        let primes: Vec<PrimeBlock> =
            blocks.into_iter().map(|(prime, levels)| PrimeBlock { prime, levels }).collect();
        if self.recompose(&primes, &mu)? != beta {
            return Err(WittError::Internal("block decomposition does not reproduce the normalized vector".into()).into());
        }
        Ok(AswNormalForm { n, primes, mu, certificate: cert, normalized_beta: beta })
    }

    /// Checks every normal-form condition, the certificate identity and the block decomposition.
    pub fn check_normal_form(&self, g: &AswGenerator, nf: &AswNormalForm) -> Result<(), AswError> {
        let w = &self.witt;
        let r = self.ring();
        let fld = self.k.field();
        let p = self.p();
        let fail = |msg: String| Err(AswError::NotNormal(msg));
        if w.add(&g.beta, &w.wp(&nf.certificate)?)? != nf.normalized_beta {
            return fail("normalized β differs from β ⊞ ℘(c)".into());
        }
        if self.recompose(&nf.primes, &nf.mu)? != nf.normalized_beta {
            return fail("blocks and μ do not recompose to normalized β".into());
        }
        for b in &nf.primes {
            if !b.prime.is_monic() || !r.is_irreducible(&b.prime)? {
                return fail(format!("{} is not a monic irreducible", b.prime));
            }
            let d = b.prime.len() - 1;
            for (i, (q, l)) in b.levels.iter().enumerate() {
                let ok = if *l == 0 {
                    q.is_zero()
                } else {
                    l % p != 0 && r.gcd(q, &b.prime).is_one() && q.len() - 1 < d * *l as usize
                };
                if !ok {
                    return fail(format!("level {} at {}: ({q}, {l})", i + 1, b.prime));
                }
            }
        }
        for (i, f) in nf.mu.iter().enumerate() {
            match f.degree().finite() {
                Some(deg) if deg > 0 && deg % p as usize == 0 => {
                    return fail(format!("f_{} = {f} has degree divisible by p", i + 1))
                }
                _ => {}
            }
            let c0 = f.constant_term();
            if fld.wp_coset_min(c0) != c0 {
                return fail(format!("constant of f_{} is not its ℘-coset representative", i + 1));
            }
        }
        Ok(())
    }

    /// β = ε ⊞ γ with ε over F_q and γ made of proper fractions.
    pub fn split_constants(&self, g: &AswGenerator) -> Result<(WittVector<Fq>, WittVector<RationalFunction>), AswError> {
        let nf = self.witt_normalize(g)?;
        if !self.witt.is_zero(&nf.certificate) {
            return Err(AswError::NotNormal(format!("{g} is changed by normalization")));
        }
        let w = &self.witt;
        let n = self.n();
        let mut eps = vec![Fq::ZERO; n];
        let mut gamma = w.zero().into_comps();
        for i in 0..n {
            let e_vec = WittVector::new(eps.iter().map(|&c| self.k.constant(c)).collect());
            let partial = w.add(&e_vec, &WittVector::new(gamma.clone()))?;
            let residual = w.sub(&g.beta, &partial)?;
            let ri = &residual.comps()[i];
            let (poly, rest) = self.ring().divmod(ri.num(), ri.den())?;
            if !poly.is_constant() && !poly.is_zero() {
                return Err(AswError::NotNormal(format!("level {} has polynomial part {poly}", i + 1)));
            }
            eps[i] = poly.constant_term();
            gamma[i] = self.k.make(rest, ri.den().clone())?;
        }
        let eps = WittVector::new(eps);
        let gamma = WittVector::new(gamma);
        let e_vec = WittVector::new(eps.comps().iter().map(|&c| self.k.constant(c)).collect());
        if w.add(&e_vec, &gamma)? != g.beta {
            return Err(WittError::Internal("ε ⊞ γ does not recompose β".into()).into());
        }
        Ok((eps, gamma))
    }

    pub fn infinity_behavior(&self, nf: &AswNormalForm) -> InfinityBehavior {
        let p = self.p() as u64;
        let n = nf.mu.len();
        let s = nf.mu.iter().take_while(|f| f.is_zero()).count();
        let t = nf.mu.iter().take_while(|f| f.is_zero() || f.is_constant()).count();
        InfinityBehavior { s, t, e: p.pow((n - t) as u32), f: p.pow((t - s) as u32), g: p.pow(s as u32) }
    }

    /// Substitutes T -> 1/T in every component; not renormalized.
    pub fn invert_variable(&self, g: &AswGenerator) -> AswGenerator {
        AswGenerator::new(WittVector::new(g.beta.comps().iter().map(|c| self.k.invert_variable(c)).collect()))
    }

    /// Supported at `prime` only, no polynomial or constant parts, and λ_1 > 0.
    pub fn is_single_prime_form(&self, nf: &AswNormalForm, prime: &Poly) -> bool {
        let prime = self.ring().monic(prime);
        nf.primes.len() == 1
            && nf.primes[0].prime == prime
            && nf.primes[0].levels[0].1 > 0
            && nf.mu.iter().all(|f| f.is_zero())
    }

    /// The same test on an unnormalized generator: it must already be a normal form.
    pub fn generator_is_single_prime_form(&self, g: &AswGenerator, prime: &Poly) -> Result<bool, AswError> {
        let nf = self.witt_normalize(g)?;
        Ok(self.witt.is_zero(&nf.certificate) && self.is_single_prime_form(&nf, prime))
    }
}
