use aswkit::algebra::{FiniteField, Poly, PolyRing, ResidueRing};
use aswkit::carlitz::{carlitz_eval, carlitz_poly, compose_check, gcd_check, shape_check, DEFAULT_U_DEGREE_CAP};
use aswkit::ring::Ring;

fn ring(p: u32, s: u32) -> PolyRing {
    PolyRing::new(FiniteField::new(p, s).unwrap())
}

/// C_M(x) = Σ m_j C_T^j(x), with C_T(x) = T x + x^q iterated directly.
fn iterate_oracle(r: &ResidueRing, q: u64, m: &Poly, x: &Poly) -> Poly {
    let t = r.reduce(&Poly::t());
    let mut acc = r.zero();
    let mut cur = x.clone();
    for (j, &c) in m.coeffs().iter().enumerate() {
        if j > 0 {
            cur = r.add(&r.mul(&t, &cur), &r.pow(&cur, q));
        }
        acc = r.add(&acc, &r.mul(&Poly::constant(c), &cur));
    }
    acc
}

#[test]
fn evaluation_matches_iterated_carlitz_action() {
    for (p, s) in [(2, 1), (3, 1), (2, 2)] {
        let pr = ring(p, s);
        let q = pr.field().q() as u64;
        let modulus = pr.canonical_prime(4).unwrap();
        let rr = ResidueRing::new(pr.clone(), &modulus).unwrap();
        let ms: Vec<Poly> = pr.polys_below_degree(3).filter(|m| !m.is_zero()).collect();
        let xs: Vec<Poly> = pr.polys_below_degree(2).collect();
        for m in &ms {
            for x in &xs {
                assert_eq!(carlitz_eval(&pr, &rr, m, x).unwrap(), iterate_oracle(&rr, q, m, x), "M = {m}, x = {x}");
            }
        }
    }
}

/// C_P(u) ≡ u^{q^d} mod P, so C_P fixes F_q modulo a degree-one prime.
#[test]
fn carlitz_mod_prime_is_frobenius() {
    let pr = ring(3, 1);
    for m in pr.monic_irreducibles(1, 16).unwrap() {
        let rr = ResidueRing::new(pr.clone(), &m).unwrap();
        for x in pr.polys_below_degree(1) {
            assert_eq!(carlitz_eval(&pr, &rr, &m, &x).unwrap(), rr.reduce(&x));
        }
    }
}

#[test]
fn frozen_polynomials() {
    let pr = ring(2, 1);
    let c = carlitz_poly(&pr, &pr.parse("T^3").unwrap()).unwrap();
    assert_eq!(c.to_string(), "[(0, T^3), (1, T^4+T^3+T^2), (2, T^4+T^2+T), (3, 1)]");
    assert_eq!(c.u_degree(2), Some(8));
    let pr3 = ring(3, 1);
    assert_eq!(carlitz_eval(&pr3, &pr3, &pr3.parse("T+1").unwrap(), &Poly::one()).unwrap(), pr3.parse("T+2").unwrap());
}

#[test]
fn laws_over_f3_degree_two() {
    let pr = ring(3, 1);
    let all: Vec<Poly> = pr.polys_below_degree(3).filter(|m| !m.is_zero()).collect();
    for m in &all {
        assert!(shape_check(&pr, m).unwrap());
        for n in all.iter().step_by(5) {
            assert!(compose_check(&pr, m, n).unwrap(), "{m} {n}");
            assert!(gcd_check(&pr, m, n, DEFAULT_U_DEGREE_CAP).unwrap(), "{m} {n}");
        }
    }
}

#[test]
fn gcd_cap() {
    let pr = ring(3, 1);
    let big = pr.parse("T^12").unwrap();
    assert!(gcd_check(&pr, &big, &Poly::t(), DEFAULT_U_DEGREE_CAP).is_err());
}
