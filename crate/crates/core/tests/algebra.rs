use aswkit::algebra::{phi, FiniteField, Fq, Poly, PolyRing, RatFunField, ResidueRing};
use proptest::prelude::*;

fn poly_strategy(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(|c| Poly::new(c.into_iter().map(Fq).collect()))
}

proptest! {
    #[test]
    fn f9_field_axioms(a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let f = FiniteField::new(3, 2).unwrap();
        let (a, b, c) = (Fq(a), Fq(b), Fq(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq(1));
        }
        prop_assert_eq!(f.pow(a, 9), a);
        prop_assert_eq!(f.frobenius(f.pth_root(a)), a);
    }

    #[test]
    fn poly_division_reconstructs(a in poly_strategy(4, 9), b in poly_strategy(4, 5)) {
        prop_assume!(!b.is_zero());
        let r = PolyRing::new(FiniteField::new(2, 2).unwrap());
        let (quo, rem) = r.divmod(&a, &b).unwrap();
        prop_assert_eq!(r.add(&r.mul(&quo, &b), &rem), a);
        prop_assert!(rem.len() < b.len());
    }

    #[test]
    fn frobenius_is_pth_power(a in poly_strategy(9, 6)) {
        let r = PolyRing::new(FiniteField::new(3, 2).unwrap());
        prop_assert_eq!(r.frobenius(&a), r.pow(&a, 3));
    }

    #[test]
    fn factorization_multiplies_back(a in poly_strategy(3, 8)) {
        prop_assume!(!a.is_zero());
        let r = PolyRing::new(FiniteField::new(3, 1).unwrap());
        let monic = r.monic(&a);
        let mut prod = Poly::one();
        for (f, e) in r.factor(&a).unwrap() {
            prop_assert!(r.is_irreducible(&f).unwrap());
            prod = r.mul(&prod, &r.pow(&f, e as u64));
        }
        prop_assert_eq!(prod, monic);
    }

    #[test]
    fn partial_fractions_recombine(num in poly_strategy(2, 8), e1 in 1u64..4, e2 in 1u64..3) {
        let k = RatFunField::new(FiniteField::new(2, 1).unwrap());
        let r = k.poly_ring().clone();
        let den = r.mul(&r.pow(&r.parse("T").unwrap(), e1), &r.pow(&r.parse("T^2+T+1").unwrap(), e2));
        let f = k.make(num, den).unwrap();
        let pf = k.partial_fractions(&f);
        for t in &pf.terms {
            prop_assert!(t.numer.len() < (t.prime.len() - 1) * t.exponent as usize + 1);
            prop_assert!(r.gcd(&t.numer, &t.prime).is_one());
        }
        prop_assert_eq!(k.recombine(&pf), f);
    }
}

#[test]
fn irreducible_counts_match_necklace_formula() {
    // number of monic irreducibles of degree d over F_q: (1/d) Σ_{e | d} μ(e) q^{d/e}
    let r = PolyRing::new(FiniteField::new(2, 1).unwrap());
    let counts: Vec<usize> = (1..=6).map(|d| r.monic_irreducibles(d, 1 << 12).unwrap().len()).collect();
    assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
    let r = PolyRing::new(FiniteField::new(3, 1).unwrap());
    let counts: Vec<usize> = (1..=4).map(|d| r.monic_irreducibles(d, 1 << 12).unwrap().len()).collect();
    assert_eq!(counts, vec![3, 3, 8, 18]);
}

#[test]
fn unit_count_matches_phi() {
    let r = PolyRing::new(FiniteField::new(2, 2).unwrap());
    for text in ["T^3", "T^2+T", "T^3+T", "T^3+T+1"] {
        let n = r.parse(text).unwrap();
        let rr = ResidueRing::new(r.clone(), &n).unwrap();
        let units = rr.units(1 << 12).unwrap().count();
        assert_eq!(phi(&r, &n).unwrap(), num_bigint::BigUint::from(units), "{text}");
    }
}

#[test]
fn trace_decides_wp_image() {
    for (p, s) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (2, 3)] {
        let f = FiniteField::new(p, s).unwrap();
        let image: std::collections::BTreeSet<u32> = f.elements().map(|a| f.wp(a).0).collect();
        assert_eq!(image.len() as u32, f.q() / p);
        for x in f.elements() {
            assert_eq!(f.in_wp_image(x), image.contains(&x.0));
            let m = f.wp_coset_min(x);
            assert!(f.in_wp_image(f.sub(x, m)) && m.0 <= x.0);
        }
    }
}
