use aswkit::algebra::{FiniteField, Fq, Poly, RationalFunction};
use aswkit::asw::{conductor_exponent, conductor_exponent_recursive, Asw, AswGenerator, AswNormalForm};
use aswkit::witt::WittVector;
use proptest::prelude::*;

fn asw(p: u32, s: u32, n: usize) -> Asw {
    Asw::new(FiniteField::new(p, s).unwrap(), n).unwrap()
}

/// (numerator coefficients, pole order at T, pole order at T+1, polynomial part).
type Comp = (Vec<u32>, u32, u32, Vec<u32>);

fn comp_strategy(q: u32) -> impl Strategy<Value = Comp> {
    (prop::collection::vec(0..q, 0..8), 0u32..5, 0u32..3, prop::collection::vec(0..q, 0..4))
}

fn build(a: &Asw, c: &Comp) -> RationalFunction {
    let k = a.k();
    let r = k.poly_ring();
    let t = r.parse("T").unwrap();
    let t1 = r.parse("T+1").unwrap();
    let den = r.mul(&r.pow(&t, c.1 as u64), &r.pow(&t1, c.2 as u64));
    let num = Poly::new(c.0.iter().map(|&x| Fq(x)).collect());
    let poly = Poly::new(c.3.iter().map(|&x| Fq(x)).collect());
    k.add(&k.make(num, den).unwrap(), &k.from_poly(poly))
}

/// For each ramified prime, M_i = max_{j ≤ i} p^{i-j} λ_j for i = 1..n.
fn layer_conductors(p: u64, nf: &AswNormalForm) -> Vec<(Poly, Vec<u64>)> {
    nf.primes
        .iter()
        .map(|b| {
            let l = b.lambdas();
            let m = (0..l.len()).map(|i| (0..=i).map(|j| p.pow((i - j) as u32) * l[j] as u64).max().unwrap()).collect();
            (b.prime.clone(), m)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Normal forms are not unique in their numerators, but the layer conductors
    /// M_1..M_n at every prime and the behavior at infinity are class invariants.
    #[test]
    fn class_invariants_survive_wp_shifts(
        b in prop::collection::vec(comp_strategy(3), 2),
        c in prop::collection::vec(comp_strategy(3), 2),
    ) {
        let a = asw(3, 1, 2);
        let beta = AswGenerator::new(WittVector::new(b.iter().map(|x| build(&a, x)).collect()));
        let shift = WittVector::new(c.iter().map(|x| build(&a, x)).collect());
        let moved = AswGenerator::new(a.witt().add(&beta.beta, &a.witt().wp(&shift).unwrap()).unwrap());
        let nf = a.witt_normalize(&beta).unwrap();
        let nf2 = a.witt_normalize(&moved).unwrap();
        a.check_normal_form(&beta, &nf).unwrap();
        a.check_normal_form(&moved, &nf2).unwrap();
        prop_assert_eq!(layer_conductors(3, &nf), layer_conductors(3, &nf2));
        prop_assert_eq!(a.infinity_behavior(&nf), a.infinity_behavior(&nf2));
        let again = a.witt_normalize(&AswGenerator::new(nf.normalized_beta.clone())).unwrap();
        prop_assert!(a.witt().is_zero(&again.certificate));
        prop_assert_eq!(again.normalized_beta, nf.normalized_beta);
    }

    #[test]
    fn conductor_formula_matches_recursion(l in prop::collection::vec(0u32..30, 1..5)) {
        let mut l = l;
        l[0] = l[0].max(1);
        prop_assume!(l.iter().all(|x| x % 2 != 0 || *x == 0));
        prop_assert_eq!(conductor_exponent(2, &l).unwrap(), conductor_exponent_recursive(2, &l).unwrap());
    }
}

#[test]
fn normalizer_examples() {
    let a = asw(2, 1, 1);
    let g = a.parse("(1/T^2)").unwrap();
    let nf = a.witt_normalize(&g).unwrap();
    assert_eq!(nf.normalized_beta.to_string(), "(1/T)");
    assert_eq!(nf.certificate.to_string(), "(1/T)");
    assert_eq!(conductor_exponent(2, &nf.primes[0].lambdas()).unwrap(), 1);
    assert_eq!(a.infinity_behavior(&nf).label(), "decomposed");

    let a = asw(2, 1, 2);
    let nf = a.witt_normalize(&a.parse("(1/T, 1/T^2)").unwrap()).unwrap();
    assert_eq!(nf.normalized_beta.to_string(), "(1/T, 1/T)");
    assert_eq!(conductor_exponent(2, &nf.primes[0].lambdas()).unwrap(), 2);
}

/// Over F_4 the constant 1 lies in ℘(F_4) but ω does not; the two give different behavior at infinity.
#[test]
fn constants_over_f4() {
    let a = asw(2, 2, 1);
    let f = a.k().field().clone();
    for c in f.elements() {
        let g = AswGenerator::new(WittVector::new(vec![a.k().constant(c)]));
        let nf = a.witt_normalize(&g).unwrap();
        let label = a.infinity_behavior(&nf).label();
        assert_eq!(label == "decomposed", f.in_wp_image(c), "c = {c:?}");
        assert_eq!(label == "inert", !f.in_wp_image(c));
    }
}

#[test]
fn split_constants_recomposes() {
    let a = asw(3, 1, 2);
    let g = a.parse("((2*T+1)/T, 1/(T+1))").unwrap();
    let (eps, gamma) = a.split_constants(&g).unwrap();
    assert_eq!(eps.to_string(), "(2, 0)");
    assert!(gamma.comps().iter().all(|c| c.is_proper()));
}
