use aswkit::algebra::{FiniteField, Fq, RatFunField};
use aswkit::ring::{Integers, Ring};
use aswkit::witt::{WittError, WittRing, WittTables, WittVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn fp(p: u32, n: usize) -> WittRing<FiniteField> {
    WittRing::new(FiniteField::new(p, 1).unwrap(), p, n).unwrap()
}

fn embed(w: &WittRing<FiniteField>, m: i64) -> WittVector<Fq> {
    w.int_mul(m, &w.one()).unwrap()
}

/// W_n(F_p) is Z/p^n: m -> m ⊙ 1 is a bijective ring map.
#[test]
fn witt_vectors_over_prime_field_are_integers_mod_pn() {
    for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 3)] {
        let w = fp(p, n);
        let m = (p as i64).pow(n as u32);
        let images: Vec<WittVector<Fq>> = (0..m).map(|a| embed(&w, a)).collect();
        let distinct: std::collections::HashSet<_> = images.iter().cloned().collect();
        assert_eq!(distinct.len() as i64, m, "p={p} n={n}");
        for a in 0..m {
            for b in 0..m {
                let (x, y) = (&images[a as usize], &images[b as usize]);
                assert_eq!(w.add(x, y).unwrap(), images[((a + b) % m) as usize]);
                assert_eq!(w.mul(x, y).unwrap(), images[((a * b) % m) as usize]);
            }
            assert_eq!(w.neg(&images[a as usize]).unwrap(), images[((m - a) % m) as usize]);
        }
    }
}

/// Reducing integer Witt arithmetic mod p agrees with Witt arithmetic over F_p.
#[test]
fn integer_witt_vectors_reduce_to_fp() {
    let red = |x: &WittVector<BigInt>, p: u32| {
        WittVector::new(x.comps().iter().map(|c| Fq(c.mod_floor(&BigInt::from(p)).to_u32().unwrap())).collect())
    };
    for (p, n) in [(2u32, 3usize), (3, 3)] {
        let wz = WittRing::new(Integers, p, n).unwrap();
        let wf = fp(p, n);
        let mut seed = 17i64;
        for _ in 0..100 {
            let mut next = || {
                seed = (seed * 1103515245 + 12345) % 2147483648;
                BigInt::from(seed % 41 - 20)
            };
            let x = WittVector::new((0..n).map(|_| next()).collect());
            let y = WittVector::new((0..n).map(|_| next()).collect());
            assert_eq!(red(&wz.add(&x, &y).unwrap(), p), wf.add(&red(&x, p), &red(&y, p)).unwrap());
            assert_eq!(red(&wz.mul(&x, &y).unwrap(), p), wf.mul(&red(&x, p), &red(&y, p)).unwrap());
        }
    }
}

#[test]
fn frozen_universal_polynomials() {
    let t = WittTables::get(2, 3).unwrap();
    assert_eq!(t.sum_polys()[0].to_string(), "X1 + Y1");
    assert_eq!(t.sum_polys()[1].to_string(), "-X1*Y1 + X2 + Y2");
    assert_eq!(t.prod_polys()[0].to_string(), "X1*Y1");
    let t = WittTables::get(3, 2).unwrap();
    assert_eq!(t.prod_polys()[1].to_string(), "X1^3*Y2 + X2*Y1^3 + 3*X2*Y2");
}

#[test]
fn length_bound() {
    let f = FiniteField::new(2, 1).unwrap();
    assert_eq!(WittRing::new(f.clone(), 2, 5).unwrap_err(), WittError::LengthBound { n: 5, max: 4 });
    assert!(WittRing::with_bound(f, 2, 5, 5).is_ok());
}

proptest! {
    #[test]
    fn f4_ring_laws(xs in prop::collection::vec(0u32..4, 9)) {
        let w = WittRing::new(FiniteField::new(2, 2).unwrap(), 2, 3).unwrap();
        let v = |i: usize| WittVector::new(xs[i..i + 3].iter().map(|&c| Fq(c)).collect());
        let (x, y, z) = (v(0), v(3), v(6));
        prop_assert_eq!(w.mul(&x, &w.add(&y, &z).unwrap()).unwrap(),
            w.add(&w.mul(&x, &y).unwrap(), &w.mul(&x, &z).unwrap()).unwrap());
        prop_assert_eq!(w.wp(&w.add(&x, &y).unwrap()).unwrap(),
            w.add(&w.wp(&x).unwrap(), &w.wp(&y).unwrap()).unwrap());
        prop_assert!(w.is_zero(&w.int_mul(8, &x).unwrap()));
        prop_assert_eq!(w.sub(&w.add(&x, &y).unwrap(), &y).unwrap(), x);
    }

    #[test]
    fn frobenius_is_componentwise_pth_power(a in 0u32..9, b in 0u32..9) {
        let f = FiniteField::new(3, 2).unwrap();
        let w = WittRing::new(f.clone(), 3, 2).unwrap();
        let x = WittVector::new(vec![Fq(a), Fq(b)]);
        let fx = w.frobenius(&x).unwrap();
        prop_assert_eq!(fx.comps().to_vec(), vec![f.frobenius(Fq(a)), f.frobenius(Fq(b))]);
    }
}

#[test]
fn rational_function_witt_vectors() {
    let k = RatFunField::new(FiniteField::new(2, 1).unwrap());
    let w = WittRing::new(k.clone(), 2, 2).unwrap();
    let x = w.parse("(1/T, 0)", |s| k.parse(s)).unwrap();
    assert_eq!(w.add(&x, &x).unwrap().to_string(), "(0, 1/T^2)");
    // F(x) = (1/T^2, 0) and ⊖x = (1/T, 1/T^2)
    assert_eq!(w.wp(&x).unwrap().to_string(), "((T+1)/T^2, (T+1)/T^3)");
    assert!(k.is_zero(&w.sub(&x, &x).unwrap().comps()[1]));
}
