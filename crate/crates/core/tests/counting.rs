use aswkit::algebra::{FiniteField, PolyRing};
use aswkit::counting::{
    oracle_as_classes_by_lambda, oracle_cyclic_subgroups, s_n, t1, v_n, w, CountParams,
};
use num_bigint::BigUint;

const CAP: u64 = 1 << 20;

fn cp(p: u32, s: u32, d: u32, alpha: u32, n: u32) -> CountParams {
    CountParams::new(p, s, d, alpha, n).unwrap()
}

#[test]
fn frozen_v_n_values() {
    // v_1 over F_2, d = 1 is 2^{⌊α/2⌋} - 1
    let v1: Vec<u64> = (1..=10).map(|a| v_n(&cp(2, 1, 1, a, 1)).unwrap().try_into().unwrap()).collect();
    assert_eq!(v1, vec![0, 1, 1, 3, 3, 7, 7, 15, 15, 31]);
    let frozen = [
        ((3, 1, 1, 6, 1), 40u64),
        ((2, 1, 1, 5, 2), 2),
        ((2, 1, 1, 3, 2), 1),
        ((2, 1, 1, 2, 2), 0),
        ((2, 2, 1, 4, 1), 15),
        ((2, 1, 2, 3, 1), 3),
        ((3, 1, 1, 10, 2), 972),
    ];
    for ((p, s, d, a, n), want) in frozen {
        assert_eq!(v_n(&cp(p, s, d, a, n)).unwrap(), BigUint::from(want), "{:?}", (p, s, d, a, n));
    }
}

#[test]
fn cyclic_oracle_does_not_depend_on_the_prime() {
    let ring = PolyRing::new(FiniteField::new(3, 1).unwrap());
    let params = cp(3, 1, 2, 3, 1);
    let canonical = oracle_cyclic_subgroups(&params, None, CAP).unwrap();
    for text in ["T^2+1", "T^2+T+2", "T^2+2*T+2"] {
        let prime = ring.parse(text).unwrap();
        assert_eq!(oracle_cyclic_subgroups(&params, Some(&prime), CAP).unwrap(), canonical, "{text}");
    }
    assert_eq!(canonical, v_n(&params).unwrap());
    assert!(oracle_cyclic_subgroups(&params, Some(&ring.parse("T^2+2").unwrap()), CAP).is_err());
}

#[test]
fn as_classes_by_pole_order() {
    // classes with pole order exactly λ number Φ(P^{λ-⌊λ/p⌋})/(p-1)
    let by = oracle_as_classes_by_lambda(&cp(3, 1, 1, 6, 1), None, CAP).unwrap();
    assert_eq!(by.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 3), (4, 9), (5, 27)]);
    let params = cp(2, 1, 1, 8, 1);
    assert_eq!(t1(&params, 8).unwrap(), v_n(&params).unwrap());
}

#[test]
fn identities_hold_on_a_sample() {
    for (p, s) in [(2, 1), (3, 1), (2, 2)] {
        for d in 1..=2 {
            for a in 1..=30 {
                for n in 1..=3 {
                    let params = cp(p, s, d, a, n);
                    s_n(&params).unwrap();
                    w(&params, a).unwrap();
                }
            }
        }
    }
}

#[test]
fn cap_is_reported() {
    let err = oracle_cyclic_subgroups(&cp(2, 1, 1, 30, 1), None, CAP).unwrap_err();
    assert!(err.is_cap());
}
