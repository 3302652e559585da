use heegner_forge::bateman_horn::omega;
use heegner_forge::keygen::{recover_zk, StructuredPrime};
use heegner_forge::polynomial::euler_rabinowitsch;
use heegner_forge::primality::{jacobi_i64, jacobi_symbol};
use heegner_forge::{FamilyParams, HeegnerNumber, QuadraticPolynomial};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

const CONSTRUCTIBLE: [i64; 7] = [3, 7, 11, 19, 43, 67, 163];

fn heegner() -> impl Strategy<Value = HeegnerNumber> {
    prop::sample::select(CONSTRUCTIBLE.to_vec()).prop_map(|h| HeegnerNumber::new(h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mirror_symmetry(z in 0u64..1_000_000, k in 0u64..1_000_000, h in heegner(), n in -1_000_000i64..1_000_000) {
        let poly = QuadraticPolynomial::construct(&FamilyParams::new(z, k, h)).unwrap();
        let n = BigInt::from(n);
        prop_assert_eq!(poly.evaluate(&n), poly.evaluate(&poly.mirror_index(&n)));
        prop_assert_eq!(poly.discriminant(), BigInt::from(-(h.value() as i64)));
    }

    #[test]
    fn euler_rabinowitsch_substitution(z in 0u64..1_000_000, k in 0u64..1_000_000, h in heegner(), n in -100_000i64..100_000) {
        let poly = QuadraticPolynomial::construct(&FamilyParams::new(z, k, h)).unwrap();
        let alpha = BigInt::from(2u128 * z as u128 * k as u128);
        let delta = BigInt::from(-(h.value() as i64));
        let f = euler_rabinowitsch(&delta, &BigInt::from(1), &alpha, &BigInt::from(-n)).unwrap();
        prop_assert_eq!(f, poly.evaluate_i64(n));
    }

    #[test]
    fn values_are_positive(zk in 0u64..1_000_000_000, h in heegner(), n in -1_000_000i64..1_000_000) {
        let poly = QuadraticPolynomial::from_zk(&BigUint::from(zk), h).unwrap();
        prop_assert!(poly.evaluate_i64(n) > BigInt::from(0));
    }

    #[test]
    fn jacobi_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, m in 0u64..50_000) {
        let n = 2 * m + 1;
        let ab = jacobi_i64(a * b, n).unwrap();
        prop_assert_eq!(ab, jacobi_i64(a, n).unwrap() * jacobi_i64(b, n).unwrap());
        let big = jacobi_symbol(&BigInt::from(a), &BigUint::from(n)).unwrap();
        prop_assert_eq!(big, jacobi_i64(a, n).unwrap());
    }

    #[test]
    fn jacobi_multiplicative_in_modulus(a in -10_000i64..10_000, m in 0u64..3_000, l in 0u64..3_000) {
        let (n1, n2) = (2 * m + 1, 2 * l + 1);
        prop_assert_eq!(jacobi_i64(a, n1 * n2).unwrap(), jacobi_i64(a, n1).unwrap() * jacobi_i64(a, n2).unwrap());
    }

    #[test]
    fn recover_inverts_construction(z in 1u64..u64::MAX, k in 1u64..u64::MAX, h in heegner()) {
        let sp = StructuredPrime::from_pair(BigUint::from(z), BigUint::from(k), h).unwrap();
        prop_assert_eq!(recover_zk(&sp.p, h).unwrap(), sp.zk());
        let poly = QuadraticPolynomial::from_zk(&sp.zk(), h).unwrap();
        prop_assert_eq!(BigInt::from(sp.p.clone()), poly.evaluate_i64(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn omega_matches_root_count(zk in 0u64..10_000_000, h in heegner()) {
        let poly = QuadraticPolynomial::from_zk(&BigUint::from(zk), h).unwrap();
        for p in (2u64..1000).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)) {
            let roots = (0..p as i64)
                .filter(|&n| (poly.evaluate_i64(n) % BigInt::from(p)) == BigInt::from(0))
                .count();
            prop_assert_eq!(omega(&poly, p).unwrap() as usize, roots, "p = {}", p);
        }
    }
}
