use num_bigint::BigInt;
use proptest::prelude::*;
use qser_core::congruence::rbar_series;
use qser_core::enumeration::{count_rbar_dp, count_rbar_enum};
use qser_core::series::{eta_product, f_cubed, series_f};
use qser_core::{Ring, Series};

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::INTEGERS),
        (1u32..=12).prop_map(|j| Ring::modular(1 << j).unwrap()),
        prop_oneof![Just(3u64), Just(5), Just(7), Just(9), Just(12)].prop_map(|m| Ring::modular(m).unwrap()),
    ]
}

fn series_in(ring: Ring, len: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(-1000i64..1000, len).prop_map(move |c| Series::from_ints(&c, ring))
}

fn triple() -> impl Strategy<Value = (Series, Series, Series)> {
    (ring(), 1usize..40).prop_flat_map(|(r, len)| (series_in(r, len), series_in(r, len), series_in(r, len)))
}

fn naive_f(k: usize, trunc: usize, ring: Ring) -> Series {
    let mut acc = Series::one(trunc, ring);
    for i in 1..=trunc / k.max(1) {
        let factor = Series::one(trunc, ring).sub(&Series::monomial(k * i, 1, trunc, ring)).unwrap();
        acc = acc.mul(&factor).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        let one = Series::one(a.trunc(), a.ring());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn unit_constant_inverts(r in ring(), mut c in prop::collection::vec(-50i64..50, 1..40)) {
        c[0] = 1;
        let a = Series::from_ints(&c, r);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), Series::one(a.trunc(), r));
        prop_assert_eq!(inv.div(&a).unwrap(), inv.mul(&inv).unwrap());
    }

    #[test]
    fn dissection_round_trip(r in ring(), c in prop::collection::vec(-1000i64..1000, 1..120), m in 1usize..9) {
        let s = Series::from_ints(&c, r);
        let t = s.trunc();
        let mut acc = Series::zero(t, r);
        for res in 0..m.min(t + 1) {
            let part = s.dissect(m, res).unwrap().magnify(m).unwrap().shift(res);
            prop_assert!(part.trunc() >= t);
            acc = acc.add(&part.truncate(t)).unwrap();
        }
        prop_assert_eq!(acc, s);
    }

    #[test]
    fn pentagonal_matches_naive_product(r in ring(), k in 1usize..6, trunc in 0usize..150) {
        prop_assert_eq!(series_f(k, trunc, r), naive_f(k, trunc, r));
    }

    #[test]
    fn jacobi_cube(r in ring(), k in 1usize..6, trunc in 0usize..300) {
        prop_assert_eq!(f_cubed(k, trunc, r), series_f(k, trunc, r).pow(3).unwrap());
    }

    #[test]
    fn modular_reduction_commutes(
        exps in prop::collection::vec((1usize..=12, -6i64..7), 1..4),
        j in 1u32..=12,
        trunc in 0usize..200,
    ) {
        let m = 1u64 << j;
        let exact = eta_product(&exps, trunc, Ring::INTEGERS);
        prop_assert_eq!(exact.reduce_mod(m).unwrap(), eta_product(&exps, trunc, Ring::modular(m).unwrap()));
    }

    #[test]
    fn oracle_agreement(ell in 1u64..20, n in 0u64..=22) {
        let dp = count_rbar_dp(ell, 22).unwrap();
        let series = rbar_series(ell, 22, Ring::INTEGERS);
        let e = count_rbar_enum(ell, n).unwrap();
        prop_assert_eq!(BigInt::from(e), BigInt::from(dp[n as usize].clone()));
        prop_assert_eq!(series.coeff(n as usize).unwrap(), BigInt::from(e));
    }
}
