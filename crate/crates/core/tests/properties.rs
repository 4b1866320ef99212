use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stemsize_core::ehp::{a_series, admissible_series};
use stemsize_core::torsion::{barratt_bound, counting_lemma, goodwillie_bound, stable_torsion_bound, VanishingCurve};
use stemsize_core::verify::{catalog_cases, catalog_degrees, instantiated_degrees, oracle_budget, random_spec};
use stemsize_core::{hilbert, oracle_hilbert, parse_spec, preset, print_spec, GeneratorKind, TruncatedSeries};

fn coeff() -> impl Strategy<Value = BigUint> {
    prop_oneof![
        3 => (0u64..1000).prop_map(BigUint::from),
        1 => proptest::collection::vec(any::<u8>(), 1..20).prop_map(|b| BigUint::from_bytes_le(&b)),
    ]
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(coeff(), 1..24).prop_map(|c| TruncatedSeries::from_coeffs(c).unwrap())
}

fn kind() -> impl Strategy<Value = GeneratorKind> {
    prop_oneof![
        Just(GeneratorKind::Polynomial),
        Just(GeneratorKind::Exterior),
        (2u32..6).prop_map(GeneratorKind::Truncated),
    ]
}

proptest! {
    #[test]
    fn trunc_matches_length(s in series()) {
        prop_assert_eq!(s.coeffs().len(), s.trunc() + 1);
    }

    #[test]
    fn mul_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn mul_distributes_over_add(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn binary_ops_align_to_smaller_truncation(a in series(), b in series()) {
        let t = a.trunc().min(b.trunc());
        for s in [a.mul(&b), a.add(&b), a.hadamard(&b), a.max(&b)] {
            prop_assert_eq!(s.trunc(), t);
        }
    }

    #[test]
    fn cumulative_is_product_with_all_ones(a in series()) {
        prop_assert_eq!(a.cumulative(), a.mul(&TruncatedSeries::all_ones(a.trunc())));
    }

    #[test]
    fn factor_matches_explicit_series(a in series(), k in kind(), d in 1u64..8) {
        let cap = k.max_exponent().unwrap_or(u64::MAX);
        let mut explicit = vec![0u64; a.trunc() + 1];
        let mut e = 0u64;
        while e <= cap && ((e * d) as usize) <= a.trunc() {
            explicit[(e * d) as usize] = 1;
            e += 1;
        }
        let f = TruncatedSeries::from_u64s(&explicit).unwrap();
        prop_assert_eq!(a.mul_factor(k, d).unwrap(), a.mul(&f));
    }

    #[test]
    fn max_dominates_and_leq_is_partial_order(a in series(), b in series()) {
        let m = a.max(&b);
        prop_assert!(a.leq(&m) && b.leq(&m));
        prop_assert!(a.leq(&a));
        prop_assert!(a.leq(&a.add(&b)));
    }

    #[test]
    fn json_round_trip(a in series()) {
        prop_assert_eq!(TruncatedSeries::from_json(&a.to_json().unwrap()).unwrap(), a);
    }

    #[test]
    fn shift_then_truncate(a in series(), k in 0usize..30) {
        let s = a.shift(k);
        prop_assert_eq!(s.trunc(), a.trunc());
        for n in 0..=a.trunc() {
            let want = if n >= k { a.coeff(n - k).clone() } else { BigUint::default() };
            prop_assert_eq!(s.coeff(n), &want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spec_print_parse_round_trip(seed in any::<u64>()) {
        let spec = random_spec(&mut ChaCha8Rng::seed_from_u64(seed), 12);
        let again = parse_spec(&print_spec(&spec)).unwrap();
        prop_assert_eq!(&again.families, &spec.families);
        prop_assert_eq!(print_spec(&again), print_spec(&spec));
    }

    #[test]
    fn hilbert_matches_oracle(seed in any::<u64>()) {
        let spec = random_spec(&mut ChaCha8Rng::seed_from_u64(seed), 12);
        let n = oracle_budget(&spec, 40, 200_000).unwrap();
        prop_assert_eq!(hilbert(&spec, n).unwrap(), oracle_hilbert(&spec, n).unwrap());
    }

    #[test]
    fn counting_lemma_holds(p in prop::sample::select(vec![2u64, 3, 5]), a in 0u64..5000, len in 1u64..5000) {
        let c = counting_lemma(p, a, a + len).unwrap();
        prop_assert!(c.exact as f64 <= c.bound);
    }

    #[test]
    fn stable_bound_holds(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u64..20_000, sqrt in any::<bool>()) {
        let curve = if sqrt { VanishingCurve::sqrt() } else { VanishingCurve::Linear };
        let r = stable_torsion_bound(p, n, &curve).unwrap();
        prop_assert!(r.exact_sum as f64 <= r.closed_form);
    }

    #[test]
    fn goodwillie_exact_below_linear(s in 1u64..=8, m in 0u64..5, n in 1u64..10_000, p in prop::sample::select(vec![2u64, 3, 5])) {
        let g = goodwillie_bound(s, m, n, p).unwrap();
        prop_assert!(g.exact as f64 <= g.linear);
    }

    #[test]
    fn barratt_monotone(s in 1u64..8, m in 1u64..4, n in 1u64..500, p in prop::sample::select(vec![2u64, 3, 5]), double in any::<bool>()) {
        let here = barratt_bound(s, m, n, p, double).unwrap();
        prop_assert!(barratt_bound(s, m, n + 1, p, double).unwrap() >= here);
        prop_assert!(barratt_bound(s + 1, m, n, p, double).unwrap() <= here);
    }
}

#[test]
fn catalog_matches_direct_enumeration() {
    for (id, params) in catalog_cases() {
        let spec = preset(id, &params).unwrap();
        assert_eq!(
            instantiated_degrees(&spec, 10_000).unwrap(),
            catalog_degrees(id, &params, 10_000),
            "{id} {params:?}"
        );
    }
}

#[test]
fn a_series_shrinks_as_excess_grows() {
    for p in [2u64, 3] {
        for n in 2..=12 {
            assert!(
                a_series(p, n, 60).unwrap().leq(&a_series(p, n - 1, 60).unwrap()),
                "p={p} n={n}"
            );
        }
    }
}

#[test]
fn a_series_below_admissible_at_two() {
    let adm = admissible_series(2, 80).unwrap();
    for n in 2..=10 {
        assert!(a_series(2, n, 80).unwrap().leq(&adm), "n={n}");
    }
}
