use proptest::prelude::*;
use qkz_core::algebra::{parse_poly, q, Polynomial, VarSet};
use qkz_core::combinatorics::{enumerate_tableaux, pieri_multiplicity};

fn vars() -> VarSet {
    VarSet::indexed(2)
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u16..3, 3), -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        let v = vars();
        Polynomial::from_terms(&v, terms.into_iter().map(|(e, n, d)| (e, q(n) / q(d)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn text_round_trip(a in poly()) {
        let back = parse_poly(&a.to_string(), &vars()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exact_division(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn swap_is_an_involution(a in poly(), b in poly()) {
        prop_assert_eq!(a.swap(0, 1).swap(0, 1), a.clone());
        prop_assert_eq!((&a * &b).swap(0, 1), &a.swap(0, 1) * &b.swap(0, 1));
    }

    #[test]
    fn tableaux_count_is_the_pieri_multiplicity(
        m in prop::collection::vec(1usize..=3, 1..6),
        split in prop::collection::vec(0usize..4, 3),
    ) {
        let total: usize = m.iter().sum();
        // a partition of `total` into at most 3 rows, from the random split
        let mut lambda = vec![0usize; 3];
        let mut left = total;
        for (r, s) in split.iter().enumerate() {
            let take = if r == 2 { left } else { (*s).min(left) };
            lambda[r] = take;
            left -= take;
        }
        lambda.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(enumerate_tableaux(&lambda, &m).len(), pieri_multiplicity(3, &lambda, &m));
    }
}
