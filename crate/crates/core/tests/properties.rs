use derange_core::graph::{parse_edge_list, random_regular_bipartite};
use derange_core::trial::{run_trial, Strategy as Attach};
use derange_core::{
    count_brute_force, count_by_inclusion_exclusion, count_recursion1, count_recursion2, is_f_derangement,
    multiplicity_profile, two_max_profile, PartialFunctionSpec, Permutation,
};
use proptest::prelude::*;

fn partial_function(max_n: usize) -> impl Strategy<Value = PartialFunctionSpec> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::option::weighted(0.8, 0..n), n)
            .prop_map(|images| PartialFunctionSpec::from_zero_based(images).unwrap())
    })
}

fn two_max_function(max_n: usize) -> impl Strategy<Value = PartialFunctionSpec> {
    partial_function(max_n).prop_filter("at most two preimages", |f| f.kmax_order() <= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn oracle_matches_enumeration(f in partial_function(8)) {
        let brute = count_brute_force(&f).unwrap();
        prop_assert_eq!(brute, count_by_inclusion_exclusion(&multiplicity_profile(&f)));
    }

    #[test]
    fn recursions_match_oracle(f in two_max_function(9)) {
        let p = two_max_profile(&f).unwrap();
        let ie = count_by_inclusion_exclusion(&multiplicity_profile(&f));
        prop_assert_eq!(count_recursion1(p), ie.clone());
        prop_assert_eq!(count_recursion2(p), ie);
    }

    #[test]
    fn relabelling_targets_keeps_count(f in partial_function(7), shift in 0usize..7) {
        let n = f.n();
        let moved: Vec<Option<usize>> = f.images().iter().map(|t| t.map(|t| (t + shift) % n)).collect();
        let g = PartialFunctionSpec::from_zero_based(moved).unwrap();
        prop_assert_eq!(count_brute_force(&f).unwrap(), count_brute_force(&g).unwrap());
    }

    #[test]
    fn derangement_test_is_pointwise(f in partial_function(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = derange_core::seed::rng_from_seed(seed);
        let mut images: Vec<usize> = (0..f.n()).collect();
        images.shuffle(&mut rng);
        let expected = images.iter().zip(f.images()).all(|(g, t)| Some(*g) != *t);
        let g = Permutation::from_zero_based(images).unwrap();
        prop_assert_eq!(is_f_derangement(&g, &f).unwrap(), expected);
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..12, d_frac in 0.0f64..0.5, seed in any::<u64>()) {
        let d = ((n as f64 * d_frac) as usize).max(1);
        let g = random_regular_bipartite(n, d, seed).unwrap();
        prop_assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verifier_agrees_with_derangement_test(n in 9usize..16, seed in any::<u64>(), all_ten in any::<bool>()) {
        let strategy = if all_ten { Attach::AllTenOptions } else { Attach::SingleShot };
        let o = run_trial(n, seed, strategy).unwrap();
        prop_assert!(!o.solver_failed);
        prop_assert!(o.equivalence_ok);
        let (f, g) = (o.avoidance.unwrap(), o.permutation.unwrap());
        if strategy == Attach::SingleShot {
            prop_assert_eq!(is_f_derangement(&g, &f).unwrap(), o.success);
        }
    }
}
