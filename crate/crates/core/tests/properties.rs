use std::collections::BTreeSet;

use lite_repair_core::eval::oracle;
use lite_repair_core::*;
use lite_repair_core::Strategy as Repairer;
use proptest::prelude::*;

mod arb;

use arb::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn closure_consistency_matches_chase(t in tbox(), abox in assertions(12)) {
        let closure = NegativeClosure::new(&t);
        prop_assert_eq!(closure.is_consistent(&abox), oracle::is_consistent(&t, &abox).unwrap());
    }

    #[test]
    fn repairs_are_consistent_and_nested(t in tbox(), s in stratified()) {
        let closure = NegativeClosure::new(&t);
        let pi = pi_repair(&closure, &s).assertions;
        let linear = linear_repair(&closure, &s).assertions;
        let nd = nd_repair(&closure, &s).assertions;
        let all = s.union_all();
        for r in [&pi, &linear, &nd] {
            prop_assert!(oracle::is_consistent(&t, r).unwrap());
            prop_assert!(r.is_subset(&all));
        }
        prop_assert!(pi.is_subset(&linear));
        prop_assert!(pi.is_subset(&nd));
    }

    #[test]
    fn rank_matches_linear_scan(t in tbox(), s in stratified()) {
        let closure = NegativeClosure::new(&t);
        let outcome = cns_rank(&closure, &s);
        prop_assert_eq!(outcome.rank, oracle::cns_rank(&t, &s).unwrap());
        prop_assert!(outcome.checks <= check_budget(s.len()), "{} checks for m = {}", outcome.checks, s.len());
    }

    #[test]
    fn conflicts_match_brute_force(t in tbox(), abox in assertions(12)) {
        let closure = NegativeClosure::new(&t);
        let fast: BTreeSet<AssertionSet> = closure
            .conflicts(&abox)
            .into_iter()
            .map(|c| c.assertions().iter().cloned().collect())
            .collect();
        prop_assert_eq!(fast, oracle::minimal_inconsistent_subsets(&t, &abox, 3).unwrap());
    }

    #[test]
    fn free_set_and_conflicts_partition(t in tbox(), abox in assertions(12)) {
        let closure = NegativeClosure::new(&t);
        let free = closure.free_set(&abox);
        let involved: AssertionSet = closure
            .conflicts(&abox)
            .iter()
            .flat_map(|c| c.assertions().iter().cloned())
            .collect();
        prop_assert!(free.is_disjoint(&involved));
        let union: AssertionSet = free.union(&involved).cloned().collect();
        prop_assert_eq!(union, abox.clone());
        prop_assert!(oracle::is_consistent(&t, &free).unwrap());
    }

    #[test]
    fn rewriting_matches_chase(t in tbox(), abox in assertions(8), q in query()) {
        prop_assert_eq!(evaluate(&q, &t, &abox), oracle::evaluate(&q, &t, &abox).unwrap());
    }

    #[test]
    fn rewriting_matches_chase_on_joins(t in tbox(), abox in assertions(8), q in join_query()) {
        prop_assert_eq!(evaluate(&q, &t, &abox), oracle::evaluate(&q, &t, &abox).unwrap());
    }

    #[test]
    fn answers_are_monotone(t in tbox(), small in assertions(6), extra in assertions(6), q in query()) {
        let large: AssertionSet = small.union(&extra).cloned().collect();
        prop_assert!(evaluate(&q, &t, &small).is_subset(&evaluate(&q, &t, &large)));
    }

    #[test]
    fn strategies_stay_within_a_maximal_repair(t in tbox(), s in stratified()) {
        let closure = NegativeClosure::new(&t);
        let maximal = oracle::maximal_repairs(&closure, &s.union_all()).unwrap();
        for strategy in Repairer::ALL {
            let r = run_strategy(&closure, &s, strategy).assertions;
            prop_assert!(maximal.iter().any(|m| r.is_subset(m)), "{} not inside a maximal repair", strategy);
        }
    }

    #[test]
    fn maximal_repairs_are_maximal(t in tbox(), abox in assertions(10)) {
        let closure = NegativeClosure::new(&t);
        for m in oracle::maximal_repairs(&closure, &abox).unwrap() {
            prop_assert!(oracle::is_consistent(&t, &m).unwrap());
            for a in abox.difference(&m) {
                let mut bigger = m.clone();
                bigger.insert(a.clone());
                prop_assert!(!oracle::is_consistent(&t, &bigger).unwrap());
            }
        }
    }

    #[test]
    fn nd_matches_its_definition(t in tbox(), s in stratified()) {
        let closure = NegativeClosure::new(&t);
        let table = nd_prefix_table(&closure, &s);
        prop_assert_eq!(table.last().unwrap(), &nd_repair(&closure, &s).assertions);
        for w in table.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]));
        }
    }

    #[test]
    fn linear_accumulator_stays_consistent(t in tbox(), s in stratified()) {
        let closure = NegativeClosure::new(&t);
        let mut ok = true;
        linear_repair_observed(&closure, &s, &mut |_, acc| {
            ok &= oracle::is_consistent(&t, acc).unwrap();
        });
        prop_assert!(ok);
    }

    #[test]
    fn single_stratum_degenerates(t in tbox(), abox in assertions(12)) {
        let closure = NegativeClosure::new(&t);
        let s = StratifiedAssertions::new(vec![abox.clone()]);
        let expected = if closure.is_consistent(&abox) { abox.clone() } else { AssertionSet::new() };
        prop_assert_eq!(&pi_repair(&closure, &s).assertions, &expected);
        prop_assert_eq!(&linear_repair(&closure, &s).assertions, &expected);
        prop_assert_eq!(nd_repair(&closure, &s).assertions, closure.free_set(&abox));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_meets_its_spec(n in 10usize..200, m in 1usize..6, k in 0usize..40, seed in any::<u64>()) {
        let spec = eval::GenSpec::new(n, m, k, seed);
        match eval::generate(&spec) {
            Ok(g) => {
                let all = g.kb.profile().union_all();
                prop_assert_eq!(all.len(), n);
                let total: usize = g.kb.profile().layers().iter().map(|l| l.len()).sum();
                prop_assert_eq!(total, n);
                prop_assert_eq!(g.kb.closure().conflicts(&all).len(), k);
                prop_assert_eq!(g.kb.stratum_count(), m);
                for layer in g.kb.profile().layers() {
                    prop_assert!(g.kb.closure().is_consistent(layer));
                }
                let again = eval::generate(&spec).unwrap();
                prop_assert_eq!(&again.kb, &g.kb);
            }
            // One conflict per cluster individual always fits.
            Err(_) => prop_assert!(k > 0 && (m < 2 || k > spec.individuals / 2)),
        }
    }
}
