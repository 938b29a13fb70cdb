//! Randomized invariants checked against brute-force lasso oracles.

mod common;

use common::{all_lassos, alphabet, arb_ltl, arb_nba, arb_semideterministic};
use corpkit_core::automata::{complement, intersect, is_subset, union, Emptiness};
use corpkit_core::lasso::common_shape;
use corpkit_core::ltl::{eval_on_lasso, ltl_to_nba};
use corpkit_core::oracle::{changes, BoundedUniverse};
use corpkit_core::similarity::{full_relation, subset_relation};
use corpkit_core::{LassoWord, Letter};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complement_is_exclusive_and_exhaustive(a in (1usize..=2).prop_flat_map(|aps| arb_nba(4, aps))) {
        let c = complement(&a).unwrap();
        for w in all_lassos(a.alphabet(), 3, 2) {
            prop_assert!(
                a.accepts_lasso(&w) != c.accepts_lasso(&w),
                "word {} on\n{}", w.display(a.alphabet()), a.describe()
            );
        }
    }

    #[test]
    fn semideterministic_complement_is_exact(a in (1usize..=2).prop_flat_map(|aps| arb_semideterministic(2, 3, aps))) {
        prop_assert!(a.semideterministic_part().is_some());
        let c = complement(&a).unwrap();
        for w in all_lassos(a.alphabet(), 3, 3) {
            prop_assert!(
                a.accepts_lasso(&w) != c.accepts_lasso(&w),
                "word {} on\n{}", w.display(a.alphabet()), a.describe()
            );
        }
    }

    #[test]
    fn translation_agrees_with_evaluation(f in arb_ltl(4, 2)) {
        let ab = alphabet(2);
        let a = ltl_to_nba(&f, &ab).unwrap();
        for w in all_lassos(&ab, 3, 2) {
            prop_assert_eq!(
                a.accepts_lasso(&w),
                eval_on_lasso(&f, &ab, &w).unwrap(),
                "formula {} on {}", f, w.display(&ab)
            );
        }
    }

    #[test]
    fn boolean_operations_match_membership(a in arb_nba(3, 2), b in arb_nba(3, 2)) {
        let i = intersect(&a, &b).unwrap();
        let u = union(&a, &b).unwrap();
        for w in all_lassos(&alphabet(2), 2, 2) {
            let (x, y) = (a.accepts_lasso(&w), b.accepts_lasso(&w));
            prop_assert_eq!(i.accepts_lasso(&w), x && y);
            prop_assert_eq!(u.accepts_lasso(&w), x || y);
        }
    }

    #[test]
    fn emptiness_agrees_with_bounded_search(a in arb_nba(4, 1)) {
        let witness = all_lassos(a.alphabet(), 4, 4).into_iter().find(|w| a.accepts_lasso(w));
        match a.emptiness() {
            Emptiness::Empty => prop_assert!(witness.is_none()),
            Emptiness::NonEmpty(w) => {
                prop_assert!(a.accepts_lasso(&w));
                prop_assert!(witness.is_some());
            }
        }
    }

    #[test]
    fn changes_subset_matches_unrolling(
        words in prop::collection::vec(
            (prop::collection::vec(0u64..4, 0..3), prop::collection::vec(0u64..4, 1..4)),
            3,
        )
    ) {
        let w: Vec<LassoWord> = words
            .iter()
            .map(|(s, c)| LassoWord::new(
                s.iter().map(|&l| Letter(l)).collect(),
                c.iter().map(|&l| Letter(l)).collect(),
            ).unwrap())
            .collect();
        let (c1, c2) = (changes(&w[0], &w[1]), changes(&w[0], &w[2]));
        let (s, p) = common_shape(&w);
        let explicit = (0..s + 2 * p).all(|i| {
            let d1 = w[0].at(i).0 ^ w[1].at(i).0;
            let d2 = w[0].at(i).0 ^ w[2].at(i).0;
            d1 & !d2 == 0
        });
        prop_assert_eq!(c1.is_subset(&c2), explicit);
        for i in 0..s + 2 * p {
            for a in 0..2 {
                let differs = (w[0].at(i).0 ^ w[1].at(i).0) >> a & 1 == 1;
                prop_assert_eq!(c1.contains(a, i), differs);
            }
        }
    }
}

#[test]
fn universe_counts_match_closed_form() {
    for aps in 1..=2 {
        for stem in 0..=3 {
            for lp in 1..=2 {
                let u = BoundedUniverse::new(alphabet(aps), stem, lp).unwrap();
                let letters = 1u128 << aps;
                let closed: u128 = (0..=stem)
                    .flat_map(|s| (1..=lp).map(move |l| letters.pow((s + l) as u32)))
                    .sum();
                assert_eq!(u.count(), closed);
                let mut seen = std::collections::HashSet::new();
                let mut n = 0u128;
                for w in corpkit_core::oracle::enumerate_lassos(&u) {
                    assert!(w.stem().len() <= stem && (1..=lp).contains(&w.cycle().len()));
                    assert!(seen.insert(w));
                    n += 1;
                }
                assert_eq!(n, closed);
            }
        }
    }
}

#[test]
fn full_relation_refines_subset() {
    for inputs in [vec!["i"], vec!["i", "j"]] {
        let full = full_relation(&inputs).unwrap();
        let subset = subset_relation(&inputs).unwrap();
        assert!(is_subset(full.nba(), subset.nba()).unwrap(), "|I| = {}", inputs.len());
        assert!(!is_subset(subset.nba(), full.nba()).unwrap());
    }
}
