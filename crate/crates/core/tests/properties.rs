use proptest::prelude::*;

use fcat_core::derived::{cell_levels, validate_functor, FunctorData};
use fcat_core::equiv::{decide_equiv, push_cert, sym_cert, verify_cert, EquivMode};
use fcat_core::fixtures;
use fcat_core::{parse_presentation, validate_presentation, Path};

fn presentation() -> impl Strategy<Value = fcat_core::Presentation> {
    any::<u64>().prop_map(|seed| fixtures::random_presentation(seed, 20))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_json_round_trips(p in presentation()) {
        let text = p.to_canonical_json();
        let q = parse_presentation(&text).unwrap();
        prop_assert_eq!(q.to_canonical_json(), text);
    }

    #[test]
    fn generated_presentations_validate(p in presentation()) {
        let r = validate_presentation(&p);
        prop_assert!(!r.has_failures(), "{:?}", r.failures());
    }

    #[test]
    fn unary_law_holds_exactly(p in presentation()) {
        for f in p.arrows_sorted() {
            let base = p.dom(f).unwrap().clone();
            prop_assert_eq!(&p.compose(&Path::new(base, [f.clone()])).unwrap(), f);
        }
    }

    #[test]
    fn switchback_is_injective(p in presentation()) {
        let mut seen = std::collections::BTreeSet::new();
        for f in p.arrows_sorted() {
            prop_assert!(seen.insert(p.switchback(f).unwrap().clone()));
        }
    }

    #[test]
    fn decided_relation_is_symmetric_and_reflexive(p in presentation()) {
        let r = decide_equiv(&p, EquivMode::Optimistic);
        for (a, b) in &r.members {
            prop_assert!(r.contains(b, a));
        }
        for o in p.objects_sorted() {
            prop_assert!(p.is_frontier(o) || r.contains(o, o));
        }
    }

    #[test]
    fn exact_mode_is_contained_in_optimistic(p in presentation()) {
        let exact = decide_equiv(&p, EquivMode::Exact);
        let opt = decide_equiv(&p, EquivMode::Optimistic);
        prop_assert!(exact.members.is_subset(&opt.members));
    }

    #[test]
    fn certificates_survive_symmetry_and_identity_push(p in presentation()) {
        let r = decide_equiv(&p, EquivMode::Optimistic);
        let id = FunctorData::identity(&p);
        for (a, b) in r.members.iter().take(12) {
            let c = r.extract(a, b).unwrap();
            prop_assert!(!verify_cert(&p, &sym_cert(&c)).has_failures());
            let pushed = push_cert(&id, &c).unwrap();
            prop_assert!(!verify_cert(&p, &pushed).has_failures());
        }
    }

    #[test]
    fn identity_functor_is_valid(p in presentation()) {
        let r = validate_functor(&p, &p, &FunctorData::identity(&p), 3, 10_000).unwrap();
        prop_assert!(!r.has_failures(), "{:?}", r.failures());
    }

    #[test]
    fn cell_levels_are_monotone(p in presentation(), k in 1usize..4) {
        let lo = cell_levels(&p, k);
        let hi = cell_levels(&p, k + 1);
        for (o, l) in &lo.levels {
            prop_assert!(hi.level(o).unwrap() >= *l);
        }
    }

    #[test]
    fn fold_composition_extends_by_bcomp(p in presentation()) {
        for path in p.paths_of_length(3, 10_000).unwrap() {
            let (Ok(whole), Ok(prefix)) = (
                p.compose(&path),
                p.compose(&Path::new(path.base.clone(), path.arrows[..2].iter().cloned())),
            ) else {
                continue;
            };
            prop_assert_eq!(Some(&whole), p.bcomp(&prefix, &path.arrows[2]));
        }
    }
}
