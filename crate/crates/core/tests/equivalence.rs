use fcat_core::equiv::{
    brute_force_equiv, check_witnesses, decide_equiv, pair_cert, refl_cert, sym_cert, verify_cert, EquivMode,
    WitnessBounds,
};
use fcat_core::fixtures;
use fcat_core::ids::obj;
use fcat_core::Presentation;

fn assert_equivalence_relation(name: &str, p: &Presentation) {
    let r = decide_equiv(p, EquivMode::Optimistic);
    let objs = p.objects_sorted();
    for a in objs {
        if !p.is_frontier(a) {
            assert!(r.contains(a, a), "{name}: {a} not reflexive");
        }
        for b in objs {
            if r.contains(a, b) {
                assert!(r.contains(b, a), "{name}: ({a},{b}) not symmetric");
                for c in objs {
                    if r.contains(b, c) {
                        assert!(r.contains(a, c), "{name}: ({a},{b},{c}) not transitive");
                    }
                }
            }
        }
    }
}

#[test]
fn decided_relation_is_an_equivalence_on_fixtures() {
    for (name, p) in fixtures::all() {
        assert_equivalence_relation(name, &p);
    }
}

#[test]
fn decided_relation_is_an_equivalence_on_random_presentations() {
    for seed in 0..30 {
        assert_equivalence_relation(&format!("seed {seed}"), &fixtures::random_presentation(seed, 20));
    }
}

#[test]
fn walking_iso_objects_are_equivalent() {
    let p = fixtures::fix_iso();
    let r = decide_equiv(&p, EquivMode::Optimistic);
    assert!(r.contains(&obj("X"), &obj("Y")));
    // Ju and Jv sit in different towers with no arrows between them
    assert!(!r.contains(&obj("<u,0>"), &obj("<v,0>")));
    // the unit obligations reach the cut-off tower, which exact mode refuses
    assert!(!decide_equiv(&p, EquivMode::Exact).contains(&obj("X"), &obj("Y")));
}

#[test]
fn gfp_iterates_are_non_increasing() {
    for (name, p) in fixtures::all() {
        let r = decide_equiv(&p, EquivMode::Optimistic);
        assert!(r.sizes.windows(2).all(|w| w[0] >= w[1]), "{name}: {:?}", r.sizes);
        assert_eq!(*r.sizes.last().unwrap(), r.len(), "{name}");
    }
}

#[test]
fn extracted_certificates_verify() {
    for (name, p) in fixtures::all() {
        let r = decide_equiv(&p, EquivMode::Optimistic);
        for (a, b) in &r.members {
            let c = r.extract(a, b).unwrap();
            let v = verify_cert(&p, &c);
            assert!(!v.has_failures(), "{name}: ({a},{b}) {:?}", v.failures());
        }
    }
}

#[test]
fn decide_agrees_with_brute_force_on_empty_frontier() {
    let mut cases = vec![fixtures::fix_one()];
    for perm in [vec![0, 1], vec![1, 0], vec![2, 0, 1]] {
        cases.push(fixtures::permutation(&perm));
    }
    for p in &cases {
        let r = decide_equiv(p, EquivMode::Exact);
        let bound = r.support.len().max(1);
        for a in p.objects_sorted() {
            for b in p.objects_sorted() {
                let brute = brute_force_equiv(p, a, b, bound, 1_000_000).unwrap();
                assert_eq!(brute.is_yes(), r.contains(a, b), "({a},{b})");
            }
        }
    }
}

#[test]
fn symmetry_and_pairing_preserve_verification() {
    let p = fixtures::fix_iso();
    let r = decide_equiv(&p, EquivMode::Optimistic);
    let c = r.extract(&obj("X"), &obj("Y")).unwrap();
    let s = sym_cert(&c);
    assert_eq!(s.endpoints(), (obj("Y"), obj("X")));
    assert!(!verify_cert(&p, &s).has_failures());
    let pair = pair_cert(&[c, refl_cert(&p, &obj("X")).unwrap()]).unwrap();
    assert_eq!(pair.endpoints().0.as_str(), "(X,X)");
}

#[test]
fn witness_builders_verify_on_fixtures() {
    for p in [fixtures::fix_iso(), fixtures::fix_2cat()] {
        let r = check_witnesses(&p, WitnessBounds::default()).unwrap();
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert!(r.instances("witness-cancel") > 0);
    }
}
