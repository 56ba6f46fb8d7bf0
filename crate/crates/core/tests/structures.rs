use fcat_core::derived::{
    arrow_category, cell_levels, check_globular, check_inclusion, iterated_boundary, point_structure, power_structure,
    PointMode, Side,
};
use fcat_core::equiv::verify_cert;
use fcat_core::fixtures;
use fcat_core::ids::{arr, obj};
use fcat_core::weak::{
    check_coherence, check_theta_table, theta_lookup, validate_mu, weak_of, Axiom, CoherenceBounds, MuBounds,
};
use fcat_core::{validate_presentation, Oracle, Presentation};

fn detected(p: &Presentation) -> bool {
    if validate_presentation(p).has_failures() || check_globular(p).has_failures() {
        return true;
    }
    let w = weak_of(p);
    if validate_mu(p, &w, MuBounds::default()).map_or(true, |r| r.has_failures()) {
        return true;
    }
    let bounds = CoherenceBounds {
        max_len: 3,
        ..Default::default()
    };
    let coherence = check_coherence(p, &Axiom::ALL, bounds);
    let table = check_theta_table(p, bounds);
    coherence.map_or(true, |r| r.has_failures()) || table.map_or(true, |r| r.has_failures())
}

#[test]
fn clean_fixtures_pass_every_validator() {
    for p in [fixtures::fix_iso(), fixtures::fix_2cat()] {
        assert!(!detected(&p));
    }
}

#[test]
fn every_catalogue_mutant_is_detected() {
    for m in fixtures::mutation_catalogue() {
        assert!(detected(&m.apply().unwrap()), "{} slipped through", m.name);
    }
}

#[test]
fn arrow_category_homs_are_switchback_homs() {
    let p = fixtures::fix_iso();
    let c = arrow_category(&p);
    let homs = c.hom(&obj("u"), &obj("u"), 0);
    assert_eq!(homs, vec![arr("1<u,0>")]);
    assert!(c.hom(&obj("u"), &obj("v"), 0).is_empty());
}

#[test]
fn iterated_boundaries_of_a_two_cell() {
    let p = fixtures::fix_2cat();
    let cell = arr("a~a2");
    assert_eq!(iterated_boundary(&p, &cell, 1, Side::Dom).unwrap(), Some(obj("<a,0>")));
    assert_eq!(iterated_boundary(&p, &cell, 2, Side::Dom).unwrap(), Some(obj("X")));
    assert_eq!(iterated_boundary(&p, &cell, 2, Side::Cod).unwrap(), Some(obj("Y")));
}

#[test]
fn power_structures_contain_deep_composable_tuples() {
    for (name, p) in fixtures::all() {
        if name == "fix-par" || p.num_arrows() > 12 {
            continue;
        }
        for n in [2, 3] {
            let ps = power_structure(&p, n, 100_000).unwrap();
            let r = check_inclusion(&p, &ps, 100_000).unwrap();
            assert!(!r.has_failures(), "{name} n={n}: {:?}", r.failures());
        }
    }
}

#[test]
fn point_modes_coincide_on_finite_presentations() {
    for (name, p) in fixtures::all() {
        let a = point_structure(&p, PointMode::Plain);
        let b = point_structure(&p, PointMode::JClosed);
        assert_eq!(a.objects, b.objects, "{name}");
    }
}

#[test]
fn cell_levels_grow_with_the_bound() {
    let p = fixtures::fix_2cat();
    let one = cell_levels(&p, 1);
    let two = cell_levels(&p, 2);
    for (o, l) in &one.levels {
        assert!(two.level(o).unwrap() >= *l, "{o}");
    }
    assert_eq!(two.level(&obj("<a~a2,0>")), Some(2));
}

#[test]
fn reflexivity_theta_relates_the_contraction() {
    let p = fixtures::fix_iso();
    let w = weak_of(&p);
    let key = fcat_core::weak::ThetaKey::new(fcat_core::Path::new(obj("X"), [arr("u"), arr("v")]), 0, 2);
    let c = theta_lookup(&p, &w, &key).unwrap();
    assert_eq!(c.endpoints(), (obj("<id_X,0>"), obj("<id_X,0>")));
    assert!(!verify_cert(&p, &c).has_failures());
    assert!(p.identity(&obj("X")).is_some());
}

#[test]
fn loop_fixture_exposes_the_switchback_clash() {
    let p = fixtures::fix_loop();
    let r = validate_mu(&p, &weak_of(&p), MuBounds::default()).unwrap();
    let clash = r.failures().iter().find(|f| f.check_id == "mu-switchback").unwrap();
    assert_eq!(clash.witness["as-path"], "1<l,0>");
    assert_eq!(clash.witness["as-cells"], "1<l.l,0>");
}
