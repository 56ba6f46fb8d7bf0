mod common;

use std::fs;

use common::{code, corpus, fcat, golden, presentations, root, stem};

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn corpus_matches_library_fixtures() {
    for (rel, contents) in corpus() {
        let path = root().join(&rel);
        if common::blessing() {
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(&path, &contents).unwrap();
        } else {
            assert_eq!(fs::read_to_string(&path).unwrap(), contents, "{rel}");
        }
    }
}

#[test]
fn reports_are_deterministic_and_match_goldens() {
    for file in presentations() {
        for cmd in ["validate", "check", "cells"] {
            let a = fcat(&[cmd, s(&file), "--json", "-"]);
            let b = fcat(&[cmd, s(&file), "--json", "-"]);
            assert_eq!(a.stdout, b.stdout, "{cmd} {}", file.display());
            assert!(
                code(&a) <= 1,
                "{cmd} {}: {}",
                file.display(),
                String::from_utf8_lossy(&a.stderr)
            );
            golden(
                &format!("{}.{cmd}.json", stem(&file)),
                &String::from_utf8(a.stdout).unwrap(),
            );
        }
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    for file in presentations() {
        let name = stem(&file);
        let out = fcat(&["check", s(&file)]);
        let expected = match name.as_str() {
            // not globular
            "presentations/fix-par" => 1,
            // l is an endomorphism with l.l != l, so (1<l,0>, 1<l,0>) is both a
            // path and a cell tuple with different images
            "presentations/fix-loop" => 1,
            n if n.starts_with("mutants/") => 1,
            _ => 0,
        };
        assert_eq!(code(&out), expected, "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"objects\": [\"A\"], \"arrows\": [").unwrap();
    assert_eq!(code(&fcat(&["validate", s(&bad)])), 2);
    assert_eq!(code(&fcat(&["frobnicate"])), 2);
    let iso = root().join("presentations/fix-iso.json");
    assert_eq!(code(&fcat(&["equiv", s(&iso), "X", "nowhere"])), 2);
    assert_eq!(code(&fcat(&["check", s(&iso), "--budget-states", "3"])), 3);
}

#[test]
fn budget_can_come_from_the_environment() {
    let iso = root().join("presentations/fix-iso.json");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_fcat"))
        .args(["check", s(&iso)])
        .env("FCAT_BUDGET_STATES", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn mutated_coherence_fails_check() {
    let m = root().join("mutants/iso-wrong-theta.json");
    let out = fcat(&["check", s(&m), "--axioms", "a1", "--json", "-"]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["summary"]["fail"].as_u64().unwrap() > 0);
}

#[test]
fn equivalence_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let iso = root().join("presentations/fix-iso.json");
    let out = fcat(&[
        "equiv",
        s(&iso),
        "X",
        "Y",
        "--mode",
        "optimistic",
        "--emit-cert",
        s(&cert),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&fcat(&["cert-verify", s(&iso), s(&cert)])), 0);
    // Ju and Jv are not equivalent; no certificate is written
    let none = dir.path().join("none.json");
    assert_eq!(
        code(&fcat(&["equiv", s(&iso), "<u,0>", "<v,0>", "--emit-cert", s(&none)])),
        1
    );
    assert!(!none.exists());
    // a certificate for another presentation is rejected
    let one = root().join("presentations/fix-one.json");
    assert_eq!(code(&fcat(&["cert-verify", s(&one), s(&cert)])), 1);
}

#[test]
fn import_reproduces_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("category", "walking-iso.category.json", "2", "1", "fix-iso"),
        ("two-category", "a-a2.two-category.json", "1", "1", "fix-2cat"),
        ("graph", "loop.graph.json", "1", "3", "fix-loop"),
    ];
    for (kind, src, depth, budget, fixture) in cases {
        let out = dir.path().join(format!("{fixture}.json"));
        let src = root().join("sources").join(src);
        let r = fcat(&[
            "import",
            kind,
            s(&src),
            "--depth",
            depth,
            "--path-budget",
            budget,
            "-o",
            s(&out),
        ]);
        assert_eq!(code(&r), 0, "{kind}: {}", String::from_utf8_lossy(&r.stderr));
        let expected = fs::read_to_string(root().join(format!("presentations/{fixture}.json"))).unwrap();
        assert_eq!(fs::read_to_string(&out).unwrap(), expected, "{kind}");
    }
}

#[test]
fn extract_and_derive_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let iso = root().join("presentations/fix-iso.json");
    let cat = dir.path().join("cat.json");
    assert_eq!(code(&fcat(&["extract", s(&iso), "-o", s(&cat)])), 0);
    let back =
        fcat_core::constructions::CategoryPresentation::from_json_str(&fs::read_to_string(&cat).unwrap()).unwrap();
    assert!(fcat_core::constructions::extract::isomorphic(
        &back,
        &fcat_core::fixtures::walking_iso()
    ));

    let arrows = dir.path().join("arrows.json");
    assert_eq!(code(&fcat(&["derive", "arrow-cat", s(&iso), "-o", s(&arrows)])), 0);
    fcat_core::parse_presentation(&fs::read_to_string(&arrows).unwrap()).unwrap();
    let power = dir.path().join("power.json");
    assert_eq!(code(&fcat(&["derive", "power", "2", s(&iso), "-o", s(&power)])), 0);
    fcat_core::parse_presentation(&fs::read_to_string(&power).unwrap()).unwrap();

    // the 2-category fixture is not category-shaped
    let two = root().join("presentations/fix-2cat.json");
    let refused = dir.path().join("refused.json");
    assert_eq!(code(&fcat(&["extract", s(&two), "-o", s(&refused)])), 2);
    assert!(!refused.exists());
}

#[test]
fn report_body_ignores_table_order() {
    let iso = root().join("presentations/fix-iso.json");
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&iso).unwrap()).unwrap();
    doc["bcomp"].as_array_mut().unwrap().reverse();
    doc["arrows"].as_array_mut().unwrap().reverse();
    let dir = tempfile::tempdir().unwrap();
    let shuffled = dir.path().join("shuffled.json");
    fs::write(&shuffled, serde_json::to_string(&doc).unwrap()).unwrap();
    for cmd in ["validate", "check"] {
        let body = |f: &std::path::Path| {
            let out = fcat(&[cmd, s(f), "--json", "-"]);
            let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
            v.as_object_mut().unwrap().remove("header");
            v
        };
        assert_eq!(body(&iso), body(&shuffled), "{cmd}");
    }
}

#[test]
fn text_report_is_stable() {
    let one = root().join("presentations/fix-one.json");
    let a = fcat(&["validate", s(&one)]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, fcat(&["validate", s(&one)]).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("summary: "));
}
