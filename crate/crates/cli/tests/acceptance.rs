//! One line per acceptance criterion. Exits non-zero if any criterion fails.

mod common;

use std::fs;
use std::time::{Duration, Instant};

use fcat_core::constructions::extract::isomorphic;
use fcat_core::constructions::extract_category;
use fcat_core::derived::{
    check_globular, check_inclusion, classify_shape, discreteness, is_globular, power_structure, Shape, TriState,
};
use fcat_core::equiv::{brute_force_equiv, check_witnesses, decide_equiv, verify_cert, EquivMode, WitnessBounds};
use fcat_core::fixtures;
use fcat_core::weak::{check_coherence, check_theta_table, validate_mu, weak_of, Axiom, CoherenceBounds, MuBounds};
use fcat_core::{validate_presentation, Presentation, Status};

use common::{code, fcat, presentations, root, stem};

const STATES: usize = 100_000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2}s of {}s", e.as_secs_f64(), limit.as_secs()))
}

fn random_presentations() -> Vec<Presentation> {
    (0..50).map(|seed| fixtures::random_presentation(seed, 20)).collect()
}

fn equivalence_violations(p: &Presentation) -> usize {
    let r = decide_equiv(p, EquivMode::Optimistic);
    let objs = p.objects_sorted();
    let mut bad = 0;
    for a in objs {
        if !p.is_frontier(a) && !r.contains(a, a) {
            bad += 1;
        }
        for b in objs {
            if !r.contains(a, b) {
                continue;
            }
            if !r.contains(b, a) {
                bad += 1;
            }
            for c in objs {
                if r.contains(b, c) && !r.contains(a, c) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

fn c1() -> Outcome {
    let t = Instant::now();
    let mut cases = vec![fixtures::fix_one(), fixtures::fix_iso(), fixtures::fix_2cat()];
    cases.extend(random_presentations());
    let bad: usize = cases.iter().map(equivalence_violations).sum();
    let (fast, time) = within(t, Duration::from_secs(30));
    outcome(
        bad == 0 && fast,
        format!("{} presentations, {bad} violations, {time}", cases.len()),
    )
}

fn c2() -> Outcome {
    let t = Instant::now();
    let mut cases: Vec<Presentation> = fixtures::all()
        .into_iter()
        .map(|(_, p)| p)
        .chain(random_presentations())
        .filter(|p| p.frontier().is_empty() && p.num_objects() <= 30)
        .collect();
    for perm in [vec![0], vec![1, 0], vec![0, 1, 2], vec![2, 0, 1], vec![3, 2, 1, 0, 4]] {
        cases.push(fixtures::permutation(&perm));
    }
    let (mut pairs, mut disagree) = (0, 0);
    for p in &cases {
        let r = decide_equiv(p, EquivMode::Optimistic);
        let bound = r.support.len().max(1);
        for a in p.objects_sorted() {
            for b in p.objects_sorted() {
                pairs += 1;
                let brute = brute_force_equiv(p, a, b, bound, 10_000_000).map(|o| o.is_yes());
                if brute.ok() != Some(r.contains(a, b)) {
                    disagree += 1;
                }
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(60));
    outcome(
        disagree == 0 && fast,
        format!(
            "{} presentations, {pairs} pairs, {disagree} disagreements, {time}",
            cases.len()
        ),
    )
}

fn c3() -> Outcome {
    let mut cases: Vec<Presentation> = fixtures::all().into_iter().map(|(_, p)| p).collect();
    cases.extend(random_presentations());
    let (mut total, mut verified) = (0, 0);
    for p in &cases {
        let r = decide_equiv(p, EquivMode::Optimistic);
        for (a, b) in &r.members {
            total += 1;
            if r.extract(a, b).is_some_and(|c| !verify_cert(p, &c).has_failures()) {
                verified += 1;
            }
        }
    }
    outcome(
        total == verified && total > 0,
        format!("{verified}/{total} certificates verify"),
    )
}

fn c4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p) in [("fix-iso", fixtures::fix_iso()), ("fix-2cat", fixtures::fix_2cat())] {
        match check_witnesses(&p, WitnessBounds::default()) {
            Ok(r) => {
                let pass = r.count(Status::Pass);
                let other =
                    r.count(Status::Fail) + r.count(Status::SkippedFrontier) + r.count(Status::SkippedMissingTheta);
                ok &= other == 0 && pass > 0;
                let per: Vec<String> = [
                    "witness-lemma-a",
                    "witness-chain",
                    "witness-cancel",
                    "witness-cancel-right",
                ]
                .iter()
                .map(|id| format!("{}={}", id.trim_start_matches("witness-"), r.instances(id)))
                .collect();
                parts.push(format!("{name}: {pass}/{} verify ({})", pass + other, per.join(" ")));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn c5() -> Outcome {
    let depth = 2;
    let mut failures = Vec::new();
    for seed in 0..20 {
        let cat = fixtures::random_category(1000 + seed);
        let p = match fixtures::truncated(&cat, depth) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("{seed}: {e}"));
                continue;
            }
        };
        if classify_shape(&p, depth).shape != Shape::Category {
            failures.push(format!("{seed}: shape"));
        }
        for f in p.arrows_sorted() {
            let j = p.switchback(f).unwrap();
            if (0..=depth).any(|d| discreteness(&p, j, d) == TriState::No) {
                failures.push(format!("{seed}: {j} not discrete"));
            }
        }
        match extract_category(&p) {
            Ok(back) if isomorphic(&cat, &back) => {}
            _ => failures.push(format!("{seed}: round trip")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 categories at depth {depth}, failures {failures:?}"),
    )
}

fn c6() -> Outcome {
    let t = Instant::now();
    let mut cases = vec![
        ("fix-iso".to_string(), fixtures::fix_iso()),
        ("fix-2cat".to_string(), fixtures::fix_2cat()),
    ];
    for seed in 0..3 {
        let cat = fixtures::random_category(2000 + seed);
        cases.push((format!("random-{seed}"), fixtures::truncated(&cat, 1).unwrap()));
    }
    let bounds = CoherenceBounds {
        max_len: 5,
        ..Default::default()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p) in &cases {
        match check_coherence(p, &Axiom::ALL, bounds) {
            Ok(r) => {
                ok &= !r.has_failures();
                let counts: Vec<String> = Axiom::ALL
                    .iter()
                    .map(|a| format!("{a}={}", r.instances(a.check_id())))
                    .collect();
                parts.push(format!(
                    "{name} {} (pass {}, skipped-frontier {})",
                    counts.join(" "),
                    r.count(Status::Pass),
                    r.count(Status::SkippedFrontier)
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(60));
    outcome(ok && fast, format!("L=5; {}; {time}", parts.join(", ")))
}

fn detected(p: &Presentation) -> bool {
    if validate_presentation(p).has_failures() || check_globular(p).has_failures() {
        return true;
    }
    let w = weak_of(p);
    let bounds = CoherenceBounds {
        max_len: 3,
        ..Default::default()
    };
    let failed = |r: fcat_core::Result<fcat_core::Report>| r.map_or(true, |r| r.has_failures());
    failed(validate_mu(p, &w, MuBounds::default()))
        || failed(check_coherence(p, &Axiom::ALL, bounds))
        || failed(check_theta_table(p, bounds))
}

fn c7() -> Outcome {
    let catalogue = fixtures::mutation_catalogue();
    let missed: Vec<&str> = catalogue
        .iter()
        .filter(|m| !m.apply().map_or(true, |p| detected(&p)))
        .map(|m| m.name)
        .collect();
    let clean = !detected(&fixtures::fix_iso()) && !detected(&fixtures::fix_2cat());
    outcome(
        missed.is_empty() && clean,
        format!(
            "{}/{} detected, missed {missed:?}, unmutated fixtures clean: {clean}",
            catalogue.len() - missed.len(),
            catalogue.len()
        ),
    )
}

fn c8() -> Outcome {
    let mut cases: Vec<Presentation> = fixtures::all().into_iter().map(|(_, p)| p).collect();
    cases.extend(random_presentations());
    cases.retain(|p| p.num_arrows() <= 12 && is_globular(p));
    let (mut runs, mut omissions, mut errors) = (0, 0, 0);
    for p in &cases {
        for n in [2, 3] {
            runs += 1;
            match power_structure(p, n, STATES).and_then(|ps| check_inclusion(p, &ps, STATES)) {
                Ok(r) => omissions += r.failures().len(),
                Err(_) => errors += 1,
            }
        }
    }
    outcome(
        omissions == 0 && errors == 0,
        format!(
            "{} presentations, {runs} structures, {omissions} omissions, {errors} errors",
            cases.len()
        ),
    )
}

fn c9() -> Outcome {
    let files = presentations();
    let (mut runs, mut unstable, mut golden_diff, mut bad_codes) = (0, 0, 0, 0);
    for file in &files {
        let name = stem(file);
        for cmd in ["validate", "check", "cells"] {
            runs += 1;
            let a = fcat(&[cmd, file.to_str().unwrap(), "--json", "-"]);
            let b = fcat(&[cmd, file.to_str().unwrap(), "--json", "-"]);
            if a.stdout != b.stdout {
                unstable += 1;
            }
            let gold = fs::read(root().join("golden").join(format!("{name}.{cmd}.json")));
            if gold.ok().as_deref() != Some(&a.stdout[..]) {
                golden_diff += 1;
            }
            let expected = match (cmd, name.as_str()) {
                ("check", "presentations/fix-par" | "presentations/fix-loop") => 1,
                ("check", n) if n.starts_with("mutants/") => 1,
                ("validate", _) => {
                    let p = fcat_core::parse_presentation(&fs::read_to_string(file).unwrap()).unwrap();
                    i32::from(validate_presentation(&p).has_failures())
                }
                _ => 0,
            };
            if code(&a) != expected {
                bad_codes += 1;
            }
        }
    }
    outcome(
        unstable == 0 && golden_diff == 0 && bad_codes == 0,
        format!(
            "{} files, {runs} runs, {unstable} unstable, {golden_diff} golden mismatches, {bad_codes} exit-code violations",
            files.len()
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("1 equivalence relation", c1),
        ("2 oracle agreement", c2),
        ("3 certificate soundness", c3),
        ("4 constructive witnesses", c4),
        ("5 tower construction fidelity", c5),
        ("6 coherence on strict fixtures", c6),
        ("7 mutation detection", c7),
        ("8 power structure membership", c8),
        ("9 cli determinism", c9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
