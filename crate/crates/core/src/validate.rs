//! Structural checks of a presentation against the pre-folded category laws.

use serde_json::json;

use crate::ids::Path;
use crate::presentation::{switchback_fibres, Presentation};
use crate::report::{Report, Status};

/// Runs every structural check. Problems are findings, never errors.
pub fn validate_presentation(p: &Presentation) -> Report {
    let mut r = Report::new();

    for f in p.arrows_sorted() {
        match p.switchback(f) {
            Some(_) => r.pass("J-total"),
            None => r.fail("J-total", json!({ "arrow": f })),
        }
    }
    for (o, fs) in switchback_fibres(p) {
        if fs.len() > 1 {
            let mut fs = fs;
            fs.sort();
            r.fail("J-injective", json!({ "object": o, "arrows": fs }));
        } else {
            r.pass("J-injective");
        }
    }

    for o in p.objects_sorted() {
        match p.identity(o) {
            Some(i) => {
                let (d, c) = p.ends(i).expect("identity arrow indexed");
                if d == o && c == o {
                    r.pass("identity-typing");
                } else {
                    r.fail(
                        "identity-typing",
                        json!({ "object": o, "arrow": i, "dom": d, "cod": c }),
                    );
                }
            }
            None if p.is_frontier(o) => r.skip("identity-typing", Status::SkippedFrontier, json!({ "object": o })),
            None => r.fail("identity-typing", json!({ "object": o, "missing": true })),
        }
    }

    let mut entries: Vec<_> = p.bcomp_table().iter().collect();
    entries.sort();
    for ((f, g), h) in entries {
        let (fd, fc) = p.ends(f).expect("indexed");
        let (gd, gc) = p.ends(g).expect("indexed");
        let (hd, hc) = p.ends(h).expect("indexed");
        if fc != gd {
            r.fail(
                "bcomp-domain",
                json!({ "left": f, "right": g, "reason": "not composable" }),
            );
        } else if hd != fd || hc != gc {
            r.fail(
                "bcomp-typing",
                json!({ "left": f, "right": g, "out": h, "expected": [fd, gc], "found": [hd, hc] }),
            );
        } else {
            r.pass("bcomp-typing");
        }
    }
    for f in p.arrows_sorted() {
        let (fd, fc) = p.ends(f).expect("indexed");
        for g in p.out_arrows(fc) {
            if p.bcomp(f, g).is_some() {
                r.pass("bcomp-domain");
            } else if p.touches_frontier([fd, fc, p.cod(g).expect("indexed")]) {
                r.skip(
                    "bcomp-domain",
                    Status::SkippedFrontier,
                    json!({ "left": f, "right": g }),
                );
            } else {
                r.fail(
                    "bcomp-domain",
                    json!({ "left": f, "right": g, "reason": "missing composite" }),
                );
            }
        }
    }

    let mut overrides: Vec<(&Path, _)> = p.overrides().iter().collect();
    overrides.sort();
    for (path, out) in overrides {
        let witness = json!({ "path": path.to_string(), "out": out });
        if path.len() < 2 {
            r.fail("override-typing", witness);
            continue;
        }
        match p.path_target(path) {
            Ok(end) => {
                let (d, c) = p.ends(out).expect("indexed");
                if *d == path.base && *c == end {
                    r.pass("override-typing");
                } else {
                    r.fail("override-typing", witness);
                }
            }
            Err(_) => r.fail("override-typing", witness),
        }
    }

    // holds by construction of `compose`
    for _ in p.arrows_sorted() {
        r.pass("unary-law");
    }

    for o in p.frontier() {
        r.skip("frontier", Status::SkippedFrontier, json!({ "object": o }));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::PresentationData;
    use crate::ids::{arr, obj};

    #[test]
    fn fix_one_passes() {
        let r = validate_presentation(&fixtures::fix_one());
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert_eq!(r.count(Status::SkippedFrontier), 0);
    }

    #[test]
    fn non_injective_switchback_fails() {
        let mut d: PresentationData = fixtures::fix_one().into_data();
        d.objects.push(obj("B"));
        d.arrows.push(crate::format::ArrowDecl {
            id: arr("1_B"),
            dom: obj("B"),
            cod: obj("B"),
        });
        d.identity.insert(obj("B"), arr("1_B"));
        d.bcomp.push(crate::format::BinaryEntry {
            left: arr("1_B"),
            right: arr("1_B"),
            out: arr("1_B"),
        });
        d.switchback.insert(arr("1_B"), obj("A"));
        let p = Presentation::from_data(d).unwrap();
        let r = validate_presentation(&p);
        assert_eq!(r.status_of("J-injective"), Some(Status::Fail));
    }

    #[test]
    fn fix_iso_skips_only_at_the_frontier() {
        let p = fixtures::fix_iso();
        let r = validate_presentation(&p);
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert_eq!(r.instances("frontier"), 4);
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut d = fixtures::fix_one().into_data();
        d.bcomp.clear();
        let r = validate_presentation(&Presentation::from_data(d).unwrap());
        assert_eq!(r.status_of("bcomp-domain"), Some(Status::Fail));
    }
}
