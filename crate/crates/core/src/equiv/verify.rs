//! The certificate checker.

use serde_json::json;

use crate::equiv::cert::{CertNode, RationalCert};
use crate::error::{FcatError, Result};
use crate::ids::{ObjectId, Path};
use crate::oracle::Oracle;
use crate::presentation::Presentation;
use crate::report::{Report, Status};

/// Checks every node of `cert` against `p`. The certificate is accepted iff
/// the report has no failures.
pub fn verify_cert(p: &Presentation, cert: &RationalCert) -> Report {
    verify_cert_in(p, &|o| p.is_frontier(o), cert)
}

/// [`verify_cert`] against any view. `frontier` tells which objects lie on
/// the truncation boundary.
pub fn verify_cert_in(o: &dyn Oracle, frontier: &dyn Fn(&ObjectId) -> bool, cert: &RationalCert) -> Report {
    let mut r = Report::new();
    if cert.node(cert.root).is_none() {
        r.fail("cert-structure", json!({ "missing-root": cert.root }));
        return r;
    }
    for n in cert.nodes.values() {
        check_node(o, frontier, cert, n, &mut r);
    }
    r
}

/// Shorthand: true iff the certificate verifies without failures.
pub fn accepts(p: &Presentation, cert: &RationalCert) -> bool {
    !verify_cert(p, cert).has_failures()
}

fn check_node(o: &dyn Oracle, frontier: &dyn Fn(&ObjectId) -> bool, cert: &RationalCert, n: &CertNode, r: &mut Report) {
    let (x, y) = (&n.left, &n.right);
    for obj in [x, y] {
        if !o.has_object(obj) {
            r.fail("cert-structure", json!({ "node": n.id, "unknown-object": obj }));
            return;
        }
    }
    let touches = frontier(x) || frontier(y);
    let Some(step) = &n.step else {
        if touches {
            r.skip("cert-leaf", Status::SkippedFrontier, json!({ "node": n.id }));
        } else {
            r.fail("cert-leaf", json!({ "node": n.id, "pair": [x, y] }));
        }
        return;
    };
    let (Some(c0), Some(c1)) = (cert.node(step.child0), cert.node(step.child1)) else {
        r.fail("cert-structure", json!({ "node": n.id, "dangling-child": true }));
        return;
    };
    let fwd_ok = o.ends(&step.fwd) == Some((x.clone(), y.clone()));
    let bwd_ok = o.ends(&step.bwd) == Some((y.clone(), x.clone()));
    if !(fwd_ok && bwd_ok) {
        r.fail(
            "cert-typing",
            json!({ "node": n.id, "pair": [x, y], "fwd": step.fwd, "bwd": step.bwd }),
        );
        return;
    }
    r.pass("cert-typing");
    for (id, child, base, first, second) in [
        ("cert-child0", c0, x, &step.fwd, &step.bwd),
        ("cert-child1", c1, y, &step.bwd, &step.fwd),
    ] {
        match expected_child(o, base, first, second) {
            Ok(pair) if pair == child.pair() => r.pass(id),
            Ok(pair) => r.fail(
                id,
                json!({
                    "node": n.id,
                    "expected": [pair.0, pair.1],
                    "found": [child.left, child.right],
                }),
            ),
            Err(e) if e.is_frontier() || touches => r.skip(id, Status::SkippedFrontier, json!({ "node": n.id })),
            Err(e) => r.fail(id, json!({ "node": n.id, "error": e.to_string() })),
        }
    }
}

/// `(J(compose<base, first, second>), J(1_base))`.
pub(crate) fn expected_child(
    o: &dyn Oracle,
    base: &ObjectId,
    first: &crate::ids::ArrowId,
    second: &crate::ids::ArrowId,
) -> Result<(ObjectId, ObjectId)> {
    let comp = o.compose(&Path::new(base.clone(), [first.clone(), second.clone()]))?;
    let unit = o.compose(&Path::empty(base.clone()))?;
    let j = |f: &crate::ids::ArrowId| {
        o.switchback(f)
            .ok_or_else(|| FcatError::Precondition(format!("J undefined on `{f}`")))
    };
    Ok((j(&comp)?, j(&unit)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::cert::{CertNode, CertStep};
    use crate::fixtures;
    use crate::ids::{arr, obj};

    fn single(left: &str, right: &str) -> RationalCert {
        let node = CertNode {
            id: 0,
            left: obj(left),
            right: obj(right),
            step: Some(CertStep {
                fwd: arr("1_A"),
                bwd: arr("1_A"),
                child0: 0,
                child1: 0,
            }),
        };
        RationalCert {
            root: 0,
            nodes: [(0, node)].into(),
        }
    }

    #[test]
    fn self_loop_on_fix_one_accepts() {
        let r = verify_cert(&fixtures::fix_one(), &single("A", "A"));
        assert!(!r.has_failures(), "{:?}", r.failures());
    }

    #[test]
    fn wrong_pair_is_rejected() {
        let mut d = fixtures::fix_one().into_data();
        d.objects.push(obj("B"));
        d.frontier.push(obj("B"));
        let p = Presentation::from_data(d).unwrap();
        let r = verify_cert(&p, &single("A", "B"));
        assert_eq!(r.status_of("cert-typing"), Some(Status::Fail));
    }

    #[test]
    fn leaf_away_from_frontier_is_rejected() {
        let mut c = single("A", "A");
        c.nodes.get_mut(&0).unwrap().step = None;
        assert!(!accepts(&fixtures::fix_one(), &c));
    }
}
