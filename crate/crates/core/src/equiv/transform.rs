//! Certificate transforms: reflexivity, symmetry, pairing and pushing along
//! a functor.

use std::collections::{BTreeMap, VecDeque};

use crate::derived::functor::FunctorData;
use crate::derived::power::tuple_token;
use crate::equiv::cert::{CertArena, CertNode, CertStep, NodeId, RationalCert};
use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::oracle::Oracle;
use crate::presentation::Presentation;

/// Reflexivity at `a`: one node per object of the identity tower
/// `a, J(1_a), J(1_{J(1_a)}), ...`, each supported by the identity, until
/// the tower repeats or leaves the window (frontier leaf).
///
/// Requires `1_x 1_x = 1_x` along the tower.
pub fn refl_cert(p: &Presentation, a: &ObjectId) -> Result<RationalCert> {
    refl_cert_in(p, &|o| p.is_frontier(o), a)
}

pub fn refl_cert_in(o: &dyn Oracle, frontier: &dyn Fn(&ObjectId) -> bool, a: &ObjectId) -> Result<RationalCert> {
    let mut arena = CertArena::new();
    let mut seen: BTreeMap<ObjectId, NodeId> = BTreeMap::new();
    let mut x = a.clone();
    let mut id = arena.alloc(x.clone(), x.clone());
    seen.insert(x.clone(), id);
    loop {
        let Some(i) = o.identity(&x) else {
            if frontier(&x) {
                break;
            }
            return Err(FcatError::Precondition(format!("no identity at `{x}`")));
        };
        match o.compose(&Path::new(x.clone(), [i.clone(), i.clone()])) {
            Ok(ii) if ii == i => {}
            Ok(_) => return Err(FcatError::Precondition(format!("identity of `{x}` is not idempotent"))),
            Err(e) if e.is_frontier() => break,
            Err(e) => return Err(e),
        }
        let next = o
            .switchback(&i)
            .ok_or_else(|| FcatError::Precondition(format!("J undefined on `{i}`")))?;
        let (child, fresh) = match seen.get(&next) {
            Some(c) => (*c, false),
            None => {
                let c = arena.alloc(next.clone(), next.clone());
                seen.insert(next.clone(), c);
                (c, true)
            }
        };
        arena.set_step(
            id,
            CertStep {
                fwd: i.clone(),
                bwd: i,
                child0: child,
                child1: child,
            },
        );
        if !fresh {
            break;
        }
        x = next;
        id = child;
    }
    Ok(arena.extract(0))
}

/// Symmetry: a new root for `(B, A)` with forward and backward arrows and
/// children swapped. The children keep their orientation, which is exactly
/// what the swapped root requires.
pub fn sym_cert(cert: &RationalCert) -> RationalCert {
    let mut out = cert.clone();
    let root = cert.root_node();
    let id = cert.nodes.keys().next_back().copied().unwrap_or(0) + 1;
    out.nodes.insert(
        id,
        CertNode {
            id,
            left: root.right.clone(),
            right: root.left.clone(),
            step: root.step.as_ref().map(|s| CertStep {
                fwd: s.bwd.clone(),
                bwd: s.fwd.clone(),
                child0: s.child1,
                child1: s.child0,
            }),
        },
    );
    out.root = id;
    out.normalized()
}

/// Componentwise pairing of certificates in the arrow category into one
/// certificate in the product, with tuple tokens `(x1,...,xn)`. A product
/// node is a leaf as soon as one component is.
pub fn pair_cert(certs: &[RationalCert]) -> Result<RationalCert> {
    if certs.is_empty() {
        return Err(FcatError::Precondition("pairing needs at least one certificate".into()));
    }
    let mut arena = CertArena::new();
    let mut ids: BTreeMap<Vec<NodeId>, NodeId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let root: Vec<NodeId> = certs.iter().map(|c| c.root).collect();
    let alloc = |key: &Vec<NodeId>, arena: &mut CertArena| {
        let nodes: Vec<&CertNode> = key.iter().zip(certs).map(|(k, c)| &c.nodes[k]).collect();
        arena.alloc(
            ObjectId::new(tuple_token(nodes.iter().map(|n| n.left.as_str()))),
            ObjectId::new(tuple_token(nodes.iter().map(|n| n.right.as_str()))),
        )
    };
    ids.insert(root.clone(), alloc(&root, &mut arena));
    queue.push_back(root.clone());
    while let Some(key) = queue.pop_front() {
        let steps: Option<Vec<&CertStep>> = key.iter().zip(certs).map(|(k, c)| c.nodes[k].step.as_ref()).collect();
        let Some(steps) = steps else { continue };
        let mut child = |pick: fn(&CertStep) -> NodeId, arena: &mut CertArena| -> Result<NodeId> {
            let k: Vec<NodeId> = steps.iter().map(|s| pick(s)).collect();
            for (c, cert) in k.iter().zip(certs) {
                if !cert.nodes.contains_key(c) {
                    return Err(FcatError::Precondition(format!("dangling child {c}")));
                }
            }
            Ok(match ids.get(&k) {
                Some(id) => *id,
                None => {
                    let id = alloc(&k, arena);
                    ids.insert(k.clone(), id);
                    queue.push_back(k);
                    id
                }
            })
        };
        let child0 = child(|s| s.child0, &mut arena)?;
        let child1 = child(|s| s.child1, &mut arena)?;
        arena.set_step(
            ids[&key],
            CertStep {
                fwd: ArrowId::new(tuple_token(steps.iter().map(|s| s.fwd.as_str()))),
                bwd: ArrowId::new(tuple_token(steps.iter().map(|s| s.bwd.as_str()))),
                child0,
                child1,
            },
        );
    }
    Ok(arena.extract(ids[&root]))
}

/// Applies object and arrow maps nodewise.
pub fn push_cert_with(
    cert: &RationalCert,
    mut on_object: impl FnMut(&ObjectId) -> Result<ObjectId>,
    mut on_arrow: impl FnMut(&ArrowId) -> Result<ArrowId>,
) -> Result<RationalCert> {
    let mut nodes = BTreeMap::new();
    for (id, n) in &cert.nodes {
        let step = match &n.step {
            None => None,
            Some(s) => Some(CertStep {
                fwd: on_arrow(&s.fwd)?,
                bwd: on_arrow(&s.bwd)?,
                child0: s.child0,
                child1: s.child1,
            }),
        };
        nodes.insert(
            *id,
            CertNode {
                id: *id,
                left: on_object(&n.left)?,
                right: on_object(&n.right)?,
                step,
            },
        );
    }
    Ok(RationalCert { root: cert.root, nodes })
}

/// Image of a certificate under a functor.
pub fn push_cert(f: &FunctorData, cert: &RationalCert) -> Result<RationalCert> {
    push_cert_with(
        cert,
        |o| {
            f.object_map
                .get(o)
                .cloned()
                .ok_or_else(|| FcatError::Precondition(format!("functor undefined on object `{o}`")))
        },
        |a| {
            f.arrow_map
                .get(a)
                .cloned()
                .ok_or_else(|| FcatError::Precondition(format!("functor undefined on arrow `{a}`")))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::decide::{decide_equiv, EquivMode};
    use crate::equiv::verify::accepts;
    use crate::fixtures;
    use crate::ids::obj;

    #[test]
    fn refl_on_fix_one_is_one_node() {
        let c = refl_cert(&fixtures::fix_one(), &obj("A")).unwrap();
        assert_eq!(c.len(), 1);
        assert!(accepts(&fixtures::fix_one(), &c));
    }

    #[test]
    fn refl_on_fix_iso_climbs_the_tower() {
        let p = fixtures::fix_iso();
        let c = refl_cert(&p, &obj("X")).unwrap();
        assert_eq!(c.len(), 4);
        assert!(accepts(&p, &c));
    }

    #[test]
    fn sym_reverses_the_endpoints() {
        let p = fixtures::fix_iso();
        let r = decide_equiv(&p, EquivMode::Optimistic);
        let c = r.extract(&obj("X"), &obj("Y")).unwrap();
        let s = sym_cert(&c);
        assert_eq!(s.endpoints(), (obj("Y"), obj("X")));
        assert!(accepts(&p, &s));
    }

    #[test]
    fn push_along_identity_is_identity() {
        let p = fixtures::fix_iso();
        let c = decide_equiv(&p, EquivMode::Optimistic)
            .extract(&obj("X"), &obj("Y"))
            .unwrap();
        let id = FunctorData::identity(&p);
        assert_eq!(push_cert(&id, &c).unwrap(), c);
    }
}
