//! Greatest-fixpoint decision procedure for object equivalence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::equiv::cert::{CertArena, CertStep, RationalCert};
use crate::equiv::verify::expected_child;
use crate::ids::{ArrowId, ObjectId};
use crate::presentation::Presentation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivMode {
    /// Pairs whose support needs data beyond the frontier are refuted.
    Exact,
    /// Diagonal pairs at frontier objects are kept without support: the
    /// identity tower continues past the window.
    #[default]
    Optimistic,
}

/// Arrows supporting one member pair, with the pairs they lead to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub fwd: ArrowId,
    pub bwd: ArrowId,
    pub child0: (ObjectId, ObjectId),
    pub child1: (ObjectId, ObjectId),
}

type Pair = (ObjectId, ObjectId);

/// Result of [`decide_equiv`].
#[derive(Clone, Debug)]
pub struct EquivRelation {
    pub mode: EquivMode,
    pub members: BTreeSet<Pair>,
    /// First supporting choice in identifier order, for every member that
    /// has one. Frontier pairs kept by the optimistic rule may lack one.
    pub support: BTreeMap<Pair, Support>,
    /// `|R_k|` for every iteration, starting with `R_0`.
    pub sizes: Vec<usize>,
}

impl EquivRelation {
    pub fn contains(&self, a: &ObjectId, b: &ObjectId) -> bool {
        self.members.contains(&(a.clone(), b.clone()))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Builds a certificate for `(a, b)` with one node per pair reachable
    /// through the stored choices.
    pub fn extract(&self, a: &ObjectId, b: &ObjectId) -> Option<RationalCert> {
        let root = (a.clone(), b.clone());
        if !self.members.contains(&root) {
            return None;
        }
        let mut arena = CertArena::new();
        let mut ids = BTreeMap::new();
        let mut queue = VecDeque::new();
        ids.insert(root.clone(), arena.alloc(root.0.clone(), root.1.clone()));
        queue.push_back(root.clone());
        while let Some(pair) = queue.pop_front() {
            let Some(s) = self.support.get(&pair) else { continue };
            let mut child = |c: &Pair| {
                *ids.entry(c.clone()).or_insert_with(|| {
                    queue.push_back(c.clone());
                    arena.alloc(c.0.clone(), c.1.clone())
                })
            };
            let child0 = child(&s.child0);
            let child1 = child(&s.child1);
            arena.set_step(
                ids[&pair],
                CertStep {
                    fwd: s.fwd.clone(),
                    bwd: s.bwd.clone(),
                    child0,
                    child1,
                },
            );
        }
        Some(arena.extract(ids[&root]))
    }
}

/// Refines the full relation on objects until every member pair is supported
/// by arrows whose child pairs are members.
pub fn decide_equiv(p: &Presentation, mode: EquivMode) -> EquivRelation {
    let objs = p.objects_sorted();
    let n = objs.len();
    let index: BTreeMap<&ObjectId, usize> = objs.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let kept = |x: usize, y: usize| mode == EquivMode::Optimistic && x == y && p.is_frontier(&objs[x]);

    // candidate supports per pair, with child pairs as indices
    let mut cands: Vec<Vec<(ArrowId, ArrowId, usize, usize)>> = vec![Vec::new(); n * n];
    for (x, ox) in objs.iter().enumerate() {
        for (y, oy) in objs.iter().enumerate() {
            let fs = p.hom(ox, oy);
            if fs.is_empty() {
                continue;
            }
            let gs = p.hom(oy, ox);
            for f in &fs {
                for g in &gs {
                    let (Ok(c0), Ok(c1)) = (expected_child(p, ox, f, g), expected_child(p, oy, g, f)) else {
                        continue;
                    };
                    let (Some(&a0), Some(&b0), Some(&a1), Some(&b1)) =
                        (index.get(&c0.0), index.get(&c0.1), index.get(&c1.0), index.get(&c1.1))
                    else {
                        continue;
                    };
                    cands[x * n + y].push((f.clone(), g.clone(), a0 * n + b0, a1 * n + b1));
                }
            }
        }
    }

    let mut rel = vec![true; n * n];
    let mut sizes = vec![n * n];
    loop {
        let next: Vec<bool> = (0..n * n)
            .map(|i| rel[i] && (kept(i / n, i % n) || cands[i].iter().any(|(_, _, c0, c1)| rel[*c0] && rel[*c1])))
            .collect();
        let changed = next != rel;
        rel = next;
        sizes.push(rel.iter().filter(|b| **b).count());
        if !changed {
            break;
        }
    }

    let mut members = BTreeSet::new();
    let mut support = BTreeMap::new();
    let pair = |i: usize| (objs[i / n].clone(), objs[i % n].clone());
    for i in (0..n * n).filter(|i| rel[*i]) {
        members.insert(pair(i));
        if let Some((f, g, c0, c1)) = cands[i].iter().find(|(_, _, c0, c1)| rel[*c0] && rel[*c1]) {
            support.insert(
                pair(i),
                Support {
                    fwd: f.clone(),
                    bwd: g.clone(),
                    child0: pair(*c0),
                    child1: pair(*c1),
                },
            );
        }
    }
    EquivRelation {
        mode,
        members,
        support,
        sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::verify::accepts;
    use crate::fixtures;
    use crate::ids::obj;

    #[test]
    fn fix_one_is_the_diagonal() {
        let r = decide_equiv(&fixtures::fix_one(), EquivMode::Exact);
        assert_eq!(r.members, [(obj("A"), obj("A"))].into());
    }

    #[test]
    fn fix_iso_relates_the_isomorphic_objects() {
        let p = fixtures::fix_iso();
        let r = decide_equiv(&p, EquivMode::Optimistic);
        assert!(r.contains(&obj("X"), &obj("Y")));
        assert!(r.contains(&obj("Y"), &obj("X")));
        assert!(!r.contains(&obj("X"), &obj("<u,0>")));
        let c = r.extract(&obj("X"), &obj("Y")).unwrap();
        assert!(accepts(&p, &c));
    }

    #[test]
    fn exact_mode_refutes_frontier_towers() {
        let p = fixtures::fix_iso();
        let r = decide_equiv(&p, EquivMode::Exact);
        assert!(!r.contains(&obj("X"), &obj("X")));
    }

    #[test]
    fn sizes_never_grow() {
        let r = decide_equiv(&fixtures::fix_iso(), EquivMode::Optimistic);
        assert!(r.sizes.windows(2).all(|w| w[1] <= w[0]));
    }
}
