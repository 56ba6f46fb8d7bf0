//! Exhaustive certificate search, used as an independent check on
//! [`crate::equiv::decide_equiv`].
//!
//! Candidates are built top-down: each open pair is given every choice of
//! forward and backward arrow in identifier order, children pairs are opened
//! on first sight, and the search backtracks when the node bound is hit.

use std::collections::BTreeMap;

use crate::equiv::cert::{CertNode, CertStep, NodeId, RationalCert};
use crate::equiv::verify::{expected_child, verify_cert};
use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteOutcome {
    /// A certificate without frontier leaves.
    Yes(RationalCert),
    /// No certificate within the bound, but the search had to stop at the
    /// frontier somewhere. Carries a certificate with frontier leaves if one
    /// was found.
    Frontier(Option<RationalCert>),
    NoWithinBound,
}

impl BruteOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, BruteOutcome::Yes(_))
    }

    /// True for `Yes` and for `Frontier` with a certificate.
    pub fn found(&self) -> bool {
        matches!(self, BruteOutcome::Yes(_) | BruteOutcome::Frontier(Some(_)))
    }
}

type Pair = (ObjectId, ObjectId);
type Choice = Option<(ArrowId, ArrowId, Pair, Pair)>;

struct Search<'a> {
    p: &'a Presentation,
    max_nodes: usize,
    steps: usize,
    step_budget: usize,
    order: Vec<Pair>,
    chosen: BTreeMap<Pair, Choice>,
    hit_frontier: bool,
}

/// Searches certificates for `(a, b)` with at most `max_nodes` nodes.
/// `step_budget` bounds the number of candidate choices tried.
pub fn brute_force_equiv(
    p: &Presentation,
    a: &ObjectId,
    b: &ObjectId,
    max_nodes: usize,
    step_budget: usize,
) -> Result<BruteOutcome> {
    if max_nodes == 0 {
        return Ok(BruteOutcome::NoWithinBound);
    }
    let mut s = Search {
        p,
        max_nodes,
        steps: 0,
        step_budget,
        order: vec![(a.clone(), b.clone())],
        chosen: BTreeMap::new(),
        hit_frontier: false,
    };
    if !s.run(0)? {
        return Ok(if s.hit_frontier {
            BruteOutcome::Frontier(None)
        } else {
            BruteOutcome::NoWithinBound
        });
    }
    let cert = s.build();
    if verify_cert(p, &cert).has_failures() {
        return Err(FcatError::Precondition(
            "enumerated certificate failed verification".into(),
        ));
    }
    let leaves = cert.nodes.values().any(|n| n.step.is_none());
    Ok(if leaves {
        BruteOutcome::Frontier(Some(cert))
    } else {
        BruteOutcome::Yes(cert)
    })
}

impl Search<'_> {
    fn run(&mut self, next: usize) -> Result<bool> {
        if next == self.order.len() {
            return Ok(true);
        }
        let (x, y) = self.order[next].clone();
        for f in self.p.hom(&x, &y) {
            for g in self.p.hom(&y, &x) {
                self.steps += 1;
                if self.steps > self.step_budget {
                    return Err(FcatError::BudgetExhausted {
                        what: "certificate enumeration",
                        limit: self.step_budget,
                    });
                }
                let children =
                    expected_child(self.p, &x, &f, &g).and_then(|c0| Ok((c0, expected_child(self.p, &y, &g, &f)?)));
                let (c0, c1) = match children {
                    Ok(c) => c,
                    Err(e) => {
                        self.hit_frontier |= e.is_frontier();
                        continue;
                    }
                };
                let before = self.order.len();
                for c in [&c0, &c1] {
                    if !self.order.contains(c) {
                        self.order.push(c.clone());
                    }
                }
                if self.order.len() <= self.max_nodes {
                    self.chosen
                        .insert((x.clone(), y.clone()), Some((f.clone(), g.clone(), c0, c1)));
                    if self.run(next + 1)? {
                        return Ok(true);
                    }
                    self.chosen.remove(&(x.clone(), y.clone()));
                }
                self.order.truncate(before);
            }
        }
        if x == y && self.p.is_frontier(&x) {
            self.hit_frontier = true;
            self.chosen.insert((x.clone(), y.clone()), None);
            if self.run(next + 1)? {
                return Ok(true);
            }
            self.chosen.remove(&(x, y));
        }
        Ok(false)
    }

    fn build(&self) -> RationalCert {
        let id = |pair: &Pair| self.order.iter().position(|q| q == pair).unwrap() as NodeId;
        let nodes = self
            .order
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let step = self.chosen[pair].as_ref().map(|(f, g, c0, c1)| CertStep {
                    fwd: f.clone(),
                    bwd: g.clone(),
                    child0: id(c0),
                    child1: id(c1),
                });
                let node = CertNode {
                    id: i as NodeId,
                    left: pair.0.clone(),
                    right: pair.1.clone(),
                    step,
                };
                (i as NodeId, node)
            })
            .collect();
        RationalCert { root: 0, nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::obj;

    #[test]
    fn fix_one_single_node() {
        let out = brute_force_equiv(&fixtures::fix_one(), &obj("A"), &obj("A"), 1, 1000).unwrap();
        match out {
            BruteOutcome::Yes(c) => assert_eq!(c.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_arrows_means_no_certificate() {
        let p = fixtures::fix_iso();
        let out = brute_force_equiv(&p, &obj("X"), &obj("<u,0>"), 4, 1000).unwrap();
        assert_eq!(out, BruteOutcome::NoWithinBound);
    }

    #[test]
    fn fix_iso_pair_is_found_with_frontier_leaves() {
        let p = fixtures::fix_iso();
        let out = brute_force_equiv(&p, &obj("X"), &obj("Y"), 16, 100_000).unwrap();
        assert!(out.found(), "{out:?}");
    }
}
