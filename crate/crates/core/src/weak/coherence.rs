//! Coherence equivalences and the checker for axioms a1, a2 and b.
//!
//! Every instance composes two arrows out of `J(f_1...f_n)` and asks whether
//! their switchbacks are equivalent under the decided relation.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::equiv::cert::RationalCert;
use crate::equiv::decide::{decide_equiv, EquivMode, EquivRelation};
use crate::equiv::transform::refl_cert;
use crate::equiv::verify::verify_cert;
use crate::error::{FcatError, Result};
use crate::format::ThetaRule;
use crate::ids::{ArrowId, Path};
use crate::presentation::Presentation;
use crate::report::{Report, Status};
use crate::weak::mu::{mu_apply, mu_tuple};
use crate::weak::{object_at, weak_of, ThetaKey, WeakStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    A1,
    A2,
    B,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::A1, Axiom::A2, Axiom::B];

    pub fn check_id(self) -> &'static str {
        match self {
            Axiom::A1 => "coherence-a1",
            Axiom::A2 => "coherence-a2",
            Axiom::B => "coherence-b",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::A1 => "a1",
            Axiom::A2 => "a2",
            Axiom::B => "b",
        })
    }
}

impl FromStr for Axiom {
    type Err = FcatError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a1" => Ok(Axiom::A1),
            "a2" => Ok(Axiom::A2),
            "b" => Ok(Axiom::B),
            other => Err(FcatError::Precondition(format!("unknown axiom `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoherenceBounds {
    /// Longest path examined.
    pub max_len: usize,
    pub mode: EquivMode,
    /// Maximum number of paths (or cell tuples) per length.
    pub budget: usize,
}

impl Default for CoherenceBounds {
    fn default() -> Self {
        Self {
            max_len: 4,
            mode: EquivMode::Optimistic,
            budget: 100_000,
        }
    }
}

/// The stored coherence certificate for `key`, or the reflexivity
/// certificate when the default rule applies and both endpoints coincide.
pub fn theta_lookup(p: &Presentation, w: &WeakStructure, key: &ThetaKey) -> Result<RationalCert> {
    if let Some(c) = w.theta.get(key) {
        return Ok(c.clone());
    }
    let missing = || FcatError::MissingTheta(key.to_string());
    match w.theta_default {
        Some(ThetaRule::Reflexivity) if !w.theta_except.contains(key) => {
            let (x, y) = key.endpoints(p)?;
            if x == y {
                refl_cert(p, &x)
            } else {
                Err(missing())
            }
        }
        _ => Err(missing()),
    }
}

enum Outcome {
    Pass,
    Fail(Value),
    Skip(Status, Value),
}

struct Checker<'a> {
    p: &'a Presentation,
    w: &'a WeakStructure,
    rel: EquivRelation,
    theta: RefCell<BTreeMap<ThetaKey, ThetaArrow>>,
}

/// The forward arrow of a coherence equivalence, or why it is unavailable.
type ThetaArrow = std::result::Result<ArrowId, (Status, Value)>;

fn contract(p: &Presentation, path: &Path, a: usize, b: usize) -> Result<Path> {
    ThetaKey::new(path.clone(), a, b).contracted(p)
}

impl Checker<'_> {
    /// Forward arrow of the coherence equivalence, checked once per key.
    fn theta0(&self, path: &Path, a: usize, b: usize) -> std::result::Result<ArrowId, (Status, Value)> {
        let key = ThetaKey::new(path.clone(), a, b);
        if let Some(v) = self.theta.borrow().get(&key) {
            return v.clone();
        }
        let v = self.theta0_uncached(&key);
        self.theta.borrow_mut().insert(key, v.clone());
        v
    }

    fn theta0_uncached(&self, key: &ThetaKey) -> std::result::Result<ArrowId, (Status, Value)> {
        let wit = json!({ "theta": key.to_string() });
        let err = |e: FcatError| match e {
            FcatError::MissingTheta(_) => (Status::SkippedMissingTheta, wit.clone()),
            e if e.is_frontier() => (Status::SkippedFrontier, wit.clone()),
            e => (
                Status::Fail,
                json!({ "theta": key.to_string(), "error": e.to_string() }),
            ),
        };
        let ends = key.endpoints(self.p).map_err(err)?;
        let cert = theta_lookup(self.p, self.w, key).map_err(err)?;
        if cert.endpoints() != ends {
            return Err((
                Status::Fail,
                json!({
                    "theta": key.to_string(),
                    "expected": [ends.0, ends.1],
                    "found": [cert.endpoints().0, cert.endpoints().1],
                }),
            ));
        }
        if verify_cert(self.p, &cert).has_failures() {
            return Err((
                Status::Fail,
                json!({ "theta": key.to_string(), "certificate": "rejected" }),
            ));
        }
        cert.forward().cloned().ok_or((Status::SkippedFrontier, wit))
    }

    /// Compares `J(lhs)` and `J(rhs)` under the decided relation.
    fn judge(&self, lhs: &ArrowId, rhs: &ArrowId, wit: Value) -> Outcome {
        let j = |f: &ArrowId| self.p.switchback_checked(f);
        match (j(lhs), j(rhs)) {
            (Ok(x), Ok(y)) if self.rel.contains(&x, &y) => Outcome::Pass,
            (Ok(x), Ok(y)) => {
                let mut wit = wit;
                wit["lhs"] = json!(lhs);
                wit["rhs"] = json!(rhs);
                wit["switchbacks"] = json!([x, y]);
                Outcome::Fail(wit)
            }
            (Err(e), _) | (_, Err(e)) => self.error(e, wit),
        }
    }

    fn error(&self, e: FcatError, wit: Value) -> Outcome {
        if e.is_frontier() {
            Outcome::Skip(Status::SkippedFrontier, wit)
        } else {
            let mut wit = wit;
            wit["error"] = json!(e.to_string());
            Outcome::Fail(wit)
        }
    }

    fn compose2(&self, f: &ArrowId, g: &ArrowId) -> Result<ArrowId> {
        self.p.compose2(f, g)
    }

    fn a1(&self, path: &Path, [a, b, c, d]: [usize; 4]) -> Outcome {
        let wit = json!({ "path": path.to_string(), "cuts": [a, b, c, d] });
        let shift = b - a;
        let run = || -> std::result::Result<Outcome, (Status, Value)> {
            let first = contract(self.p, path, a, b).map_err(|e| lift(e, &wit))?;
            let t1 = self.theta0(path, a, b)?;
            let t2 = self.theta0(&first, c - shift + 1, d - shift + 1)?;
            let second = contract(self.p, path, c, d).map_err(|e| lift(e, &wit))?;
            let t3 = self.theta0(path, c, d)?;
            let t4 = self.theta0(&second, a, b)?;
            let lhs = self.compose2(&t1, &t2).map_err(|e| lift(e, &wit))?;
            let rhs = self.compose2(&t3, &t4).map_err(|e| lift(e, &wit))?;
            Ok(self.judge(&lhs, &rhs, wit.clone()))
        };
        settle(run(), &wit)
    }

    fn a2(&self, path: &Path, [a, c, d, b]: [usize; 4]) -> Outcome {
        let wit = json!({ "path": path.to_string(), "cuts": [a, c, d, b] });
        let run = || -> std::result::Result<Outcome, (Status, Value)> {
            let l = |e| lift(e, &wit);
            // inner contraction first, then the outer block (now shorter)
            let inner = contract(self.p, path, c, d).map_err(l)?;
            let t1 = self.theta0(path, c, d)?;
            let t2 = self.theta0(&inner, a, b - (d - c) + 1)?;
            let lhs = self.compose2(&t1, &t2).map_err(l)?;
            // outer contraction, then the inner one inside the block via mu
            let outer = contract(self.p, path, a, b).map_err(l)?;
            let t3 = self.theta0(path, a, b)?;
            let block = Path::new(
                object_at(self.p, path, a).map_err(l)?,
                path.arrows[a..b].iter().cloned(),
            );
            let tb = self.theta0(&block, c - a, d - a)?;
            let mut cells = Vec::with_capacity(outer.len());
            for (i, f) in outer.arrows.iter().enumerate() {
                if i == a {
                    cells.push(tb.clone());
                } else {
                    let jf = self.p.switchback_checked(f).map_err(l)?;
                    cells.push(self.p.identity_checked(&jf).map_err(l)?);
                }
            }
            let m = mu_apply(self.p, self.w, &cells).map_err(l)?;
            let rhs = self.compose2(&t3, &m).map_err(l)?;
            Ok(self.judge(&lhs, &rhs, wit.clone()))
        };
        settle(run(), &wit)
    }

    fn b(&self, f: &Path, g: &Path, cells: &[ArrowId], a: usize, b: usize) -> Outcome {
        let wit = json!({ "path": f.to_string(), "target": g.to_string(), "cells": cells, "cuts": [a, b] });
        let run = || -> std::result::Result<Outcome, (Status, Value)> {
            let l = |e| lift(e, &wit);
            let base_a = object_at(self.p, f, a).map_err(l)?;
            let inner = mu_tuple(self.p, self.w, &base_a, &cells[a..b]).map_err(l)?;
            let mut outer_cells = cells[..a].to_vec();
            outer_cells.push(inner);
            outer_cells.extend_from_slice(&cells[b..]);
            let nested = mu_apply(self.p, self.w, &outer_cells).map_err(l)?;
            let tf = self.theta0(f, a, b)?;
            let lhs = self.compose2(&tf, &nested).map_err(l)?;
            let whole = mu_tuple(self.p, self.w, &f.base, cells).map_err(l)?;
            let tg = self.theta0(g, a, b)?;
            let rhs = self.compose2(&whole, &tg).map_err(l)?;
            Ok(self.judge(&lhs, &rhs, wit.clone()))
        };
        settle(run(), &wit)
    }
}

fn lift(e: FcatError, wit: &Value) -> (Status, Value) {
    if e.is_frontier() {
        (Status::SkippedFrontier, wit.clone())
    } else {
        let mut w = wit.clone();
        w["error"] = json!(e.to_string());
        (Status::Fail, w)
    }
}

fn settle(r: std::result::Result<Outcome, (Status, Value)>, wit: &Value) -> Outcome {
    match r {
        Ok(o) => o,
        Err((Status::Fail, detail)) => {
            let mut w = wit.clone();
            w["cause"] = detail;
            Outcome::Fail(w)
        }
        Err((s, detail)) => {
            let mut w = wit.clone();
            w["cause"] = detail;
            Outcome::Skip(s, w)
        }
    }
}

/// Cell tuples `alpha_k: J f_k -> J g_k` over a path `f`, grouped by the
/// target path `g`.
fn cells_over(p: &Presentation, f: &Path, budget: usize) -> Result<Vec<(Path, Vec<ArrowId>)>> {
    let mut out: Vec<(Path, Vec<ArrowId>)> = vec![(Path::empty(f.base.clone()), Vec::new())];
    for fk in &f.arrows {
        let (d, c) = p.ends(fk).ok_or_else(|| FcatError::UnknownArrow(fk.clone()))?;
        let Some(jf) = p.switchback(fk) else {
            return Ok(Vec::new());
        };
        let mut choices = Vec::new();
        for alpha in p.out_arrows(jf) {
            let Some(gk) = p.cod(alpha).and_then(|t| p.switchback_inv(t)) else {
                continue;
            };
            if p.ends(gk) == Some((d, c)) {
                choices.push((gk.clone(), alpha.clone()));
            }
        }
        let mut next = Vec::new();
        for (g, cs) in &out {
            for (gk, alpha) in &choices {
                let mut g2 = g.clone();
                g2.arrows.push(gk.clone());
                let mut cs2 = cs.clone();
                cs2.push(alpha.clone());
                next.push((g2, cs2));
            }
        }
        if next.len() > budget {
            return Err(FcatError::BudgetExhausted {
                what: "cell tuples",
                limit: budget,
            });
        }
        out = next;
    }
    Ok(out)
}

/// Checks every instance of the selected axioms over paths of length at
/// most `bounds.max_len`.
pub fn check_coherence(p: &Presentation, axioms: &[Axiom], bounds: CoherenceBounds) -> Result<Report> {
    let w = weak_of(p);
    let checker = Checker {
        p,
        w: &w,
        rel: decide_equiv(p, bounds.mode),
        theta: RefCell::new(BTreeMap::new()),
    };
    let mut r = Report::new();
    let mut record = |axiom: Axiom, o: Outcome| match o {
        Outcome::Pass => r.pass(axiom.check_id()),
        Outcome::Fail(wit) => r.fail(axiom.check_id(), wit),
        Outcome::Skip(s, wit) => r.skip(axiom.check_id(), s, wit),
    };
    for n in 0..=bounds.max_len {
        for path in p.paths_of_length(n, bounds.budget)? {
            if axioms.contains(&Axiom::A1) {
                for a in 0..=n {
                    for b in a..=n {
                        for c in b..=n {
                            for d in c..=n {
                                record(Axiom::A1, checker.a1(&path, [a, b, c, d]));
                            }
                        }
                    }
                }
            }
            if axioms.contains(&Axiom::A2) {
                for a in 0..=n {
                    for c in a..=n {
                        for d in c..=n {
                            for b in d..=n {
                                record(Axiom::A2, checker.a2(&path, [a, c, d, b]));
                            }
                        }
                    }
                }
            }
            if axioms.contains(&Axiom::B) {
                for (g, cells) in cells_over(p, &path, bounds.budget)? {
                    for a in 0..=n {
                        for b in a..=n {
                            record(Axiom::B, checker.b(&path, &g, &cells, a, b));
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Checks the coherence table itself: every stored certificate relates the
/// endpoints of its key and verifies (`theta-cert`), and every key over a
/// path of length at most `bounds.max_len` has a certificate
/// (`theta-total`). A key missing from a declared weak section fails unless
/// its endpoints touch the frontier; without a weak section nothing is
/// declared and missing keys are only reported as skipped.
pub fn check_theta_table(p: &Presentation, bounds: CoherenceBounds) -> Result<Report> {
    let w = weak_of(p);
    let mut r = Report::new();
    for (key, cert) in &w.theta {
        let wit = json!({ "theta": key.to_string() });
        match key.endpoints(p) {
            Ok(e) if e == cert.endpoints() && !verify_cert(p, cert).has_failures() => r.pass("theta-cert"),
            Err(e) if e.is_frontier() => r.skip("theta-cert", Status::SkippedFrontier, wit),
            _ => r.fail("theta-cert", wit),
        }
    }
    for n in 0..=bounds.max_len {
        for path in p.paths_of_length(n, bounds.budget)? {
            for a in 0..=n {
                for b in a..=n {
                    let key = ThetaKey::new(path.clone(), a, b);
                    let wit = json!({ "theta": key.to_string() });
                    match theta_lookup(p, &w, &key) {
                        Ok(_) => r.pass("theta-total"),
                        Err(e) if e.is_frontier() => r.skip("theta-total", Status::SkippedFrontier, wit),
                        Err(FcatError::MissingTheta(_)) => match key.endpoints(p) {
                            Ok((x, y)) if p.touches_frontier([&x, &y]) => {
                                r.skip("theta-total", Status::SkippedFrontier, wit)
                            }
                            _ if p.weak().is_none() => r.skip("theta-total", Status::SkippedMissingTheta, wit),
                            _ => r.fail("theta-total", wit),
                        },
                        Err(e) => {
                            let mut wit = wit;
                            wit["error"] = json!(e.to_string());
                            r.fail("theta-total", wit);
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::{arr, obj};

    #[test]
    fn strict_fixture_theta_is_reflexive() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let key = ThetaKey::new(Path::new(obj("X"), [arr("u"), arr("v")]), 0, 2);
        let c = theta_lookup(&p, &w, &key).unwrap();
        assert_eq!(c.endpoints(), (obj("<id_X,0>"), obj("<id_X,0>")));
    }

    #[test]
    fn empty_parenthesis_key() {
        let p = fixtures::fix_iso();
        let key = ThetaKey::new(Path::new(obj("X"), [arr("u"), arr("v")]), 1, 1);
        let contracted = key.contracted(&p).unwrap();
        assert_eq!(contracted.arrows, vec![arr("u"), arr("id_Y"), arr("v")]);
    }

    #[test]
    fn excepted_key_is_missing() {
        let mut d = fixtures::fix_iso().into_data();
        let key = ThetaKey::new(Path::new(obj("X"), [arr("u"), arr("v")]), 0, 2);
        d.weak
            .as_mut()
            .unwrap()
            .theta_default
            .as_mut()
            .unwrap()
            .except
            .push(key.to_data());
        let p = Presentation::from_data(d).unwrap();
        let err = theta_lookup(&p, &weak_of(&p), &key).unwrap_err();
        assert!(matches!(err, FcatError::MissingTheta(_)));
    }

    #[test]
    fn fix_iso_passes_all_axioms() {
        let p = fixtures::fix_iso();
        let bounds = CoherenceBounds {
            max_len: 3,
            ..Default::default()
        };
        let r = check_coherence(&p, &Axiom::ALL, bounds).unwrap();
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert!(r.instances("coherence-a1") > 0);
    }

    #[test]
    fn theta_table_totality() {
        let bounds = CoherenceBounds {
            max_len: 3,
            ..Default::default()
        };
        let r = check_theta_table(&fixtures::fix_iso(), bounds).unwrap();
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert!(r.instances("theta-total") > 0);
        let dropped = fixtures::mutation_catalogue()
            .into_iter()
            .find(|m| m.name == "iso-drop-theta")
            .unwrap();
        let r = check_theta_table(&dropped.apply().unwrap(), bounds).unwrap();
        assert_eq!(r.status_of("theta-total"), Some(Status::Fail));
    }
}
