//! Horizontal composition `mu_n`, generated from the binary `hcomp` table by
//! folding, and its validator.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::derived::power::power_structure;
use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::presentation::Presentation;
use crate::report::{Report, Status};
use crate::weak::WeakStructure;

const MAX_NESTING: usize = 32;

fn is_path(p: &Presentation, xs: &[ArrowId]) -> bool {
    xs.windows(2).all(|w| match (p.cod(&w[0]), p.dom(&w[1])) {
        (Some(c), Some(d)) => c == d,
        _ => false,
    })
}

fn as_path(p: &Presentation, xs: &[ArrowId]) -> Result<Path> {
    let base = p
        .dom(&xs[0])
        .ok_or_else(|| FcatError::UnknownArrow(xs[0].clone()))?
        .clone();
    Ok(Path::new(base, xs.iter().cloned()))
}

fn is_identity(p: &Presentation, f: &ArrowId) -> bool {
    p.dom(f).and_then(|d| p.identity(d)) == Some(f)
}

/// Object map of `mu_n` on an `n`-tuple of arrow-category objects: the
/// composite when the tuple is a path, otherwise the horizontal composite of
/// the tuple read as cells.
pub fn mu_object(p: &Presentation, w: &WeakStructure, xs: &[ArrowId]) -> Result<ArrowId> {
    mu_object_at(p, w, xs, 0)
}

fn mu_object_at(p: &Presentation, w: &WeakStructure, xs: &[ArrowId], depth: usize) -> Result<ArrowId> {
    match xs.len() {
        0 => Err(FcatError::Precondition("empty tuple has no object image".into())),
        1 => Ok(xs[0].clone()),
        _ if is_path(p, xs) => p.compose(&as_path(p, xs)?),
        _ => mu_cells_at(p, w, xs, depth + 1),
    }
}

fn nested(depth: usize) -> Result<()> {
    if depth > MAX_NESTING {
        Err(FcatError::BudgetExhausted {
            what: "horizontal composition nesting",
            limit: MAX_NESTING,
        })
    } else {
        Ok(())
    }
}

/// Identity of `J(mu(J^{-1} x_1, ..., J^{-1} x_n))`, the derived value of
/// `mu` on identity cells at `x_1, ..., x_n`.
fn identity_rule(p: &Presentation, w: &WeakStructure, xs: &[ObjectId], depth: usize) -> Result<ArrowId> {
    nested(depth)?;
    let pre = xs
        .iter()
        .map(|x| p.switchback_inv_checked(x))
        .collect::<Result<Vec<_>>>()?;
    let img = mu_object_at(p, w, &pre, depth)?;
    p.identity_checked(&p.switchback_checked(&img)?)
}

/// Binary horizontal composite: the table entry, or for two identities the
/// identity of the composite object.
pub fn hcomp(p: &Presentation, w: &WeakStructure, a: &ArrowId, b: &ArrowId) -> Result<ArrowId> {
    hcomp_at(p, w, a, b, 0)
}

fn hcomp_at(p: &Presentation, w: &WeakStructure, a: &ArrowId, b: &ArrowId, depth: usize) -> Result<ArrowId> {
    if let Some(out) = w.hcomp.get(&(a.clone(), b.clone())) {
        return Ok(out.clone());
    }
    if is_identity(p, a) && is_identity(p, b) {
        let xs = [p.dom(a).unwrap().clone(), p.dom(b).unwrap().clone()];
        return identity_rule(p, w, &xs, depth);
    }
    Err(FcatError::MissingHcomp {
        left: a.clone(),
        right: b.clone(),
    })
}

/// Arrow map of `mu_n` for `n >= 1`.
pub fn mu_apply(p: &Presentation, w: &WeakStructure, cells: &[ArrowId]) -> Result<ArrowId> {
    mu_cells_at(p, w, cells, 0)
}

/// `mu_0(1_A) = 1_{J(1_A)}`: the stored unit, or the derived one.
pub fn mu_unit(p: &Presentation, w: &WeakStructure, a: &ObjectId) -> Result<ArrowId> {
    match w.hunit.get(a) {
        Some(u) => Ok(u.clone()),
        None => derived_unit(p, a),
    }
}

fn derived_unit(p: &Presentation, a: &ObjectId) -> Result<ArrowId> {
    let i = p.identity_checked(a)?;
    p.identity_checked(&p.switchback_checked(&i)?)
}

/// `mu` of a possibly empty tuple; the empty tuple at `base` is `mu_0`.
pub fn mu_tuple(p: &Presentation, w: &WeakStructure, base: &ObjectId, cells: &[ArrowId]) -> Result<ArrowId> {
    if cells.is_empty() {
        mu_unit(p, w, base)
    } else {
        mu_apply(p, w, cells)
    }
}

fn mu_cells_at(p: &Presentation, w: &WeakStructure, cells: &[ArrowId], depth: usize) -> Result<ArrowId> {
    nested(depth)?;
    match cells.len() {
        0 => Err(FcatError::Precondition(
            "mu of an empty tuple needs a base object".into(),
        )),
        1 => Ok(cells[0].clone()),
        _ if cells.iter().all(|c| is_identity(p, c)) => {
            let xs: Vec<ObjectId> = cells.iter().map(|c| p.dom(c).unwrap().clone()).collect();
            identity_rule(p, w, &xs, depth)
        }
        _ => {
            let mut acc = cells[0].clone();
            for c in &cells[1..] {
                acc = hcomp_at(p, w, &acc, c, depth)?;
            }
            Ok(acc)
        }
    }
}

/// Bounds for [`validate_mu`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuBounds {
    pub max_arity: usize,
    /// Maximum number of cell tuples examined per arity.
    pub budget: usize,
}

impl Default for MuBounds {
    fn default() -> Self {
        Self {
            max_arity: 3,
            budget: 100_000,
        }
    }
}

/// J-preimages of the endpoints of a cell.
fn cell_ends(p: &Presentation, a: &ArrowId) -> Option<(ArrowId, ArrowId)> {
    let (d, c) = p.ends(a)?;
    Some((p.switchback_inv(d)?.clone(), p.switchback_inv(c)?.clone()))
}

/// Arrows of `C^[n]`: the tuples `mu_n` must be defined on, in identifier
/// order.
pub fn cell_tuples(p: &Presentation, n: usize, budget: usize) -> Result<Vec<Vec<ArrowId>>> {
    let ps = power_structure(p, n, budget)?;
    let all: BTreeSet<Vec<ArrowId>> = ps.homs.into_values().flatten().collect();
    Ok(all.into_iter().collect())
}

fn classify(r: &mut Report, id: &str, e: &FcatError, witness: serde_json::Value) {
    if e.is_frontier() {
        r.skip(id, Status::SkippedFrontier, witness);
    } else {
        let mut w = witness;
        w["error"] = json!(e.to_string());
        r.fail(id, w);
    }
}

/// Checks typing of the stored data, the unit and unary laws, agreement of
/// the object and arrow maps on tuples that are both paths and cells, and
/// strict preservation of vertical composition up to the given arity.
pub fn validate_mu(p: &Presentation, w: &WeakStructure, bounds: MuBounds) -> Result<Report> {
    let mut r = Report::new();

    let mut entries: Vec<_> = w.hcomp.iter().collect();
    entries.sort();
    for ((a, b), out) in entries {
        let wit = json!({ "left": a, "right": b, "out": out });
        let expected = (|| -> Result<(ObjectId, ObjectId)> {
            let (fa, ga) = cell_ends(p, a).ok_or_else(|| not_cell(a))?;
            let (fb, gb) = cell_ends(p, b).ok_or_else(|| not_cell(b))?;
            let d = p.switchback_checked(&mu_object(p, w, &[fa, fb])?)?;
            let c = p.switchback_checked(&mu_object(p, w, &[ga, gb])?)?;
            Ok((d, c))
        })();
        match expected {
            Ok((d, c)) if p.ends(out) == Some((&d, &c)) => r.pass("mu-hcomp-typing"),
            Ok((d, c)) => {
                let mut wit = wit;
                wit["expected"] = json!([d, c]);
                r.fail("mu-hcomp-typing", wit);
            }
            Err(e) => classify(&mut r, "mu-hcomp-typing", &e, wit),
        }
        if is_identity(p, a) && is_identity(p, b) {
            let xs = [p.dom(a).unwrap().clone(), p.dom(b).unwrap().clone()];
            match identity_rule(p, w, &xs, 0) {
                Ok(d) if &d == out => r.pass("mu-identity"),
                Ok(d) => r.fail(
                    "mu-identity",
                    json!({ "left": a, "right": b, "out": out, "expected": d }),
                ),
                Err(e) => classify(&mut r, "mu-identity", &e, json!({ "left": a, "right": b })),
            }
        }
    }

    let units: BTreeMap<&ObjectId, &ArrowId> = w.hunit.iter().collect();
    for a in p.objects_sorted() {
        let wit = json!({ "object": a });
        match (derived_unit(p, a), units.get(a)) {
            (Ok(d), Some(u)) if d == **u => r.pass("mu-unit"),
            (Ok(_), None) => r.pass("mu-unit"),
            (Ok(d), Some(u)) => r.fail("mu-unit", json!({ "object": a, "stored": u, "expected": d })),
            (Err(e), _) => classify(&mut r, "mu-unit", &e, wit),
        }
    }

    // unary law: mu_1 is the identity by construction
    for a in p.arrows_sorted().iter().filter(|a| p.is_cell(a)) {
        debug_assert_eq!(mu_apply(p, w, std::slice::from_ref(a)).ok().as_ref(), Some(a));
        r.pass("mu-unary");
    }

    for n in 2..=bounds.max_arity {
        for path in p.paths_of_length(n, bounds.budget)? {
            let wit = json!({ "path": path.to_string() });
            match mu_object(p, w, &path.arrows) {
                Ok(_) => r.pass("mu-object-map"),
                Err(e) => classify(&mut r, "mu-object-map", &e, wit),
            }
        }
        let tuples = cell_tuples(p, n, bounds.budget)?;
        let mut by_dom: BTreeMap<Vec<ObjectId>, Vec<&Vec<ArrowId>>> = BTreeMap::new();
        for t in &tuples {
            let doms: Vec<ObjectId> = t.iter().map(|c| p.dom(c).unwrap().clone()).collect();
            by_dom.entry(doms).or_default().push(t);
        }
        for t in &tuples {
            // a tuple that is also a path has two readings which must agree
            if is_path(p, t) {
                let wit = json!({ "tuple": t });
                let both = as_path(p, t)
                    .and_then(|q| p.compose(&q))
                    .and_then(|c| Ok((c, mu_apply(p, w, t)?)));
                match both {
                    Ok((c, m)) if c == m => r.pass("mu-switchback"),
                    Ok((c, m)) => r.fail("mu-switchback", json!({ "tuple": t, "as-path": c, "as-cells": m })),
                    Err(e) => classify(&mut r, "mu-switchback", &e, wit),
                }
            }
            let cods: Vec<ObjectId> = t.iter().map(|c| p.cod(c).unwrap().clone()).collect();
            for s in by_dom.get(&cods).into_iter().flatten() {
                let wit = json!({ "first": t, "second": s });
                let check = (|| -> Result<(ArrowId, ArrowId)> {
                    let vert = t
                        .iter()
                        .zip(s.iter())
                        .map(|(x, y)| p.compose2(x, y))
                        .collect::<Result<Vec<_>>>()?;
                    let lhs = mu_apply(p, w, &vert)?;
                    let rhs = p.compose2(&mu_apply(p, w, t)?, &mu_apply(p, w, s)?)?;
                    Ok((lhs, rhs))
                })();
                match check {
                    Ok((l, rr)) if l == rr => r.pass("mu-composition"),
                    Ok((l, rr)) => {
                        let mut wit = wit;
                        wit["mu-of-composite"] = json!(l);
                        wit["composite-of-mu"] = json!(rr);
                        r.fail("mu-composition", wit);
                    }
                    Err(e) => classify(&mut r, "mu-composition", &e, wit),
                }
            }
        }
    }
    Ok(r)
}

fn not_cell(a: &ArrowId) -> FcatError {
    FcatError::Precondition(format!("`{a}` is not a cell between switchback objects"))
}
