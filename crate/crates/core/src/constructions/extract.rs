//! Reading a category back out of a category-shaped presentation.

use std::collections::{BTreeMap, BTreeSet};

use crate::constructions::category::CategoryPresentation;
use crate::derived::cells::{classify_shape, Shape};
use crate::error::{FcatError, Result};
use crate::format::{ArrowDecl, BinaryEntry};
use crate::ids::{ArrowId, ObjectId};
use crate::presentation::Presentation;

/// Objects of the underlying category: those outside the range of `J`, and
/// those whose `J`-preimage is an endomorphism of the object itself (the
/// self-supporting case `A = J(1_A)`).
pub fn base_objects(p: &Presentation) -> Vec<ObjectId> {
    p.objects_sorted()
        .iter()
        .filter(|o| match p.switchback_inv(o) {
            None => true,
            Some(f) => p.ends(f) == Some((o, o)),
        })
        .cloned()
        .collect()
}

pub fn extract_category(p: &Presentation) -> Result<CategoryPresentation> {
    let shape = classify_shape(p, 0).shape;
    if shape != Shape::Category {
        return Err(FcatError::Precondition(format!(
            "presentation is not category-shaped (classified {shape:?})"
        )));
    }
    let objects = base_objects(p);
    let set: BTreeSet<&ObjectId> = objects.iter().collect();
    let mut morphisms = Vec::new();
    for f in p.arrows_sorted() {
        let (d, c) = p.ends(f).expect("declared");
        if set.contains(d) && set.contains(c) {
            morphisms.push(ArrowDecl {
                id: f.clone(),
                dom: d.clone(),
                cod: c.clone(),
            });
        }
    }
    let mut identity = BTreeMap::new();
    for o in &objects {
        identity.insert(o.clone(), p.identity_checked(o)?);
    }
    let mut composition = Vec::new();
    for f in &morphisms {
        for g in &morphisms {
            if f.cod == g.dom {
                composition.push(BinaryEntry {
                    left: f.id.clone(),
                    right: g.id.clone(),
                    out: p.compose2(&f.id, &g.id)?,
                });
            }
        }
    }
    let out = CategoryPresentation {
        objects,
        morphisms,
        identity,
        composition,
    };
    out.validate()?;
    Ok(out)
}

/// True if the two (valid) categories are isomorphic. Backtracking search
/// over object bijections, then hom-set bijections.
pub fn isomorphic(a: &CategoryPresentation, b: &CategoryPresentation) -> bool {
    let (Ok(ca), Ok(cb)) = (a.validate(), b.validate()) else {
        return false;
    };
    if ca.objects().len() != cb.objects().len() || ca.morphisms().len() != cb.morphisms().len() {
        return false;
    }
    let oa: Vec<ObjectId> = ca.objects().to_vec();
    let ob: Vec<ObjectId> = cb.objects().to_vec();
    let sig = |c: &crate::constructions::category::FiniteCategory, o: &ObjectId, all: &[ObjectId]| {
        let mut s: Vec<(usize, usize)> = all.iter().map(|x| (c.hom(o, x).len(), c.hom(x, o).len())).collect();
        s.sort();
        (c.hom(o, o).len(), s)
    };
    let mut obj_map: Vec<Option<usize>> = vec![None; oa.len()];
    let mut used = vec![false; ob.len()];
    fn objects_rec(
        i: usize,
        oa: &[ObjectId],
        ob: &[ObjectId],
        obj_map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize) -> bool,
        done: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> bool {
        if i == oa.len() {
            return done(obj_map);
        }
        for j in 0..ob.len() {
            if used[j] || !ok(i, j) {
                continue;
            }
            used[j] = true;
            obj_map[i] = Some(j);
            if objects_rec(i + 1, oa, ob, obj_map, used, ok, done) {
                return true;
            }
            used[j] = false;
            obj_map[i] = None;
        }
        false
    }
    let ok = |i: usize, j: usize| sig(&ca, &oa[i], &oa) == sig(&cb, &ob[j], &ob);
    let mut done = |m: &[Option<usize>]| {
        let om: BTreeMap<&ObjectId, &ObjectId> =
            oa.iter().zip(m).map(|(x, j)| (x, &ob[j.expect("complete")])).collect();
        morphisms_match(&ca, &cb, &om)
    };
    objects_rec(0, &oa, &ob, &mut obj_map, &mut used, &ok, &mut done)
}

fn morphisms_match(
    ca: &crate::constructions::category::FiniteCategory,
    cb: &crate::constructions::category::FiniteCategory,
    om: &BTreeMap<&ObjectId, &ObjectId>,
) -> bool {
    let ms: Vec<ArrowId> = ca.morphisms().to_vec();
    let mut map: BTreeMap<ArrowId, ArrowId> = BTreeMap::new();
    let mut taken: BTreeSet<ArrowId> = BTreeSet::new();
    fn rec(
        i: usize,
        ms: &[ArrowId],
        ca: &crate::constructions::category::FiniteCategory,
        cb: &crate::constructions::category::FiniteCategory,
        om: &BTreeMap<&ObjectId, &ObjectId>,
        map: &mut BTreeMap<ArrowId, ArrowId>,
        taken: &mut BTreeSet<ArrowId>,
    ) -> bool {
        if i == ms.len() {
            return true;
        }
        let f = &ms[i];
        let (d, c) = ca.ends(f).expect("morphism");
        for g in cb.hom(om[d], om[c]) {
            if taken.contains(&g) {
                continue;
            }
            map.insert(f.clone(), g.clone());
            taken.insert(g.clone());
            let consistent = ms[..=i].iter().all(|x| {
                ms[..=i].iter().all(|y| match ca.compose(x, y) {
                    None => true,
                    Some(xy) => match map.get(xy) {
                        None => true,
                        Some(img) => cb.compose(&map[x], &map[y]) == Some(img),
                    },
                })
            }) && ms[..=i].iter().all(|x| {
                let (dx, _) = ca.ends(x).expect("morphism");
                let is_id = ca.identity(dx) == Some(x);
                !is_id || cb.identity(om[dx]) == Some(&map[x])
            });
            if consistent && rec(i + 1, ms, ca, cb, om, map, taken) {
                return true;
            }
            map.remove(f);
            taken.remove(&g);
        }
        false
    }
    rec(0, &ms, ca, cb, om, &mut map, &mut taken)
}
