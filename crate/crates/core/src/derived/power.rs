//! The power structures `C^[n]`: the smallest full, switchback-closed
//! substructure of the `n`-fold product of the arrow category containing
//! every composable path of length `n`. `C^[0]` is handled separately by
//! [`point_structure`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::derived::arrow::{arrow_category, as_object, ArrowCategory, EXPORT_ARROW_PREFIX};
use crate::derived::globular::{boundary_unchecked, Side};
use crate::error::{FcatError, Result};
use crate::format::{ArrowDecl, BinaryEntry, PresentationData};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::oracle::Oracle;
use crate::presentation::Presentation;
use crate::report::Report;

/// An `n`-tuple of arrows of `C`, read as an object or an arrow of the
/// product of arrow categories.
pub type Tuple = Vec<ArrowId>;

/// `(x1,...,xn)`.
pub fn tuple_token<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let mut s = String::from("(");
    for (i, p) in parts.into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(p);
    }
    s.push(')');
    s
}

/// Splits a tuple token at top-level commas. Components must be balanced
/// with respect to `()`, `<>` and `[]`.
pub fn parse_tuple(token: &str) -> Option<Vec<String>> {
    let inner = token.strip_prefix('(')?.strip_suffix(')')?;
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' | '<' | '[' => depth += 1,
            ')' | '>' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
        cur.push(ch);
    }
    if depth != 0 {
        return None;
    }
    parts.push(cur);
    Some(parts)
}

fn tok(t: &[ArrowId]) -> String {
    tuple_token(t.iter().map(ArrowId::as_str))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerStructure {
    pub n: usize,
    pub objects: BTreeSet<Tuple>,
    pub homs: BTreeMap<(Tuple, Tuple), BTreeSet<Tuple>>,
}

/// Componentwise hom in the product: empty if some component has none.
fn product_hom(c: &ArrowCategory<'_>, x: &[ArrowId], y: &[ArrowId]) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for (a, b) in x.iter().zip(y) {
        let h = c.hom(&as_object(a), &as_object(b), 0);
        if h.is_empty() {
            return Vec::new();
        }
        out = out
            .into_iter()
            .flat_map(|t| {
                h.iter().map(move |f| {
                    let mut u = t.clone();
                    u.push(f.clone());
                    u
                })
            })
            .collect();
    }
    out
}

/// Closure computation for `n >= 1`. `budget` bounds objects plus arrows.
pub fn power_structure(p: &Presentation, n: usize, budget: usize) -> Result<PowerStructure> {
    if n == 0 {
        return Err(FcatError::Precondition(
            "arity 0 is the point structure; use point_structure".into(),
        ));
    }
    let c = arrow_category(p);
    let over = || FcatError::BudgetExhausted {
        what: "power structure",
        limit: budget,
    };
    let mut objects: BTreeSet<Tuple> = BTreeSet::new();
    for path in p.paths_of_length(n, budget)? {
        objects.insert(path.arrows);
    }
    let mut homs: BTreeMap<(Tuple, Tuple), BTreeSet<Tuple>> = BTreeMap::new();
    let mut done: Vec<Tuple> = Vec::new();
    let mut pending: Vec<Tuple> = objects.iter().cloned().collect();
    let mut size = objects.len();
    while let Some(x) = pending.pop() {
        done.push(x.clone());
        let mut fresh = Vec::new();
        for y in &done {
            let pairs: &[(&Tuple, &Tuple)] = if *y == x { &[(&x, y)] } else { &[(&x, y), (y, &x)] };
            for (s, t) in pairs {
                let h = product_hom(&c, s, t);
                if h.is_empty() {
                    continue;
                }
                size += h.len();
                for a in &h {
                    if !objects.contains(a) {
                        fresh.push(a.clone());
                    }
                }
                homs.insert(((*s).clone(), (*t).clone()), h.into_iter().collect());
            }
        }
        for a in fresh {
            if objects.insert(a.clone()) {
                size += 1;
                pending.push(a);
            }
        }
        if size > budget {
            return Err(over());
        }
    }
    Ok(PowerStructure { n, objects, homs })
}

impl PowerStructure {
    pub fn contains_object(&self, t: &[ArrowId]) -> bool {
        self.objects.contains(t)
    }

    pub fn num_arrows(&self) -> usize {
        self.homs.values().map(BTreeSet::len).sum()
    }

    /// Finite export: tuple objects `(f,g)`, tuple arrows `@(a,b)`.
    pub fn to_data(&self, p: &Presentation) -> PresentationData {
        let pre = |t: &[ArrowId]| ArrowId::new(format!("{EXPORT_ARROW_PREFIX}{}", tok(t)));
        let objects: Vec<ObjectId> = self.objects.iter().map(|t| ObjectId::new(tok(t))).collect();
        let mut arrows = Vec::new();
        let mut switchback = BTreeMap::new();
        let mut out_of: BTreeMap<&Tuple, Vec<(&Tuple, &Tuple)>> = BTreeMap::new();
        for ((x, y), hs) in &self.homs {
            for a in hs {
                arrows.push(ArrowDecl {
                    id: pre(a),
                    dom: ObjectId::new(tok(x)),
                    cod: ObjectId::new(tok(y)),
                });
                switchback.insert(pre(a), ObjectId::new(tok(a)));
                out_of.entry(x).or_default().push((a, y));
            }
        }
        let mut identity = BTreeMap::new();
        let mut frontier = Vec::new();
        for x in &self.objects {
            let ids: Option<Tuple> = x
                .iter()
                .map(|f| p.switchback(f).and_then(|j| p.identity(j)).cloned())
                .collect();
            match ids {
                Some(i) if self.homs.get(&(x.clone(), x.clone())).is_some_and(|h| h.contains(&i)) => {
                    identity.insert(ObjectId::new(tok(x)), pre(&i));
                }
                _ => {}
            }
            if x.iter().any(|f| p.switchback(f).is_some_and(|j| p.is_frontier(j))) {
                frontier.push(ObjectId::new(tok(x)));
            }
        }
        let mut bcomp = Vec::new();
        for ((x, y), hs) in &self.homs {
            for a in hs {
                for (b, z) in out_of.get(y).into_iter().flatten() {
                    let comp: Option<Tuple> = a.iter().zip(b.iter()).map(|(f, g)| p.bcomp(f, g).cloned()).collect();
                    if let Some(h) = comp {
                        if self
                            .homs
                            .get(&(x.clone(), (*z).clone()))
                            .is_some_and(|s| s.contains(&h))
                        {
                            bcomp.push(BinaryEntry {
                                left: pre(a),
                                right: pre(b),
                                out: pre(&h),
                            });
                        }
                    }
                }
            }
        }
        PresentationData {
            objects,
            arrows,
            identity,
            bcomp,
            overrides: Vec::new(),
            switchback,
            frontier,
            weak: None,
        }
    }
}

/// Tuples `(a_1, ..., a_n)` of arrows such that for some `k >= 1`,
/// `cod^k(a_i) = dom^k(a_{i+1})` for all `i`.
pub fn deep_composable_tuples(p: &Presentation, n: usize, max_k: usize, budget: usize) -> Result<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    for k in 1..=max_k {
        let bounds: Vec<(&ArrowId, Option<ObjectId>, Option<ObjectId>)> = p
            .arrows_sorted()
            .iter()
            .map(|a| {
                (
                    a,
                    boundary_unchecked(p, a, k, Side::Dom),
                    boundary_unchecked(p, a, k, Side::Cod),
                )
            })
            .collect();
        if bounds.iter().all(|(_, d, c)| d.is_none() && c.is_none()) {
            break;
        }
        let mut starting: BTreeMap<&ObjectId, Vec<&ArrowId>> = BTreeMap::new();
        for (a, d, _) in &bounds {
            if let Some(d) = d {
                starting.entry(d).or_default().push(a);
            }
        }
        let cod_of: BTreeMap<&ArrowId, &ObjectId> = bounds
            .iter()
            .filter_map(|(a, _, c)| c.as_ref().map(|c| (*a, c)))
            .collect();
        let mut stack: Vec<Tuple> = if n == 0 {
            Vec::new()
        } else {
            bounds.iter().map(|(a, _, _)| vec![(*a).clone()]).collect()
        };
        while let Some(t) = stack.pop() {
            if t.len() == n {
                out.insert(t);
                if out.len() > budget {
                    return Err(FcatError::BudgetExhausted {
                        what: "deep composable tuples",
                        limit: budget,
                    });
                }
                continue;
            }
            let Some(c) = cod_of.get(t.last().unwrap()) else {
                continue;
            };
            for b in starting.get(c).into_iter().flatten() {
                let mut u = t.clone();
                u.push((*b).clone());
                stack.push(u);
            }
        }
    }
    Ok(out)
}

/// Reports every deep-composable tuple missing from `ps`.
pub fn check_inclusion(p: &Presentation, ps: &PowerStructure, budget: usize) -> Result<Report> {
    let mut r = Report::new();
    let max_k = p.num_objects() + 1;
    for t in deep_composable_tuples(p, ps.n, max_k, budget)? {
        if ps.contains_object(&t) {
            r.pass("power-inclusion");
        } else {
            r.fail("power-inclusion", json!({ "tuple": t }));
        }
    }
    Ok(r)
}

/// Which reading of `C^[0]` to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointMode {
    /// Objects, their identities and composites of identity paths.
    Plain,
    /// Additionally closed under the switchback. Every `J`-image is already
    /// an object, so the two modes agree on finite presentations; the mode
    /// is kept so views over partial carriers can tell them apart.
    #[default]
    JClosed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointStructure {
    pub mode: PointMode,
    pub objects: BTreeSet<ObjectId>,
    pub arrows: BTreeSet<ArrowId>,
}

/// `C^[0]`, generated by all objects.
pub fn point_structure(p: &Presentation, mode: PointMode) -> PointStructure {
    let mut objects: BTreeSet<ObjectId> = p.objects_sorted().iter().cloned().collect();
    let mut arrows = BTreeSet::new();
    let mut pending: Vec<ObjectId> = objects.iter().cloned().collect();
    while let Some(x) = pending.pop() {
        let Some(i) = p.identity(&x) else { continue };
        // composites of identity paths: 1, 1.1, (1.1).1, ... until they repeat
        let mut acc = i.clone();
        let mut path = Path::empty(x.clone());
        let mut new_arrows = vec![];
        loop {
            if !arrows.insert(acc.clone()) {
                break;
            }
            new_arrows.push(acc.clone());
            path.arrows.push(i.clone());
            if path.len() > p.num_arrows() + 1 {
                break;
            }
            match p.compose(&path) {
                Ok(next) => acc = next,
                Err(_) => break,
            }
        }
        if mode == PointMode::JClosed {
            for a in new_arrows {
                if let Some(j) = p.switchback(&a) {
                    if objects.insert(j.clone()) {
                        pending.push(j.clone());
                    }
                }
            }
        }
    }
    PointStructure { mode, objects, arrows }
}

/// The `n`-fold product of arrow categories, over tuple tokens. Used to
/// check paired certificates.
#[derive(Clone, Copy, Debug)]
pub struct ProductView<'a> {
    c: ArrowCategory<'a>,
    n: usize,
}

pub fn product_view(p: &Presentation, n: usize) -> ProductView<'_> {
    ProductView {
        c: arrow_category(p),
        n,
    }
}

impl ProductView<'_> {
    fn split(&self, token: &str) -> Option<Vec<String>> {
        parse_tuple(token).filter(|v| v.len() == self.n)
    }

    pub fn is_frontier(&self, o: &ObjectId) -> bool {
        self.split(o.as_str())
            .is_some_and(|v| v.iter().any(|x| self.c.is_frontier(&ObjectId::new(x))))
    }
}

impl Oracle for ProductView<'_> {
    fn has_object(&self, o: &ObjectId) -> bool {
        self.split(o.as_str())
            .is_some_and(|v| v.iter().all(|x| self.c.has_object(&ObjectId::new(x))))
    }

    fn ends(&self, a: &ArrowId) -> Option<(ObjectId, ObjectId)> {
        let v = self.split(a.as_str())?;
        let mut ds = Vec::new();
        let mut cs = Vec::new();
        for x in v {
            let (d, c) = self.c.ends(&ArrowId::new(x))?;
            ds.push(d);
            cs.push(c);
        }
        Some((
            ObjectId::new(tuple_token(ds.iter().map(ObjectId::as_str))),
            ObjectId::new(tuple_token(cs.iter().map(ObjectId::as_str))),
        ))
    }

    fn hom(&self, a: &ObjectId, b: &ObjectId, _generation: usize) -> Vec<ArrowId> {
        let (Some(x), Some(y)) = (self.split(a.as_str()), self.split(b.as_str())) else {
            return Vec::new();
        };
        let x: Tuple = x.into_iter().map(ArrowId::new).collect();
        let y: Tuple = y.into_iter().map(ArrowId::new).collect();
        let mut out: Vec<ArrowId> = product_hom(&self.c, &x, &y)
            .iter()
            .map(|t| ArrowId::new(tok(t)))
            .collect();
        out.sort();
        out
    }

    fn identity(&self, o: &ObjectId) -> Option<ArrowId> {
        let v = self.split(o.as_str())?;
        let ids: Option<Vec<ArrowId>> = v.iter().map(|x| self.c.identity(&ObjectId::new(x))).collect();
        Some(ArrowId::new(tok(&ids?)))
    }

    fn switchback(&self, a: &ArrowId) -> Option<ObjectId> {
        let v = self.split(a.as_str())?;
        v.iter()
            .all(|x| self.c.base().has_arrow(&ArrowId::new(x)))
            .then(|| ObjectId::new(a.as_str()))
    }

    fn switchback_inv(&self, o: &ObjectId) -> Option<ArrowId> {
        let v = self.split(o.as_str())?;
        v.iter()
            .all(|x| self.c.switchback_inv(&ObjectId::new(x)).is_some())
            .then(|| ArrowId::new(o.as_str()))
    }

    fn compose(&self, path: &Path) -> Result<ArrowId> {
        let bad = || FcatError::IllTypedPath {
            path: path.clone(),
            detail: format!("not a path of {}-tuples", self.n),
        };
        let base = self.split(path.base.as_str()).ok_or_else(bad)?;
        let arrows: Vec<Vec<String>> = path
            .arrows
            .iter()
            .map(|a| self.split(a.as_str()).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(self.n);
        for (i, b) in base.iter().enumerate() {
            let comp = Path::new(ObjectId::new(b), arrows.iter().map(|a| ArrowId::new(&a[i])));
            out.push(self.c.compose(&comp)?);
        }
        Ok(ArrowId::new(tok(&out)))
    }
}
