//! Finite presentations of pre-folded categories and the composition engine.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{FcatError, Result};
use crate::format::{PresentationData, ThetaKeyData};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::weak::{ThetaKey, WeakStructure};

/// An immutable, indexed presentation.
///
/// Structural well-formedness (unique identifiers, no dangling references) is
/// enforced on construction. Everything else, such as injectivity of the
/// switchback or typing of composition entries, is reported by
/// [`crate::validate::validate_presentation`].
#[derive(Clone, Debug)]
pub struct Presentation {
    data: PresentationData,
    object_set: HashSet<ObjectId>,
    objects_sorted: Vec<ObjectId>,
    arrows: HashMap<ArrowId, (ObjectId, ObjectId)>,
    arrows_sorted: Vec<ArrowId>,
    out_arrows: HashMap<ObjectId, Vec<ArrowId>>,
    in_arrows: HashMap<ObjectId, Vec<ArrowId>>,
    identity: HashMap<ObjectId, ArrowId>,
    bcomp: HashMap<(ArrowId, ArrowId), ArrowId>,
    overrides: HashMap<Path, ArrowId>,
    switchback: HashMap<ArrowId, ObjectId>,
    switchback_inv: HashMap<ObjectId, ArrowId>,
    frontier: BTreeSet<ObjectId>,
    weak: Option<WeakStructure>,
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    Presentation::from_data(PresentationData::from_json_str(text)?)
}

fn dangling(kind: &'static str, id: impl ToString, context: impl Into<String>) -> FcatError {
    FcatError::DanglingRef {
        kind,
        id: id.to_string(),
        context: context.into(),
    }
}

impl Presentation {
    pub fn from_data(data: PresentationData) -> Result<Self> {
        let mut object_set = HashSet::new();
        for o in &data.objects {
            if !object_set.insert(o.clone()) {
                return Err(FcatError::DuplicateId {
                    kind: "object",
                    id: o.to_string(),
                });
            }
        }
        let mut arrows = HashMap::new();
        let mut out_arrows: HashMap<ObjectId, Vec<ArrowId>> = HashMap::new();
        let mut in_arrows: HashMap<ObjectId, Vec<ArrowId>> = HashMap::new();
        for a in &data.arrows {
            if object_set.contains(&ObjectId::new(a.id.as_str())) {
                return Err(FcatError::DuplicateId {
                    kind: "object/arrow",
                    id: a.id.to_string(),
                });
            }
            for end in [&a.dom, &a.cod] {
                if !object_set.contains(end) {
                    return Err(dangling("object", end, format!("arrow `{}`", a.id)));
                }
            }
            if arrows.insert(a.id.clone(), (a.dom.clone(), a.cod.clone())).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "arrow",
                    id: a.id.to_string(),
                });
            }
            out_arrows.entry(a.dom.clone()).or_default().push(a.id.clone());
            in_arrows.entry(a.cod.clone()).or_default().push(a.id.clone());
        }
        for v in out_arrows.values_mut().chain(in_arrows.values_mut()) {
            v.sort();
        }
        let has_arrow = |f: &ArrowId, ctx: &str| -> Result<()> {
            if arrows.contains_key(f) {
                Ok(())
            } else {
                Err(dangling("arrow", f, ctx))
            }
        };
        let has_object = |o: &ObjectId, ctx: &str| -> Result<()> {
            if object_set.contains(o) {
                Ok(())
            } else {
                Err(dangling("object", o, ctx))
            }
        };

        let mut identity = HashMap::new();
        for (o, f) in &data.identity {
            has_object(o, "identity")?;
            has_arrow(f, "identity")?;
            identity.insert(o.clone(), f.clone());
        }
        let mut bcomp = HashMap::new();
        for e in &data.bcomp {
            for f in [&e.left, &e.right, &e.out] {
                has_arrow(f, "bcomp")?;
            }
            if bcomp.insert((e.left.clone(), e.right.clone()), e.out.clone()).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "bcomp entry",
                    id: format!("({},{})", e.left, e.right),
                });
            }
        }
        let mut overrides = HashMap::new();
        for e in &data.overrides {
            has_object(&e.base, "overrides")?;
            for f in e.arrows.iter().chain([&e.out]) {
                has_arrow(f, "overrides")?;
            }
            let path = Path::new(e.base.clone(), e.arrows.iter().cloned());
            if overrides.insert(path.clone(), e.out.clone()).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "override",
                    id: path.to_string(),
                });
            }
        }
        let mut switchback = HashMap::new();
        for (f, o) in &data.switchback {
            has_arrow(f, "J")?;
            has_object(o, "J")?;
            switchback.insert(f.clone(), o.clone());
        }
        // first preimage in identifier order; non-injectivity is a validator finding
        let mut switchback_inv: HashMap<ObjectId, ArrowId> = HashMap::new();
        for (f, o) in &data.switchback {
            switchback_inv.entry(o.clone()).or_insert_with(|| f.clone());
        }
        let mut frontier = BTreeSet::new();
        for o in &data.frontier {
            has_object(o, "frontier")?;
            frontier.insert(o.clone());
        }
        let weak = match &data.weak {
            None => None,
            Some(w) => {
                for e in &w.hcomp {
                    for f in [&e.left, &e.right, &e.out] {
                        has_arrow(f, "weak.hcomp")?;
                    }
                }
                for (o, f) in &w.hunit {
                    has_object(o, "weak.hunit")?;
                    has_arrow(f, "weak.hunit")?;
                }
                let check_key = |k: &ThetaKeyData, ctx: &str| -> Result<()> {
                    has_object(&k.base, ctx)?;
                    for f in &k.arrows {
                        has_arrow(f, ctx)?;
                    }
                    Ok(())
                };
                for t in &w.theta {
                    check_key(
                        &ThetaKeyData {
                            base: t.base.clone(),
                            arrows: t.arrows.clone(),
                            a: t.a,
                            b: t.b,
                        },
                        "weak.theta",
                    )?;
                }
                if let Some(d) = &w.theta_default {
                    for k in &d.except {
                        check_key(k, "weak.theta_default")?;
                    }
                }
                Some(WeakStructure::from_data(w)?)
            }
        };

        let mut objects_sorted: Vec<ObjectId> = data.objects.clone();
        objects_sorted.sort();
        let mut arrows_sorted: Vec<ArrowId> = data.arrows.iter().map(|a| a.id.clone()).collect();
        arrows_sorted.sort();

        Ok(Self {
            data,
            object_set,
            objects_sorted,
            arrows,
            arrows_sorted,
            out_arrows,
            in_arrows,
            identity,
            bcomp,
            overrides,
            switchback,
            switchback_inv,
            frontier,
            weak,
        })
    }

    pub fn data(&self) -> &PresentationData {
        &self.data
    }

    pub fn into_data(self) -> PresentationData {
        self.data
    }

    pub fn to_canonical_json(&self) -> String {
        self.data.to_canonical_json()
    }

    /// Objects in declaration order.
    pub fn objects(&self) -> &[ObjectId] {
        &self.data.objects
    }

    /// Objects in identifier order.
    pub fn objects_sorted(&self) -> &[ObjectId] {
        &self.objects_sorted
    }

    /// Arrows in identifier order.
    pub fn arrows_sorted(&self) -> &[ArrowId] {
        &self.arrows_sorted
    }

    pub fn num_objects(&self) -> usize {
        self.data.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.data.arrows.len()
    }

    pub fn has_object(&self, o: &ObjectId) -> bool {
        self.object_set.contains(o)
    }

    pub fn has_arrow(&self, f: &ArrowId) -> bool {
        self.arrows.contains_key(f)
    }

    pub fn ends(&self, f: &ArrowId) -> Option<(&ObjectId, &ObjectId)> {
        self.arrows.get(f).map(|(d, c)| (d, c))
    }

    pub fn dom(&self, f: &ArrowId) -> Option<&ObjectId> {
        self.arrows.get(f).map(|(d, _)| d)
    }

    pub fn cod(&self, f: &ArrowId) -> Option<&ObjectId> {
        self.arrows.get(f).map(|(_, c)| c)
    }

    pub fn out_arrows(&self, o: &ObjectId) -> &[ArrowId] {
        self.out_arrows.get(o).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn in_arrows(&self, o: &ObjectId) -> &[ArrowId] {
        self.in_arrows.get(o).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Arrows `a -> b` in identifier order.
    pub fn hom(&self, a: &ObjectId, b: &ObjectId) -> Vec<ArrowId> {
        self.out_arrows(a)
            .iter()
            .filter(|f| self.cod(f) == Some(b))
            .cloned()
            .collect()
    }

    pub fn identity(&self, o: &ObjectId) -> Option<&ArrowId> {
        self.identity.get(o)
    }

    pub fn bcomp(&self, f: &ArrowId, g: &ArrowId) -> Option<&ArrowId> {
        self.bcomp.get(&(f.clone(), g.clone()))
    }

    pub fn bcomp_table(&self) -> &HashMap<(ArrowId, ArrowId), ArrowId> {
        &self.bcomp
    }

    pub fn overrides(&self) -> &HashMap<Path, ArrowId> {
        &self.overrides
    }

    /// `J(f)`.
    pub fn switchback(&self, f: &ArrowId) -> Option<&ObjectId> {
        self.switchback.get(f)
    }

    /// The arrow `f` with `J(f) = o`, if `o` lies in the range of `J`.
    pub fn switchback_inv(&self, o: &ObjectId) -> Option<&ArrowId> {
        self.switchback_inv.get(o)
    }

    pub fn frontier(&self) -> &BTreeSet<ObjectId> {
        &self.frontier
    }

    pub fn is_frontier(&self, o: &ObjectId) -> bool {
        self.frontier.contains(o)
    }

    pub fn weak(&self) -> Option<&WeakStructure> {
        self.weak.as_ref()
    }

    /// Checks that `path` is a well-typed path; returns its endpoint.
    pub fn path_target(&self, path: &Path) -> Result<ObjectId> {
        if !self.has_object(&path.base) {
            return Err(FcatError::UnknownObject(path.base.clone()));
        }
        let mut at = path.base.clone();
        for (i, f) in path.arrows.iter().enumerate() {
            let (d, c) = self.ends(f).ok_or_else(|| FcatError::UnknownArrow(f.clone()))?;
            if *d != at {
                return Err(FcatError::IllTypedPath {
                    path: path.clone(),
                    detail: format!("arrow {} (`{f}`) starts at `{d}`, expected `{at}`", i + 1),
                });
            }
            at = c.clone();
        }
        Ok(at)
    }

    /// Composite of a path: identity for length 0, the arrow itself for
    /// length 1, otherwise an override for the whole prefix if present, else
    /// the binary composite of the shorter prefix with the last arrow.
    pub fn compose(&self, path: &Path) -> Result<ArrowId> {
        self.path_target(path)?;
        match path.arrows.len() {
            0 => self.identity_or_err(&path.base, path),
            1 => Ok(path.arrows[0].clone()),
            n => {
                let mut acc = path.arrows[0].clone();
                for k in 2..=n {
                    let over = if self.overrides.is_empty() {
                        None
                    } else {
                        self.overrides
                            .get(&Path::new(path.base.clone(), path.arrows[..k].iter().cloned()))
                    };
                    acc = match over {
                        Some(o) => o.clone(),
                        None => self.binary_or_err(&acc, &path.arrows[k - 1], path)?,
                    };
                }
                Ok(acc)
            }
        }
    }

    /// Composite of two arrows, as `compose(<dom f, f, g>)`.
    pub fn compose2(&self, f: &ArrowId, g: &ArrowId) -> Result<ArrowId> {
        let base = self.dom(f).ok_or_else(|| FcatError::UnknownArrow(f.clone()))?.clone();
        self.compose(&Path::new(base, [f.clone(), g.clone()]))
    }

    fn identity_or_err(&self, o: &ObjectId, path: &Path) -> Result<ArrowId> {
        match self.identity.get(o) {
            Some(f) => Ok(f.clone()),
            None if self.is_frontier(o) => Err(FcatError::FrontierIncomplete {
                path: path.clone(),
                detail: format!("identity of frontier object `{o}`"),
            }),
            None => Err(FcatError::Precondition(format!("no identity for object `{o}`"))),
        }
    }

    fn binary_or_err(&self, f: &ArrowId, g: &ArrowId, path: &Path) -> Result<ArrowId> {
        if let Some(h) = self.bcomp(f, g) {
            return Ok(h.clone());
        }
        let (d, c) = self.ends(f).ok_or_else(|| FcatError::UnknownArrow(f.clone()))?;
        let (d2, c2) = self.ends(g).ok_or_else(|| FcatError::UnknownArrow(g.clone()))?;
        if c != d2 {
            return Err(FcatError::IllTypedPath {
                path: path.clone(),
                detail: format!("intermediate composite `{f}` ends at `{c}`, `{g}` starts at `{d2}`"),
            });
        }
        if [d, c, c2].into_iter().any(|o| self.is_frontier(o)) {
            Err(FcatError::FrontierIncomplete {
                path: path.clone(),
                detail: format!("binary composite ({f},{g})"),
            })
        } else {
            Err(FcatError::Precondition(format!("no binary composite for ({f},{g})")))
        }
    }

    /// Identity of `o`; a missing identity at a frontier object is a
    /// frontier error.
    pub fn identity_checked(&self, o: &ObjectId) -> Result<ArrowId> {
        self.identity_or_err(o, &Path::empty(o.clone()))
    }

    pub fn switchback_checked(&self, f: &ArrowId) -> Result<ObjectId> {
        match self.switchback(f) {
            Some(o) => Ok(o.clone()),
            None if !self.has_arrow(f) => Err(FcatError::UnknownArrow(f.clone())),
            None => Err(FcatError::Precondition(format!("J undefined on `{f}`"))),
        }
    }

    /// `J^{-1}(o)`; objects outside the range of `J` are a precondition error.
    pub fn switchback_inv_checked(&self, o: &ObjectId) -> Result<ArrowId> {
        self.switchback_inv(o).cloned().ok_or_else(|| {
            if self.is_frontier(o) {
                FcatError::FrontierIncomplete {
                    path: Path::empty(o.clone()),
                    detail: format!("`{o}` has no switchback preimage in the window"),
                }
            } else {
                FcatError::Precondition(format!("`{o}` is not in the range of J"))
            }
        })
    }

    /// `J(compose(path))`.
    pub fn switchback_of(&self, path: &Path) -> Result<ObjectId> {
        self.switchback_checked(&self.compose(path)?)
    }

    /// True if `f` has both endpoints in the range of `J`, i.e. it is an
    /// arrow of the arrow category.
    pub fn is_cell(&self, f: &ArrowId) -> bool {
        self.ends(f)
            .is_some_and(|(d, c)| self.switchback_inv.contains_key(d) && self.switchback_inv.contains_key(c))
    }

    /// All paths of exactly `len` arrows, ordered by base object then arrow
    /// identifiers. Fails once more than `budget` paths would be produced.
    pub fn paths_of_length(&self, len: usize, budget: usize) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        for base in &self.objects_sorted {
            let mut stack = vec![(Path::empty(base.clone()), base.clone())];
            while let Some((p, at)) = stack.pop() {
                if p.len() == len {
                    out.push(p);
                    if out.len() > budget {
                        return Err(FcatError::BudgetExhausted {
                            what: "path enumeration",
                            limit: budget,
                        });
                    }
                    continue;
                }
                for f in self.out_arrows(&at).iter().rev() {
                    let mut q = p.clone();
                    q.arrows.push(f.clone());
                    stack.push((q, self.cod(f).expect("indexed").clone()));
                }
            }
        }
        Ok(out)
    }

    /// `J(identity(o))`, the next object of the identity tower.
    pub fn tower_successor(&self, o: &ObjectId) -> Option<&ObjectId> {
        self.identity(o).and_then(|i| self.switchback(i))
    }

    /// True when any of the given objects is a frontier object.
    pub fn touches_frontier<'a>(&self, objs: impl IntoIterator<Item = &'a ObjectId>) -> bool {
        objs.into_iter().any(|o| self.is_frontier(o))
    }

    pub(crate) fn theta_key_from_data(k: &ThetaKeyData) -> ThetaKey {
        ThetaKey {
            path: Path::new(k.base.clone(), k.arrows.iter().cloned()),
            a: k.a,
            b: k.b,
        }
    }
}

/// Counts arrows whose switchback lands on each object (used for the
/// injectivity check and for mutation tests).
pub fn switchback_fibres(p: &Presentation) -> BTreeMap<ObjectId, Vec<ArrowId>> {
    let mut out: BTreeMap<ObjectId, Vec<ArrowId>> = BTreeMap::new();
    for (f, o) in &p.data.switchback {
        out.entry(o.clone()).or_default().push(f.clone());
    }
    out
}
