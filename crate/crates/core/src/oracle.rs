//! Behavioural views of pre-folded categories, possibly with infinite
//! carriers, and truncation of such views into finite presentations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{FcatError, Result};
use crate::format::{ArrowDecl, BinaryEntry, PresentationData, WeakData};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::presentation::Presentation;

/// Read-only queries against a pre-folded category. Answers must be
/// deterministic.
pub trait Oracle {
    fn has_object(&self, o: &ObjectId) -> bool;
    fn ends(&self, f: &ArrowId) -> Option<(ObjectId, ObjectId)>;
    /// Arrows `a -> b` of generation at most `generation`, in identifier
    /// order. Finite presentations ignore the generation bound.
    fn hom(&self, a: &ObjectId, b: &ObjectId, generation: usize) -> Vec<ArrowId>;
    fn identity(&self, o: &ObjectId) -> Option<ArrowId>;
    fn switchback(&self, f: &ArrowId) -> Option<ObjectId>;
    fn switchback_inv(&self, o: &ObjectId) -> Option<ArrowId>;
    fn compose(&self, path: &Path) -> Result<ArrowId>;
}

impl Oracle for Presentation {
    fn has_object(&self, o: &ObjectId) -> bool {
        Presentation::has_object(self, o)
    }

    fn ends(&self, f: &ArrowId) -> Option<(ObjectId, ObjectId)> {
        Presentation::ends(self, f).map(|(d, c)| (d.clone(), c.clone()))
    }

    fn hom(&self, a: &ObjectId, b: &ObjectId, _generation: usize) -> Vec<ArrowId> {
        Presentation::hom(self, a, b)
    }

    fn identity(&self, o: &ObjectId) -> Option<ArrowId> {
        Presentation::identity(self, o).cloned()
    }

    fn switchback(&self, f: &ArrowId) -> Option<ObjectId> {
        Presentation::switchback(self, f).cloned()
    }

    fn switchback_inv(&self, o: &ObjectId) -> Option<ArrowId> {
        Presentation::switchback_inv(self, o).cloned()
    }

    fn compose(&self, path: &Path) -> Result<ArrowId> {
        Presentation::compose(self, path)
    }
}

/// A finite window of a generative view.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Window {
    /// Objects of tower level at most the requested depth.
    pub objects: Vec<ObjectId>,
    /// Arrows of generation at most the path budget whose endpoints lie in
    /// `objects`.
    pub arrows: Vec<ArrowId>,
}

/// A view whose carrier is enumerated by tower level and generation.
pub trait Generative: Oracle {
    fn window(&self, tower_depth: usize, path_budget: usize) -> Window;

    /// Horizontal composition entries among the given arrows. The derived
    /// identity rule covers everything else.
    fn hcomp_entries(&self, _arrows: &HashSet<ArrowId>) -> Vec<BinaryEntry> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncateOptions {
    pub tower_depth: usize,
    pub path_budget: usize,
    /// Maximum number of objects plus arrows in the window.
    pub state_budget: usize,
    /// Attach a weak section (hcomp entries, horizontal units, reflexivity
    /// coherence rule).
    pub with_weak: bool,
}

impl TruncateOptions {
    pub fn depth(tower_depth: usize) -> Self {
        Self {
            tower_depth,
            path_budget: 1,
            state_budget: 100_000,
            with_weak: true,
        }
    }
}

/// Cuts a finite presentation out of a generative view.
///
/// Arrows whose switchback falls outside the window are dropped; objects
/// that lose their identity, or that start a composable pair whose composite
/// falls outside the window, are marked frontier.
pub fn truncate_oracle(o: &dyn Generative, opts: TruncateOptions) -> Result<Presentation> {
    let w = o.window(opts.tower_depth, opts.path_budget);
    if w.objects.len() + w.arrows.len() > opts.state_budget {
        return Err(FcatError::BudgetExhausted {
            what: "truncation state",
            limit: opts.state_budget,
        });
    }
    let objset: HashSet<ObjectId> = w.objects.iter().cloned().collect();
    let mut frontier: BTreeSet<ObjectId> = BTreeSet::new();
    let mut kept: Vec<ArrowDecl> = Vec::new();
    let mut switchback = BTreeMap::new();
    for f in &w.arrows {
        let (d, c) = o.ends(f).ok_or_else(|| FcatError::UnknownArrow(f.clone()))?;
        if !objset.contains(&d) || !objset.contains(&c) {
            continue;
        }
        match o.switchback(f) {
            Some(j) if objset.contains(&j) => {
                switchback.insert(f.clone(), j);
                kept.push(ArrowDecl {
                    id: f.clone(),
                    dom: d,
                    cod: c,
                });
            }
            _ => {
                frontier.insert(d);
                frontier.insert(c);
            }
        }
    }
    let kept_set: HashSet<ArrowId> = kept.iter().map(|a| a.id.clone()).collect();
    let mut identity = BTreeMap::new();
    for x in &w.objects {
        match o.identity(x) {
            Some(i) if kept_set.contains(&i) => {
                identity.insert(x.clone(), i);
            }
            _ => {
                frontier.insert(x.clone());
            }
        }
    }
    let mut out_of: BTreeMap<&ObjectId, Vec<&ArrowDecl>> = BTreeMap::new();
    for a in &kept {
        out_of.entry(&a.dom).or_default().push(a);
    }
    let mut bcomp = Vec::new();
    for f in &kept {
        for g in out_of.get(&f.cod).into_iter().flatten() {
            let path = Path::new(f.dom.clone(), [f.id.clone(), g.id.clone()]);
            match o.compose(&path) {
                Ok(h) if kept_set.contains(&h) => bcomp.push(BinaryEntry {
                    left: f.id.clone(),
                    right: g.id.clone(),
                    out: h,
                }),
                _ => {
                    frontier.insert(f.dom.clone());
                }
            }
        }
        if opts.state_budget < bcomp.len() {
            return Err(FcatError::BudgetExhausted {
                what: "truncation state",
                limit: opts.state_budget,
            });
        }
    }
    let weak = if opts.with_weak {
        let mut hunit = BTreeMap::new();
        for (x, i) in &identity {
            if let Some(next) = switchback.get(i) {
                if let Some(unit) = identity.get(next) {
                    hunit.insert(x.clone(), unit.clone());
                }
            }
        }
        let hcomp = o
            .hcomp_entries(&kept_set)
            .into_iter()
            .filter(|e| kept_set.contains(&e.left) && kept_set.contains(&e.right) && kept_set.contains(&e.out))
            .collect();
        Some(WeakData {
            hcomp,
            hunit,
            theta: Vec::new(),
            theta_default: Some(crate::format::ThetaDefaultData {
                rule: crate::format::ThetaRule::Reflexivity,
                except: Vec::new(),
            }),
        })
    } else {
        None
    };
    Presentation::from_data(PresentationData {
        objects: w.objects.clone(),
        arrows: kept,
        identity,
        bcomp,
        overrides: Vec::new(),
        switchback,
        frontier: frontier.into_iter().collect(),
        weak,
    })
}
