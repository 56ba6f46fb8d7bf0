//! Cell levels, discreteness and the coarse shape of a presentation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::derived::globular::is_globular;
use crate::ids::ObjectId;
use crate::presentation::Presentation;

/// `levels[A]` is the largest `n <= max_level` such that `A` is an `n`-cell.
/// Objects in `lower_bound_only` may have a higher level outside the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellLevelMap {
    pub max_level: usize,
    pub levels: BTreeMap<ObjectId, usize>,
    pub lower_bound_only: BTreeSet<ObjectId>,
}

impl CellLevelMap {
    pub fn level(&self, o: &ObjectId) -> Option<usize> {
        self.levels.get(o).copied()
    }

    pub fn is_cell(&self, o: &ObjectId, n: usize) -> bool {
        self.level(o).is_some_and(|l| l >= n)
    }
}

/// Least fixpoint from level 0 upward: `level(Jf) = min(level dom f,
/// level cod f) + 1`, capped at `max_level`.
pub fn cell_levels(p: &Presentation, max_level: usize) -> CellLevelMap {
    let objs = p.objects_sorted();
    let mut levels: BTreeMap<ObjectId, usize> = objs.iter().map(|o| (o.clone(), 0)).collect();
    let support = |o: &ObjectId| {
        let f = p.switchback_inv(o)?;
        let (d, c) = p.ends(f)?;
        Some((d.clone(), c.clone()))
    };
    loop {
        let mut changed = false;
        for o in objs {
            let Some((d, c)) = support(o) else { continue };
            let want = (levels[&d].min(levels[&c]) + 1).min(max_level);
            if want > levels[o] {
                levels.insert(o.clone(), want);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut lower_bound_only: BTreeSet<ObjectId> = objs
        .iter()
        .filter(|o| p.is_frontier(o) && p.switchback_inv(o).is_none())
        .cloned()
        .collect();
    loop {
        let before = lower_bound_only.len();
        for o in objs {
            if levels[o] == max_level || lower_bound_only.contains(o) {
                continue;
            }
            if let Some((d, c)) = support(o) {
                if lower_bound_only.contains(&d) || lower_bound_only.contains(&c) {
                    lower_bound_only.insert(o.clone());
                }
            }
        }
        if lower_bound_only.len() == before {
            break;
        }
    }
    CellLevelMap {
        max_level,
        levels,
        lower_bound_only,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriState {
    Yes,
    No,
    Frontier,
}

fn discrete_here(p: &Presentation, a: &ObjectId) -> TriState {
    let Some(id) = p.identity(a) else {
        return if p.is_frontier(a) {
            TriState::Frontier
        } else {
            TriState::No
        };
    };
    let only_identity = p.out_arrows(a).iter().chain(p.in_arrows(a)).all(|f| f == id);
    match (only_identity, p.is_frontier(a)) {
        (false, _) => TriState::No,
        (true, true) => TriState::Frontier,
        (true, false) => TriState::Yes,
    }
}

/// Discreteness of `a` and of the next `depth` objects of its identity tower.
pub fn discreteness(p: &Presentation, a: &ObjectId, depth: usize) -> TriState {
    let mut at = a.clone();
    let mut out = TriState::Yes;
    for k in 0..=depth {
        match discrete_here(p, &at) {
            TriState::No => return TriState::No,
            TriState::Frontier => out = TriState::Frontier,
            TriState::Yes => {}
        }
        if k == depth || out == TriState::Frontier {
            break;
        }
        match p.tower_successor(&at) {
            Some(next) => at = next.clone(),
            None => return TriState::Frontier,
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Category,
    BicategoryLike,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub shape: Shape,
    /// Some discreteness answer was cut by the frontier and counted as
    /// discrete.
    pub frontier_limited: bool,
}

/// Category if every `Jf` is discrete; bicategory-like if every 2-cell is;
/// general otherwise, and always for non-globular input.
pub fn classify_shape(p: &Presentation, depth: usize) -> Classification {
    if !is_globular(p) {
        return Classification {
            shape: Shape::General,
            frontier_limited: false,
        };
    }
    let mut limited = false;
    let all_discrete = |objs: &mut dyn Iterator<Item = &ObjectId>| {
        let mut ok = true;
        let mut lim = false;
        for o in objs {
            match discreteness(p, o, depth) {
                TriState::No => ok = false,
                TriState::Frontier => lim = true,
                TriState::Yes => {}
            }
        }
        (ok, lim)
    };
    let (cat, lim) = all_discrete(&mut p.arrows_sorted().iter().filter_map(|f| p.switchback(f)));
    if cat {
        return Classification {
            shape: Shape::Category,
            frontier_limited: lim,
        };
    }
    limited |= lim;
    let levels = cell_levels(p, 2);
    let (bicat, lim) = all_discrete(&mut p.objects_sorted().iter().filter(|o| levels.is_cell(o, 2)));
    limited |= lim;
    Classification {
        shape: if bicat { Shape::BicategoryLike } else { Shape::General },
        frontier_limited: limited,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::obj;

    #[test]
    fn levels_on_fix_iso() {
        let m = cell_levels(&fixtures::fix_iso(), 5);
        assert_eq!(m.level(&obj("X")), Some(0));
        assert_eq!(m.level(&obj("<u,0>")), Some(1));
        assert_eq!(m.level(&obj("<u,1>")), Some(2));
        assert_eq!(m.level(&obj("<u,2>")), Some(3));
    }

    #[test]
    fn fix_one_tower_is_self_supporting() {
        for max in [0, 1, 4, 9] {
            assert_eq!(cell_levels(&fixtures::fix_one(), max).level(&obj("A")), Some(max));
        }
    }

    #[test]
    fn discreteness_on_fix_iso() {
        let p = fixtures::fix_iso();
        assert_eq!(discreteness(&p, &obj("<u,0>"), 0), TriState::Yes);
        assert_eq!(discreteness(&p, &obj("X"), 0), TriState::No);
        assert_eq!(discreteness(&p, &obj("<u,0>"), 5), TriState::Frontier);
    }

    #[test]
    fn shapes() {
        assert_eq!(classify_shape(&fixtures::fix_iso(), 0).shape, Shape::Category);
        assert_eq!(classify_shape(&fixtures::fix_one(), 0).shape, Shape::Category);
        assert_eq!(classify_shape(&fixtures::fix_2cat(), 0).shape, Shape::BicategoryLike);
        assert_eq!(classify_shape(&fixtures::fix_par(), 0).shape, Shape::General);
    }
}
