//! Functors between pre-folded categories: quiver morphisms that strictly
//! preserve composition and the switchback.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::oracle::Oracle;
use crate::presentation::Presentation;
use crate::report::{Report, Status};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub object_map: BTreeMap<ObjectId, ObjectId>,
    pub arrow_map: BTreeMap<ArrowId, ArrowId>,
}

impl FunctorData {
    pub fn identity(p: &Presentation) -> Self {
        FunctorData {
            object_map: p.objects_sorted().iter().map(|o| (o.clone(), o.clone())).collect(),
            arrow_map: p.arrows_sorted().iter().map(|a| (a.clone(), a.clone())).collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(FcatError::from_json)
    }

    fn map_path(&self, path: &Path) -> Option<Path> {
        let base = self.object_map.get(&path.base)?.clone();
        let arrows: Option<Vec<ArrowId>> = path.arrows.iter().map(|a| self.arrow_map.get(a).cloned()).collect();
        Some(Path::new(base, arrows?))
    }
}

/// Checks `f` as a functor `source -> target` on the finite part of
/// `source`, with composition checked on paths of length up to `max_len`.
/// Length 0 is reported separately as identity preservation.
pub fn validate_functor(
    source: &Presentation,
    target: &dyn Oracle,
    f: &FunctorData,
    max_len: usize,
    budget: usize,
) -> Result<Report> {
    let mut r = Report::new();
    for o in source.objects_sorted() {
        match f.object_map.get(o) {
            Some(t) if target.has_object(t) => r.pass("functor-total"),
            Some(t) => r.fail("functor-total", json!({ "object": o, "image": t })),
            None if source.is_frontier(o) => r.skip("functor-total", Status::SkippedFrontier, json!({ "object": o })),
            None => r.fail("functor-total", json!({ "object": o })),
        }
    }
    for a in source.arrows_sorted() {
        let (d, c) = source.ends(a).expect("declared arrow");
        let Some(fa) = f.arrow_map.get(a) else {
            if source.touches_frontier([d, c]) {
                r.skip("functor-total", Status::SkippedFrontier, json!({ "arrow": a }));
            } else {
                r.fail("functor-total", json!({ "arrow": a }));
            }
            continue;
        };
        r.pass("functor-total");
        let want = (f.object_map.get(d), f.object_map.get(c));
        match (target.ends(fa), want) {
            (Some((td, tc)), (Some(wd), Some(wc))) if td == *wd && tc == *wc => r.pass("functor-typing"),
            (got, _) => r.fail(
                "functor-typing",
                json!({ "arrow": a, "image": fa, "image_ends": got.map(|(x, y)| [x, y]) }),
            ),
        }
        if let Some(j) = source.switchback(a) {
            match (f.object_map.get(j), target.switchback(fa)) {
                (Some(x), Some(y)) if *x == y => r.pass("functor-switchback"),
                (x, y) => r.fail(
                    "functor-switchback",
                    json!({ "arrow": a, "image_of_j": x, "j_of_image": y }),
                ),
            }
        }
    }
    for len in 0..=max_len {
        let id = if len == 0 {
            "functor-identity"
        } else {
            "functor-compose"
        };
        if len == 1 {
            continue;
        }
        for path in source.paths_of_length(len, budget)? {
            let here = match source.compose(&path) {
                Ok(h) => h,
                Err(e) if e.is_frontier() => {
                    r.skip(id, Status::SkippedFrontier, json!({ "path": path.to_string() }));
                    continue;
                }
                // an incomplete table is reported by validate_presentation
                Err(_) => continue,
            };
            let Some(image) = f.map_path(&path) else { continue };
            let lhs = f.arrow_map.get(&here);
            match (lhs, target.compose(&image)) {
                (Some(x), Ok(y)) if *x == y => r.pass(id),
                (_, Err(e)) if e.is_frontier() => {
                    r.skip(id, Status::SkippedFrontier, json!({ "path": path.to_string() }))
                }
                (x, y) => r.fail(
                    id,
                    json!({
                        "path": path.to_string(),
                        "image_of_composite": x,
                        "composite_of_image": y.ok(),
                    }),
                ),
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

    fn swap(s: &str) -> String {
        s.chars()
            .map(|c| match c {
                'X' => 'Y',
                'Y' => 'X',
                'u' => 'v',
                'v' => 'u',
                c => c,
            })
            .collect()
    }

    #[test]
    fn identity_functor_passes() {
        for p in [fixtures::fix_one(), fixtures::fix_iso()] {
            let r = validate_functor(&p, &p, &FunctorData::identity(&p), 3, 100_000).unwrap();
            assert!(!r.has_failures(), "{:?}", r.failures());
        }
    }

    #[test]
    fn iso_symmetry_passes() {
        let p = fixtures::fix_iso();
        let f = FunctorData {
            object_map: p
                .objects_sorted()
                .iter()
                .map(|o| (o.clone(), obj(&swap(o.as_str()))))
                .collect(),
            arrow_map: p
                .arrows_sorted()
                .iter()
                .map(|a| (a.clone(), arr(&swap(a.as_str()))))
                .collect(),
        };
        let r = validate_functor(&p, &p, &f, 3, 100_000).unwrap();
        assert!(!r.has_failures(), "{:?}", r.failures());
    }

    #[test]
    fn collapsing_u_breaks_composition() {
        let p = fixtures::fix_iso();
        let mut f = FunctorData::identity(&p);
        f.arrow_map.insert(arr("u"), arr("id_X"));
        let r = validate_functor(&p, &p, &f, 2, 100_000).unwrap();
        assert!(r.failures().iter().any(|x| x.check_id == "functor-compose"));
    }
}
