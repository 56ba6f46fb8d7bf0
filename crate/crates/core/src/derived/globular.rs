//! Globularity and iterated boundaries.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId};
use crate::presentation::Presentation;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Dom,
    Cod,
}

/// Lists every cell `alpha: J F -> J G` with `F` and `G` not parallel.
pub fn check_globular(p: &Presentation) -> Report {
    let mut r = Report::new();
    for a in p.arrows_sorted() {
        let (d, c) = p.ends(a).expect("indexed");
        let (Some(f), Some(g)) = (p.switchback_inv(d), p.switchback_inv(c)) else {
            continue;
        };
        if p.ends(f) == p.ends(g) {
            r.pass("globular");
        } else {
            r.fail("globular", json!({ "cell": a, "from": f, "to": g }));
        }
    }
    r
}

pub fn is_globular(p: &Presentation) -> bool {
    !check_globular(p).has_failures()
}

/// `dom^k` or `cod^k` of `alpha`, with `dom^1 = dom` and
/// `dom^{k+1}(alpha) = dom(J^{-1}(dom^k(alpha)))`. Absent once an
/// intermediate object leaves the range of `J`.
pub fn iterated_boundary(p: &Presentation, alpha: &ArrowId, k: usize, side: Side) -> Result<Option<ObjectId>> {
    if !is_globular(p) {
        return Err(FcatError::Precondition("presentation is not globular".into()));
    }
    Ok(boundary_unchecked(p, alpha, k, side))
}

pub(crate) fn boundary_unchecked(p: &Presentation, alpha: &ArrowId, k: usize, side: Side) -> Option<ObjectId> {
    if k == 0 {
        return None;
    }
    let pick = |f: &ArrowId| match side {
        Side::Dom => p.dom(f).cloned(),
        Side::Cod => p.cod(f).cloned(),
    };
    let mut o = pick(alpha)?;
    for _ in 1..k {
        o = pick(p.switchback_inv(&o)?)?;
    }
    Some(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::{arr, obj};
    use crate::report::Status;

    #[test]
    fn fixtures_are_globular_except_par() {
        assert!(is_globular(&fixtures::fix_one()));
        assert!(is_globular(&fixtures::fix_iso()));
        let r = check_globular(&fixtures::fix_par());
        assert_eq!(r.status_of("globular"), Some(Status::Fail));
        assert_eq!(r.failures()[0].witness["cell"], "alpha");
    }

    #[test]
    fn boundaries_on_fix_iso() {
        let p = fixtures::fix_iso();
        let b = |a: &str, k| iterated_boundary(&p, &arr(a), k, Side::Dom).unwrap();
        assert_eq!(b("1<u,0>", 1), Some(obj("<u,0>")));
        assert_eq!(b("1<u,1>", 2), Some(obj("<u,0>")));
        assert_eq!(b("u", 2), None);
    }
}
