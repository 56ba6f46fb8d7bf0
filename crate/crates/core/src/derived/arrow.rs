//! The arrow category: objects are the arrows of `C`, and the arrows
//! `f -> g` are the arrows `J f -> J g` of `C`.

use std::collections::BTreeMap;

use crate::equiv::cert::RationalCert;
use crate::equiv::transform::push_cert_with;
use crate::error::{FcatError, Result};
use crate::format::{ArrowDecl, BinaryEntry, PresentationData};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::oracle::Oracle;
use crate::presentation::Presentation;

/// A view of the arrow category over a presentation.
#[derive(Clone, Copy, Debug)]
pub struct ArrowCategory<'a> {
    p: &'a Presentation,
}

pub fn arrow_category(p: &Presentation) -> ArrowCategory<'_> {
    ArrowCategory { p }
}

/// Objects of the arrow category carry the token of the arrow they stand for.
pub fn as_object(f: &ArrowId) -> ObjectId {
    ObjectId::new(f.as_str())
}

pub fn as_arrow(o: &ObjectId) -> ArrowId {
    ArrowId::new(o.as_str())
}

/// Exported arrows are prefixed to keep the two namespaces of the file format
/// disjoint.
pub const EXPORT_ARROW_PREFIX: &str = "@";

impl<'a> ArrowCategory<'a> {
    pub fn base(&self) -> &'a Presentation {
        self.p
    }

    fn jo(&self, o: &ObjectId) -> Option<&'a ObjectId> {
        self.p.switchback(&as_arrow(o))
    }

    /// An object is on the frontier when its switchback is.
    pub fn is_frontier(&self, o: &ObjectId) -> bool {
        self.jo(o).is_some_and(|j| self.p.is_frontier(j))
    }

    /// Finite export in the presentation file format.
    pub fn to_data(&self) -> PresentationData {
        let p = self.p;
        let pre = |f: &ArrowId| ArrowId::new(format!("{EXPORT_ARROW_PREFIX}{f}"));
        let objects: Vec<ObjectId> = p.arrows_sorted().iter().map(as_object).collect();
        let mut arrows = Vec::new();
        let mut switchback = BTreeMap::new();
        for a in p.arrows_sorted() {
            if let Some((d, c)) = Oracle::ends(self, a) {
                arrows.push(ArrowDecl {
                    id: pre(a),
                    dom: d,
                    cod: c,
                });
                switchback.insert(pre(a), as_object(a));
            }
        }
        let mut identity = BTreeMap::new();
        let mut frontier = Vec::new();
        for o in &objects {
            match Oracle::identity(self, o) {
                Some(i) if p.is_cell(&i) => {
                    identity.insert(o.clone(), pre(&i));
                }
                _ => {}
            }
            if self.is_frontier(o) {
                frontier.push(o.clone());
            }
        }
        let mut bcomp = Vec::new();
        let mut entries: Vec<_> = p.bcomp_table().iter().collect();
        entries.sort();
        for ((f, g), h) in entries {
            if p.is_cell(f) && p.is_cell(g) && p.is_cell(h) {
                bcomp.push(BinaryEntry {
                    left: pre(f),
                    right: pre(g),
                    out: pre(h),
                });
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

impl Oracle for ArrowCategory<'_> {
    fn has_object(&self, o: &ObjectId) -> bool {
        self.p.has_arrow(&as_arrow(o))
    }

    fn ends(&self, a: &ArrowId) -> Option<(ObjectId, ObjectId)> {
        let (d, c) = self.p.ends(a)?;
        Some((
            as_object(self.p.switchback_inv(d)?),
            as_object(self.p.switchback_inv(c)?),
        ))
    }

    fn hom(&self, a: &ObjectId, b: &ObjectId, _generation: usize) -> Vec<ArrowId> {
        match (self.jo(a), self.jo(b)) {
            (Some(x), Some(y)) => self.p.hom(x, y),
            _ => Vec::new(),
        }
    }

    fn identity(&self, o: &ObjectId) -> Option<ArrowId> {
        self.p.identity(self.jo(o)?).cloned()
    }

    fn switchback(&self, a: &ArrowId) -> Option<ObjectId> {
        self.p.has_arrow(a).then(|| as_object(a))
    }

    fn switchback_inv(&self, o: &ObjectId) -> Option<ArrowId> {
        let a = as_arrow(o);
        self.p.is_cell(&a).then_some(a)
    }

    fn compose(&self, path: &Path) -> Result<ArrowId> {
        let base = self
            .jo(&path.base)
            .ok_or_else(|| FcatError::UnknownObject(path.base.clone()))?;
        for a in &path.arrows {
            if !self.p.is_cell(a) {
                return Err(FcatError::IllTypedPath {
                    path: path.clone(),
                    detail: format!("`{a}` is not an arrow of the arrow category"),
                });
            }
        }
        self.p.compose(&Path::new(base.clone(), path.arrows.iter().cloned()))
    }
}

/// Reads a certificate between switchback objects as one in the arrow
/// category.
pub fn lift_cert(p: &Presentation, cert: &RationalCert) -> Result<RationalCert> {
    push_cert_with(
        cert,
        |o| Ok(as_object(&p.switchback_inv_checked(o)?)),
        |a| Ok(a.clone()),
    )
}

/// Inverse of [`lift_cert`].
pub fn lower_cert(p: &Presentation, cert: &RationalCert) -> Result<RationalCert> {
    push_cert_with(cert, |o| p.switchback_checked(&as_arrow(o)), |a| Ok(a.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::verify::verify_cert_in;
    use crate::equiv::{decide_equiv, EquivMode};
    use crate::fixtures;
    use crate::ids::{arr, obj};

    #[test]
    fn fix_one_arrow_category() {
        let p = fixtures::fix_one();
        let c = arrow_category(&p);
        assert!(c.has_object(&obj("1_A")));
        assert_eq!(c.hom(&obj("1_A"), &obj("1_A"), 0), vec![arr("1_A")]);
    }

    #[test]
    fn fix_iso_hom_at_u() {
        let p = fixtures::fix_iso();
        let c = arrow_category(&p);
        assert_eq!(c.hom(&obj("u"), &obj("u"), 0), vec![arr("1<u,0>")]);
    }

    #[test]
    fn export_is_a_presentation() {
        let p = fixtures::fix_iso();
        let d = arrow_category(&p).to_data();
        Presentation::from_data(d).unwrap();
    }

    #[test]
    fn lifted_certificates_verify_in_the_arrow_category() {
        let p = fixtures::fix_2cat();
        let rel = decide_equiv(&p, EquivMode::Optimistic);
        let c = rel.extract(&obj("<a,0>"), &obj("<a2,0>")).unwrap();
        let lifted = lift_cert(&p, &c).unwrap();
        let view = arrow_category(&p);
        let r = verify_cert_in(&view, &|o| view.is_frontier(o), &lifted);
        assert!(!r.has_failures(), "{:?}", r.failures());
        assert_eq!(lower_cert(&p, &lifted).unwrap(), c);
    }
}
