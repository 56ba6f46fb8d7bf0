//! Single-entry mutations of a presentation, for negative testing. The result
//! is not validated.

use serde::{Deserialize, Serialize};

use crate::equiv::cert::RationalCert;
use crate::error::{FcatError, Result};
use crate::format::{BinaryEntry, PresentationData, ThetaDefaultData, ThetaEntry, ThetaKeyData, ThetaRule, WeakData};
use crate::ids::{ArrowId, ObjectId};
use crate::presentation::Presentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Mutation {
    /// `J(arrow) := object`.
    RetargetJ { arrow: ArrowId, object: ObjectId },
    /// Replace (or add) the binary composite of `(left, right)`.
    RewireBcomp {
        left: ArrowId,
        right: ArrowId,
        out: ArrowId,
    },
    /// Remove the coherence equivalence for `key`: the explicit entry if
    /// present, otherwise exclude the key from the default rule.
    DropTheta { key: ThetaKeyData },
    /// Change the endpoints of an arrow.
    RetypeArrow {
        arrow: ArrowId,
        dom: ObjectId,
        cod: ObjectId,
    },
    /// Store `cert` as the coherence equivalence for `key`.
    SetTheta { key: ThetaKeyData, cert: RationalCert },
    /// Replace (or add) the horizontal composite of `(left, right)`.
    RewireHcomp {
        left: ArrowId,
        right: ArrowId,
        out: ArrowId,
    },
}

fn dangling(kind: &'static str, id: impl ToString, context: &str) -> FcatError {
    FcatError::DanglingRef {
        kind,
        id: id.to_string(),
        context: context.to_string(),
    }
}

fn set_entry(table: &mut Vec<BinaryEntry>, left: &ArrowId, right: &ArrowId, out: &ArrowId) {
    match table.iter_mut().find(|e| e.left == *left && e.right == *right) {
        Some(e) => e.out = out.clone(),
        None => table.push(BinaryEntry {
            left: left.clone(),
            right: right.clone(),
            out: out.clone(),
        }),
    }
}

fn weak_mut(d: &mut PresentationData) -> &mut WeakData {
    d.weak.get_or_insert_with(WeakData::default)
}

pub fn mutate_presentation(p: &Presentation, m: &Mutation) -> Result<Presentation> {
    let mut d = p.data().clone();
    let arrow = |a: &ArrowId, ctx: &str| {
        if p.has_arrow(a) {
            Ok(())
        } else {
            Err(dangling("arrow", a, ctx))
        }
    };
    let object = |o: &ObjectId, ctx: &str| {
        if p.has_object(o) {
            Ok(())
        } else {
            Err(dangling("object", o, ctx))
        }
    };
    match m {
        Mutation::RetargetJ { arrow: a, object: o } => {
            arrow(a, "retarget-J")?;
            object(o, "retarget-J")?;
            d.switchback.insert(a.clone(), o.clone());
        }
        Mutation::RewireBcomp { left, right, out } => {
            for a in [left, right, out] {
                arrow(a, "rewire-bcomp")?;
            }
            set_entry(&mut d.bcomp, left, right, out);
        }
        Mutation::RewireHcomp { left, right, out } => {
            for a in [left, right, out] {
                arrow(a, "rewire-hcomp")?;
            }
            set_entry(&mut weak_mut(&mut d).hcomp, left, right, out);
        }
        Mutation::RetypeArrow { arrow: a, dom, cod } => {
            arrow(a, "retype-arrow")?;
            object(dom, "retype-arrow")?;
            object(cod, "retype-arrow")?;
            let decl = d.arrows.iter_mut().find(|x| x.id == *a).expect("checked");
            decl.dom = dom.clone();
            decl.cod = cod.clone();
        }
        Mutation::DropTheta { key } => {
            let w = weak_mut(&mut d);
            let before = w.theta.len();
            w.theta
                .retain(|t| !(t.base == key.base && t.arrows == key.arrows && t.a == key.a && t.b == key.b));
            if w.theta.len() == before {
                match &mut w.theta_default {
                    Some(ThetaDefaultData {
                        rule: ThetaRule::Reflexivity,
                        except,
                    }) => {
                        if !except.contains(key) {
                            except.push(key.clone());
                        }
                    }
                    None => return Err(dangling("theta entry", format!("{key:?}"), "drop-theta")),
                }
            }
        }
        Mutation::SetTheta { key, cert } => {
            let w = weak_mut(&mut d);
            w.theta
                .retain(|t| !(t.base == key.base && t.arrows == key.arrows && t.a == key.a && t.b == key.b));
            w.theta.push(ThetaEntry {
                base: key.base.clone(),
                arrows: key.arrows.clone(),
                a: key.a,
                b: key.b,
                cert: cert.clone(),
            });
        }
    }
    Presentation::from_data(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::{arr, obj};
    use crate::validate::validate_presentation;

    #[test]
    fn retarget_breaks_injectivity() {
        let p = fixtures::fix_iso();
        let m = Mutation::RetargetJ {
            arrow: arr("u"),
            object: obj("<v,0>"),
        };
        let q = mutate_presentation(&p, &m).unwrap();
        assert!(validate_presentation(&q)
            .failures()
            .iter()
            .any(|f| f.check_id == "J-injective"));
    }

    #[test]
    fn dangling_mutation_is_an_error() {
        let m = Mutation::RetargetJ {
            arrow: arr("nope"),
            object: obj("X"),
        };
        assert!(mutate_presentation(&fixtures::fix_iso(), &m).is_err());
    }

    #[test]
    fn mutations_parse_from_json() {
        let m: Mutation = serde_json::from_str(r#"{"kind":"rewire-bcomp","left":"u","right":"v","out":"u"}"#).unwrap();
        assert!(matches!(m, Mutation::RewireBcomp { .. }));
    }
}
