use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::equiv::cert::RationalCert;
use crate::error::{FcatError, Result};
use crate::format::{BinaryEntry, ThetaDefaultData, ThetaEntry, ThetaKeyData, ThetaRule, WeakData};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::presentation::Presentation;

/// Key of a coherence equivalence: a path and two cut indices
/// `0 <= a <= b <= n`. The block `f_{a+1}..f_b` is contracted to its
/// composite; an empty block (`a == b`) inserts the identity at `A_a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaKey {
    pub path: Path,
    pub a: usize,
    pub b: usize,
}

impl fmt::Display for ThetaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta[{}; {}..{}]", self.path, self.a, self.b)
    }
}

impl ThetaKey {
    pub fn new(path: Path, a: usize, b: usize) -> Self {
        Self { path, a, b }
    }

    pub fn is_valid(&self) -> bool {
        self.a <= self.b && self.b <= self.path.len()
    }

    pub fn to_data(&self) -> ThetaKeyData {
        ThetaKeyData {
            base: self.path.base.clone(),
            arrows: self.path.arrows.clone(),
            a: self.a,
            b: self.b,
        }
    }

    /// `<A_a, f_{a+1}, ..., f_b>`.
    pub fn block(&self, p: &Presentation) -> Result<Path> {
        let base = self.object_at(p, self.a)?;
        Ok(Path::new(base, self.path.arrows[self.a..self.b].iter().cloned()))
    }

    /// The object `A_i` of the path (`A_0` is the base).
    pub fn object_at(&self, p: &Presentation, i: usize) -> Result<ObjectId> {
        object_at(p, &self.path, i)
    }

    /// The contracted path of length `n - (b - a) + 1`.
    pub fn contracted(&self, p: &Presentation) -> Result<Path> {
        if !self.is_valid() {
            return Err(FcatError::Precondition(format!("invalid cut indices in {self}")));
        }
        let block = p.compose(&self.block(p)?)?;
        let mut arrows = self.path.arrows[..self.a].to_vec();
        arrows.push(block);
        arrows.extend_from_slice(&self.path.arrows[self.b..]);
        Ok(Path::new(self.path.base.clone(), arrows))
    }

    /// Expected endpoints `(J(f_1..f_n), J(contracted))` of the equivalence.
    pub fn endpoints(&self, p: &Presentation) -> Result<(ObjectId, ObjectId)> {
        let whole = p.compose(&self.path)?;
        let contracted = p.compose(&self.contracted(p)?)?;
        let j = |f: &ArrowId| {
            p.switchback(f)
                .cloned()
                .ok_or_else(|| FcatError::Precondition(format!("J undefined on `{f}`")))
        };
        Ok((j(&whole)?, j(&contracted)?))
    }
}

pub(crate) fn object_at(p: &Presentation, path: &Path, i: usize) -> Result<ObjectId> {
    if i == 0 {
        return Ok(path.base.clone());
    }
    p.cod(&path.arrows[i - 1])
        .cloned()
        .ok_or_else(|| FcatError::UnknownArrow(path.arrows[i - 1].clone()))
}

/// Horizontal composition data and coherence equivalences.
#[derive(Clone, Debug, Default)]
pub struct WeakStructure {
    pub hcomp: HashMap<(ArrowId, ArrowId), ArrowId>,
    pub hunit: BTreeMap<ObjectId, ArrowId>,
    pub theta: BTreeMap<ThetaKey, RationalCert>,
    pub theta_default: Option<ThetaRule>,
    pub theta_except: BTreeSet<ThetaKey>,
}

impl WeakStructure {
    pub fn from_data(w: &WeakData) -> Result<Self> {
        let mut hcomp = HashMap::new();
        for e in &w.hcomp {
            if hcomp.insert((e.left.clone(), e.right.clone()), e.out.clone()).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "hcomp entry",
                    id: format!("({},{})", e.left, e.right),
                });
            }
        }
        let mut theta = BTreeMap::new();
        for t in &w.theta {
            let key = ThetaKey::new(Path::new(t.base.clone(), t.arrows.iter().cloned()), t.a, t.b);
            if !key.is_valid() {
                return Err(FcatError::Precondition(format!("invalid cut indices in {key}")));
            }
            if theta.insert(key.clone(), t.cert.clone()).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "theta entry",
                    id: key.to_string(),
                });
            }
        }
        let (theta_default, theta_except) = match &w.theta_default {
            None => (None, BTreeSet::new()),
            Some(d) => (
                Some(d.rule),
                d.except.iter().map(Presentation::theta_key_from_data).collect(),
            ),
        };
        Ok(Self {
            hcomp,
            hunit: w.hunit.clone(),
            theta,
            theta_default,
            theta_except,
        })
    }

    pub fn to_data(&self) -> WeakData {
        let mut hcomp: Vec<BinaryEntry> = self
            .hcomp
            .iter()
            .map(|((l, r), o)| BinaryEntry {
                left: l.clone(),
                right: r.clone(),
                out: o.clone(),
            })
            .collect();
        hcomp.sort_by(|x, y| (&x.left, &x.right).cmp(&(&y.left, &y.right)));
        WeakData {
            hcomp,
            hunit: self.hunit.clone(),
            theta: self
                .theta
                .iter()
                .map(|(k, c)| ThetaEntry {
                    base: k.path.base.clone(),
                    arrows: k.path.arrows.clone(),
                    a: k.a,
                    b: k.b,
                    cert: c.clone(),
                })
                .collect(),
            theta_default: self.theta_default.map(|rule| ThetaDefaultData {
                rule,
                except: self.theta_except.iter().map(ThetaKey::to_data).collect(),
            }),
        }
    }
}
