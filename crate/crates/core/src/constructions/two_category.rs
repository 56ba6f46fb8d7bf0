//! Strict 2-categories as weak folded categories: 1-cells switch back to
//! objects `<a,0>`, 2-cells are the arrows between those, and every 2-cell
//! carries an identity tower.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::constructions::category::{
    parse_tower_identity, parse_tower_object, reserved_token, tower_identity, tower_object, CategoryPresentation,
    FiniteCategory,
};
use crate::error::{FcatError, Result};
use crate::format::{unique_map, ArrowDecl, BinaryEntry};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::oracle::{Generative, Oracle, Window};

/// A 2-cell `id: dom => cod` between parallel 1-cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCellDecl {
    pub id: ArrowId,
    pub dom: ArrowId,
    pub cod: ArrowId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCategoryPresentation {
    pub objects: Vec<ObjectId>,
    pub one_cells: Vec<ArrowDecl>,
    #[serde(deserialize_with = "unique_map")]
    pub identity: BTreeMap<ObjectId, ArrowId>,
    pub composition: Vec<BinaryEntry>,
    pub two_cells: Vec<TwoCellDecl>,
    #[serde(deserialize_with = "unique_map")]
    pub identity2: BTreeMap<ArrowId, ArrowId>,
    pub vertical: Vec<BinaryEntry>,
    pub horizontal: Vec<BinaryEntry>,
}

fn law(msg: String) -> FcatError {
    FcatError::Precondition(format!("2-category law violated: {msg}"))
}

/// Index over a [`TwoCategoryPresentation`] whose strict laws hold.
#[derive(Clone, Debug)]
pub struct StrictTwoCategory {
    pres: TwoCategoryPresentation,
    one: FiniteCategory,
    ends2: HashMap<ArrowId, (ArrowId, ArrowId)>,
    vert: HashMap<(ArrowId, ArrowId), ArrowId>,
    horiz: HashMap<(ArrowId, ArrowId), ArrowId>,
    sorted2: Vec<ArrowId>,
}

impl TwoCategoryPresentation {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(FcatError::from_json)
    }

    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("2-category serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }

    /// The locally thin 2-category over `cat` in which `f => g` exists iff
    /// `f` and `g` lie in the same class. Classes must be a congruence.
    /// The 2-cell `f => g` is named `f~g`.
    pub fn thin(cat: &CategoryPresentation, classes: &[Vec<ArrowId>]) -> Result<Self> {
        let one = cat.validate()?;
        let mut class_of: BTreeMap<&ArrowId, usize> = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            for f in c {
                if class_of.insert(f, i).is_some() {
                    return Err(FcatError::Precondition(format!("`{f}` is in two classes")));
                }
            }
        }
        let same = |f: &ArrowId, g: &ArrowId| {
            f == g || matches!((class_of.get(f), class_of.get(g)), (Some(a), Some(b)) if a == b)
        };
        let cell = |f: &ArrowId, g: &ArrowId| ArrowId::new(format!("{f}~{g}"));
        let mut two_cells = Vec::new();
        let mut identity2 = BTreeMap::new();
        let mut vertical = Vec::new();
        let ms = one.morphisms();
        for f in ms {
            identity2.insert(f.clone(), cell(f, f));
            for g in ms {
                if !same(f, g) {
                    continue;
                }
                if one.ends(f) != one.ends(g) {
                    return Err(FcatError::Precondition(format!("`{f}` and `{g}` are not parallel")));
                }
                two_cells.push(TwoCellDecl {
                    id: cell(f, g),
                    dom: f.clone(),
                    cod: g.clone(),
                });
                for h in ms {
                    if same(g, h) {
                        vertical.push(BinaryEntry {
                            left: cell(f, g),
                            right: cell(g, h),
                            out: cell(f, h),
                        });
                    }
                }
            }
        }
        let mut horizontal = Vec::new();
        for a in &two_cells {
            for b in &two_cells {
                let (Some(fh), Some(gk)) = (one.compose(&a.dom, &b.dom), one.compose(&a.cod, &b.cod)) else {
                    continue;
                };
                if !same(fh, gk) {
                    return Err(FcatError::Precondition(format!(
                        "classes are not a congruence at ({},{})",
                        a.id, b.id
                    )));
                }
                horizontal.push(BinaryEntry {
                    left: a.id.clone(),
                    right: b.id.clone(),
                    out: cell(fh, gk),
                });
            }
        }
        Ok(TwoCategoryPresentation {
            objects: cat.objects.clone(),
            one_cells: cat.morphisms.clone(),
            identity: cat.identity.clone(),
            composition: cat.composition.clone(),
            two_cells,
            identity2,
            vertical,
            horizontal,
        })
    }

    pub fn validate(&self) -> Result<StrictTwoCategory> {
        let one = CategoryPresentation {
            objects: self.objects.clone(),
            morphisms: self.one_cells.clone(),
            identity: self.identity.clone(),
            composition: self.composition.clone(),
        }
        .validate()?;
        for t in self
            .objects
            .iter()
            .map(ObjectId::as_str)
            .chain(self.one_cells.iter().map(|a| a.id.as_str()))
            .chain(self.two_cells.iter().map(|a| a.id.as_str()))
        {
            if reserved_token(t) {
                return Err(FcatError::Precondition(format!(
                    "identifier `{t}` collides with the tower naming scheme"
                )));
            }
        }
        let mut ends2 = HashMap::new();
        for c in &self.two_cells {
            if one.ends(&c.id).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "cell",
                    id: c.id.to_string(),
                });
            }
            match (one.ends(&c.dom), one.ends(&c.cod)) {
                (Some(x), Some(y)) if x == y => {}
                _ => return Err(law(format!("2-cell `{}` is not between parallel 1-cells", c.id))),
            }
            if ends2.insert(c.id.clone(), (c.dom.clone(), c.cod.clone())).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "2-cell",
                    id: c.id.to_string(),
                });
            }
        }
        let table = |entries: &[BinaryEntry], what: &str| -> Result<HashMap<(ArrowId, ArrowId), ArrowId>> {
            let mut t = HashMap::new();
            for e in entries {
                for x in [&e.left, &e.right, &e.out] {
                    if !ends2.contains_key(x) {
                        return Err(FcatError::DanglingRef {
                            kind: "2-cell",
                            id: x.to_string(),
                            context: format!("{what} composition"),
                        });
                    }
                }
                if t.insert((e.left.clone(), e.right.clone()), e.out.clone()).is_some() {
                    return Err(law(format!("{what} composite of ({},{}) given twice", e.left, e.right)));
                }
            }
            Ok(t)
        };
        let vert = table(&self.vertical, "vertical")?;
        let horiz = table(&self.horizontal, "horizontal")?;
        let mut sorted2: Vec<ArrowId> = ends2.keys().cloned().collect();
        sorted2.sort();
        let t = StrictTwoCategory {
            pres: self.clone(),
            one,
            ends2,
            vert,
            horiz,
            sorted2,
        };
        t.check_laws()?;
        Ok(t)
    }
}

impl StrictTwoCategory {
    pub fn presentation(&self) -> &TwoCategoryPresentation {
        &self.pres
    }

    pub fn one_cells(&self) -> &FiniteCategory {
        &self.one
    }

    pub fn two_cells(&self) -> &[ArrowId] {
        &self.sorted2
    }

    pub fn ends2(&self, c: &ArrowId) -> Option<&(ArrowId, ArrowId)> {
        self.ends2.get(c)
    }

    pub fn identity2(&self, f: &ArrowId) -> Option<&ArrowId> {
        self.pres.identity2.get(f)
    }

    pub fn vertical(&self, a: &ArrowId, b: &ArrowId) -> Option<&ArrowId> {
        self.vert.get(&(a.clone(), b.clone()))
    }

    pub fn horizontal(&self, a: &ArrowId, b: &ArrowId) -> Option<&ArrowId> {
        self.horiz.get(&(a.clone(), b.clone()))
    }

    fn check_laws(&self) -> Result<()> {
        let cells = &self.sorted2;
        for f in self.one.morphisms() {
            match self.identity2(f).and_then(|i| self.ends2(i)) {
                Some((d, c)) if d == f && c == f => {}
                _ => return Err(law(format!("no identity 2-cell on `{f}`"))),
            }
        }
        for a in cells {
            let (f, g) = &self.ends2[a];
            if self.vertical(&self.pres.identity2[f], a) != Some(a)
                || self.vertical(a, &self.pres.identity2[g]) != Some(a)
            {
                return Err(law(format!("vertical unit law fails at `{a}`")));
            }
            for b in cells {
                let (h, k) = &self.ends2[b];
                match (g == h, self.vertical(a, b)) {
                    (true, Some(ab)) if self.ends2[ab] == (f.clone(), k.clone()) => {}
                    (false, None) => {}
                    _ => return Err(law(format!("vertical composite of ({a},{b}) is missing or mistyped"))),
                }
                let composable = self.one.ends(f).map(|e| &e.1) == self.one.ends(h).map(|e| &e.0);
                match (composable, self.horizontal(a, b)) {
                    (true, Some(ab)) => {
                        let want = (self.one.compose(f, h).cloned(), self.one.compose(g, k).cloned());
                        let got = &self.ends2[ab];
                        if want != (Some(got.0.clone()), Some(got.1.clone())) {
                            return Err(law(format!("horizontal composite of ({a},{b}) is mistyped")));
                        }
                    }
                    (false, None) => {}
                    _ => return Err(law(format!("horizontal composite of ({a},{b}) is missing or spurious"))),
                }
            }
        }
        for x in &self.pres.objects {
            let ix = &self.pres.identity2[&self.pres.identity[x]];
            for a in cells {
                let (f, _) = &self.ends2[a];
                let (d, c) = self.one.ends(f).expect("typed");
                if d == x && self.horizontal(ix, a) != Some(a) {
                    return Err(law(format!("left horizontal unit fails at `{a}`")));
                }
                if c == x && self.horizontal(a, ix) != Some(a) {
                    return Err(law(format!("right horizontal unit fails at `{a}`")));
                }
            }
        }
        for a in cells {
            for b in cells {
                let Some(ab) = self.horizontal(a, b) else { continue };
                for c in cells {
                    if let Some(bc) = self.horizontal(b, c) {
                        if self.horizontal(ab, c) != self.horizontal(a, bc) {
                            return Err(law(format!("horizontal associativity fails at ({a},{b},{c})")));
                        }
                    }
                    if let Some(av) = self.vertical(a, c) {
                        for d in cells {
                            let Some(bv) = self.vertical(b, d) else { continue };
                            let Some(cd) = self.horizontal(c, d) else { continue };
                            let lhs = self.horizontal(av, bv);
                            let rhs = self.vertical(ab, cd);
                            if lhs.is_none() || lhs != rhs {
                                return Err(law(format!("interchange fails at ({a},{b},{c},{d})")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A strict 2-category as a weak folded category: 2-cells become arrows
/// between the switchbacks of their boundary 1-cells.
#[derive(Clone, Debug)]
pub struct TwoCategoryOracle {
    t: StrictTwoCategory,
}

pub fn from_strict_2category(t: &TwoCategoryPresentation) -> Result<TwoCategoryOracle> {
    Ok(TwoCategoryOracle { t: t.validate()? })
}

enum Obj {
    Base,
    OneCell(ArrowId),
    Tower(ArrowId, usize),
}

impl TwoCategoryOracle {
    pub fn two_category(&self) -> &StrictTwoCategory {
        &self.t
    }

    fn classify(&self, o: &ObjectId) -> Option<Obj> {
        if self.t.pres.identity.contains_key(o) {
            return Some(Obj::Base);
        }
        let (x, n) = parse_tower_object(o.as_str())?;
        let x = ArrowId::new(x);
        if n == 0 && self.t.one.ends(&x).is_some() {
            return Some(Obj::OneCell(x));
        }
        self.t.ends2.contains_key(&x).then_some(Obj::Tower(x, n))
    }

    fn tower_identity_of(&self, f: &ArrowId) -> Option<(ArrowId, usize)> {
        let (c, n) = parse_tower_identity(f.as_str())?;
        let c = ArrowId::new(c);
        self.t.ends2.contains_key(&c).then_some((c, n))
    }
}

impl Oracle for TwoCategoryOracle {
    fn has_object(&self, o: &ObjectId) -> bool {
        self.classify(o).is_some()
    }

    fn ends(&self, f: &ArrowId) -> Option<(ObjectId, ObjectId)> {
        if let Some(e) = self.t.one.ends(f) {
            return Some(e.clone());
        }
        if let Some((a, b)) = self.t.ends2.get(f) {
            return Some((tower_object(a.as_str(), 0), tower_object(b.as_str(), 0)));
        }
        let (c, n) = self.tower_identity_of(f)?;
        let o = tower_object(c.as_str(), n);
        Some((o.clone(), o))
    }

    fn hom(&self, a: &ObjectId, b: &ObjectId, _generation: usize) -> Vec<ArrowId> {
        match (self.classify(a), self.classify(b)) {
            (Some(Obj::Base), Some(Obj::Base)) => self.t.one.hom(a, b),
            (Some(Obj::OneCell(f)), Some(Obj::OneCell(g))) => self
                .t
                .sorted2
                .iter()
                .filter(|c| self.t.ends2[*c] == (f.clone(), g.clone()))
                .cloned()
                .collect(),
            (Some(Obj::Tower(c, n)), Some(Obj::Tower(_, _))) if a == b => vec![tower_identity(c.as_str(), n)],
            _ => Vec::new(),
        }
    }

    fn identity(&self, o: &ObjectId) -> Option<ArrowId> {
        match self.classify(o)? {
            Obj::Base => self.t.one.identity(o).cloned(),
            Obj::OneCell(f) => self.t.identity2(&f).cloned(),
            Obj::Tower(c, n) => Some(tower_identity(c.as_str(), n)),
        }
    }

    fn switchback(&self, f: &ArrowId) -> Option<ObjectId> {
        if self.t.one.ends(f).is_some() || self.t.ends2.contains_key(f) {
            return Some(tower_object(f.as_str(), 0));
        }
        let (c, n) = self.tower_identity_of(f)?;
        Some(tower_object(c.as_str(), n + 1))
    }

    fn switchback_inv(&self, o: &ObjectId) -> Option<ArrowId> {
        match self.classify(o)? {
            Obj::Base => None,
            Obj::OneCell(f) => Some(f),
            Obj::Tower(c, 0) => Some(c),
            Obj::Tower(c, n) => Some(tower_identity(c.as_str(), n - 1)),
        }
    }

    fn compose(&self, path: &Path) -> Result<ArrowId> {
        let mut at = path.base.clone();
        let kind = self.classify(&at).ok_or_else(|| FcatError::UnknownObject(at.clone()))?;
        for f in &path.arrows {
            let (d, c) = self.ends(f).ok_or_else(|| FcatError::UnknownArrow(f.clone()))?;
            if d != at {
                return Err(FcatError::IllTypedPath {
                    path: path.clone(),
                    detail: format!("`{f}` starts at `{d}`, expected `{at}`"),
                });
            }
            at = c;
        }
        let Some((first, rest)) = path.arrows.split_first() else {
            return self
                .identity(&path.base)
                .ok_or_else(|| FcatError::UnknownObject(path.base.clone()));
        };
        let step = |a: &ArrowId, b: &ArrowId| match kind {
            Obj::Base => self.t.one.compose(a, b).cloned(),
            Obj::OneCell(_) => self.t.vertical(a, b).cloned(),
            Obj::Tower(..) => Some(a.clone()),
        };
        let mut acc = first.clone();
        for g in rest {
            acc = step(&acc, g).ok_or_else(|| FcatError::Precondition(format!("composite ({acc},{g}) undefined")))?;
        }
        Ok(acc)
    }
}

impl Generative for TwoCategoryOracle {
    fn window(&self, tower_depth: usize, _path_budget: usize) -> Window {
        let mut objects = self.t.pres.objects.clone();
        let mut arrows: Vec<ArrowId> = self.t.one.morphisms().to_vec();
        for f in self.t.one.morphisms() {
            objects.push(tower_object(f.as_str(), 0));
        }
        for c in &self.t.sorted2 {
            arrows.push(c.clone());
            for n in 0..=tower_depth {
                objects.push(tower_object(c.as_str(), n));
                arrows.push(tower_identity(c.as_str(), n));
            }
        }
        Window { objects, arrows }
    }

    fn hcomp_entries(&self, arrows: &HashSet<ArrowId>) -> Vec<BinaryEntry> {
        let mut out = Vec::new();
        let present: BTreeSet<&ArrowId> = self.t.sorted2.iter().filter(|c| arrows.contains(*c)).collect();
        for a in &present {
            for b in &present {
                if let Some(ab) = self.t.horizontal(a, b) {
                    out.push(BinaryEntry {
                        left: (*a).clone(),
                        right: (*b).clone(),
                        out: ab.clone(),
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ids::{arr, obj};

    #[test]
    fn thin_two_category_is_valid() {
        let t = fixtures::two_category_a_a2();
        let s = t.validate().unwrap();
        assert_eq!(s.horizontal(&arr("a~a2"), &arr("b~b")), Some(&arr("ab~a2b")));
    }

    #[test]
    fn broken_interchange_is_rejected() {
        let mut t = fixtures::two_category_a_a2();
        for e in &mut t.horizontal {
            if e.left == arr("a~a2") && e.right == arr("b~b") {
                e.out = arr("ab~ab");
            }
        }
        assert!(t.validate().is_err());
    }

    #[test]
    fn view_shape() {
        let o = from_strict_2category(&fixtures::two_category_a_a2()).unwrap();
        assert_eq!(o.hom(&obj("<a,0>"), &obj("<a2,0>"), 0), vec![arr("a~a2")]);
        assert_eq!(o.switchback(&arr("a~a2")), Some(obj("<a~a2,0>")));
        assert_eq!(o.identity(&obj("<a,0>")), Some(arr("a~a")));
        let p = Path::new(obj("<a,0>"), [arr("a~a2"), arr("a2~a")]);
        assert_eq!(o.compose(&p).unwrap(), arr("a~a"));
    }
}
