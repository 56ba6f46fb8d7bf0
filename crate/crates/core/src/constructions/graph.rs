//! The free category on a finite quiver: morphisms are finite paths, with
//! concatenation as a strictly associative composition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::category::{reserved_token, BaseCategory, TowerOracle};
use crate::error::{FcatError, Result};
use crate::format::ArrowDecl;
use crate::ids::{ArrowId, ObjectId};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphData {
    pub vertices: Vec<ObjectId>,
    pub edges: Vec<ArrowDecl>,
}

impl GraphData {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(FcatError::from_json)
    }

    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("graph serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }
}

const EMPTY_PREFIX: &str = "ε_";

/// Path category of a quiver. Morphism tokens are `ε_v` for the empty path
/// at `v` and edge identifiers joined by `.` otherwise; generation is length.
#[derive(Clone, Debug)]
pub struct PathCategory {
    vertices: Vec<ObjectId>,
    edges: BTreeMap<ArrowId, (ObjectId, ObjectId)>,
    out: BTreeMap<ObjectId, Vec<ArrowId>>,
}

impl PathCategory {
    pub fn new(g: &GraphData) -> Result<Self> {
        let mut vertices = g.vertices.clone();
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(FcatError::Precondition("duplicate vertex".into()));
        }
        let mut edges = BTreeMap::new();
        let mut out: BTreeMap<ObjectId, Vec<ArrowId>> = BTreeMap::new();
        for e in &g.edges {
            let t = e.id.as_str();
            if t.is_empty() || t.contains('.') || t.starts_with(EMPTY_PREFIX) || reserved_token(t) {
                return Err(FcatError::Precondition(format!("edge identifier `{t}` is reserved")));
            }
            for v in [&e.dom, &e.cod] {
                if vertices.binary_search(v).is_err() {
                    return Err(FcatError::DanglingRef {
                        kind: "vertex",
                        id: v.to_string(),
                        context: format!("edge `{t}`"),
                    });
                }
            }
            if edges.insert(e.id.clone(), (e.dom.clone(), e.cod.clone())).is_some() {
                return Err(FcatError::DuplicateId {
                    kind: "edge",
                    id: t.to_string(),
                });
            }
            out.entry(e.dom.clone()).or_default().push(e.id.clone());
        }
        for v in &vertices {
            if reserved_token(v.as_str()) {
                return Err(FcatError::Precondition(format!("vertex identifier `{v}` is reserved")));
            }
        }
        Ok(PathCategory { vertices, edges, out })
    }

    fn edges_of<'t>(&self, f: &'t ArrowId) -> Option<Vec<&'t str>> {
        let t = f.as_str();
        if t.starts_with(EMPTY_PREFIX) {
            return None;
        }
        let parts: Vec<&str> = t.split('.').collect();
        parts
            .iter()
            .all(|e| self.edges.contains_key(&ArrowId::new(e)))
            .then_some(parts)
    }
}

fn join(parts: &[&str]) -> ArrowId {
    ArrowId::new(parts.join("."))
}

impl BaseCategory for PathCategory {
    fn base_objects(&self) -> Vec<ObjectId> {
        self.vertices.clone()
    }

    fn is_base_object(&self, o: &ObjectId) -> bool {
        self.vertices.binary_search(o).is_ok()
    }

    fn base_morphisms(&self, generation: usize) -> Vec<ArrowId> {
        let mut all: Vec<ArrowId> = self
            .vertices
            .iter()
            .map(|v| ArrowId::new(format!("{EMPTY_PREFIX}{v}")))
            .collect();
        let mut layer: Vec<(Vec<&str>, &ObjectId)> =
            self.edges.iter().map(|(e, (_, c))| (vec![e.as_str()], c)).collect();
        for _ in 0..generation {
            all.extend(layer.iter().map(|(p, _)| join(p)));
            let mut next = Vec::new();
            for (p, at) in &layer {
                for e in self.out.get(*at).into_iter().flatten() {
                    let mut q = p.clone();
                    q.push(e.as_str());
                    next.push((q, &self.edges[e].1));
                }
            }
            layer = next;
        }
        all.sort();
        all
    }

    fn base_ends(&self, f: &ArrowId) -> Option<(ObjectId, ObjectId)> {
        if let Some(v) = f.as_str().strip_prefix(EMPTY_PREFIX) {
            let v = ObjectId::new(v);
            return self.is_base_object(&v).then(|| (v.clone(), v));
        }
        let parts = self.edges_of(f)?;
        let mut ends = parts.iter().map(|e| &self.edges[&ArrowId::new(e)]);
        let (d, mut c) = ends.next()?.clone();
        for (d2, c2) in ends {
            if *d2 != c {
                return None;
            }
            c = c2.clone();
        }
        Some((d, c))
    }

    fn base_identity(&self, o: &ObjectId) -> Option<ArrowId> {
        self.is_base_object(o)
            .then(|| ArrowId::new(format!("{EMPTY_PREFIX}{o}")))
    }

    fn base_compose(&self, f: &ArrowId, g: &ArrowId) -> Option<ArrowId> {
        let (_, c) = self.base_ends(f)?;
        let (d, _) = self.base_ends(g)?;
        if c != d {
            return None;
        }
        match (self.edges_of(f), self.edges_of(g)) {
            (None, _) => Some(g.clone()),
            (_, None) => Some(f.clone()),
            (Some(mut p), Some(q)) => {
                p.extend(q);
                Some(join(&p))
            }
        }
    }
}

/// The strictly associative tower view of the free category on `g`.
pub fn free_strict_on_graph(g: &GraphData) -> Result<TowerOracle<PathCategory>> {
    Ok(TowerOracle::new(PathCategory::new(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::{arr, obj, Path};
    use crate::oracle::{truncate_oracle, Oracle, TruncateOptions};

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> GraphData {
        GraphData {
            vertices: vs.iter().map(|v| obj(v)).collect(),
            edges: es
                .iter()
                .map(|(e, d, c)| ArrowDecl {
                    id: arr(e),
                    dom: obj(d),
                    cod: obj(c),
                })
                .collect(),
        }
    }

    #[test]
    fn single_vertex_has_only_the_empty_path() {
        let c = PathCategory::new(&graph(&["v"], &[])).unwrap();
        assert_eq!(c.base_morphisms(5), vec![arr("ε_v")]);
    }

    #[test]
    fn one_edge() {
        let o = free_strict_on_graph(&graph(&["a", "b"], &[("e", "a", "b")])).unwrap();
        assert_eq!(o.base().base_morphisms(3), vec![arr("e"), arr("ε_a"), arr("ε_b")]);
        assert_eq!(
            o.compose(&Path::new(obj("a"), [arr("ε_a"), arr("e")])).unwrap(),
            arr("e")
        );
    }

    #[test]
    fn loop_is_truncated() {
        let o = free_strict_on_graph(&graph(&["v"], &[("l", "v", "v")])).unwrap();
        assert_eq!(o.base().base_morphisms(3).len(), 4);
        assert_eq!(
            o.compose(&Path::new(obj("v"), [arr("l.l"), arr("l")])).unwrap(),
            arr("l.l.l")
        );
        let p = truncate_oracle(
            &o,
            TruncateOptions {
                path_budget: 3,
                ..TruncateOptions::depth(1)
            },
        )
        .unwrap();
        assert!(p.is_frontier(&obj("v")));
    }

    #[test]
    fn reserved_names_are_rejected() {
        assert!(PathCategory::new(&graph(&["v"], &[("a.b", "v", "v")])).is_err());
        assert!(PathCategory::new(&graph(&["v"], &[("ε_x", "v", "v")])).is_err());
    }
}
