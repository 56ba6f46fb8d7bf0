//! Rational certificates: finite cyclic graphs standing for the infinite
//! binary tree of arrows that witnesses an equivalence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId};

pub type NodeId = u32;

/// Arrows chosen at one tree address together with the two subtrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CertStep {
    pub fwd: ArrowId,
    pub bwd: ArrowId,
    pub child0: NodeId,
    pub child1: NodeId,
}

/// One node. A node without a step is a frontier leaf: it is only admissible
/// when its pair touches the truncation frontier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CertNode {
    pub id: NodeId,
    pub left: ObjectId,
    pub right: ObjectId,
    pub step: Option<CertStep>,
}

impl CertNode {
    pub fn pair(&self) -> (ObjectId, ObjectId) {
        (self.left.clone(), self.right.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCert {
    pub root: NodeId,
    pub nodes: BTreeMap<NodeId, CertNode>,
}

impl RationalCert {
    pub fn root_node(&self) -> &CertNode {
        &self.nodes[&self.root]
    }

    pub fn node(&self, id: NodeId) -> Option<&CertNode> {
        self.nodes.get(&id)
    }

    /// Endpoints `(A, B)` certified by the root.
    pub fn endpoints(&self) -> (ObjectId, ObjectId) {
        self.root_node().pair()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Root forward arrow, i.e. the equivalence arrow itself.
    pub fn forward(&self) -> Option<&ArrowId> {
        self.root_node().step.as_ref().map(|s| &s.fwd)
    }

    pub fn backward(&self) -> Option<&ArrowId> {
        self.root_node().step.as_ref().map(|s| &s.bwd)
    }

    /// Keeps the nodes reachable from the root and renumbers them 0.. in
    /// breadth-first order (child0 before child1).
    pub fn normalized(&self) -> RationalCert {
        let mut order = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.root]);
        seen.insert(self.root);
        while let Some(id) = queue.pop_front() {
            order.push(id);
            if let Some(step) = self.nodes.get(&id).and_then(|n| n.step.as_ref()) {
                for c in [step.child0, step.child1] {
                    if self.nodes.contains_key(&c) && seen.insert(c) {
                        queue.push_back(c);
                    }
                }
            }
        }
        let renum: BTreeMap<NodeId, NodeId> = order.iter().enumerate().map(|(i, id)| (*id, i as NodeId)).collect();
        let nodes = order
            .iter()
            .map(|id| {
                let n = &self.nodes[id];
                let new_id = renum[id];
                let step = n.step.as_ref().map(|s| CertStep {
                    fwd: s.fwd.clone(),
                    bwd: s.bwd.clone(),
                    child0: renum.get(&s.child0).copied().unwrap_or(s.child0),
                    child1: renum.get(&s.child1).copied().unwrap_or(s.child1),
                });
                (
                    new_id,
                    CertNode {
                        id: new_id,
                        left: n.left.clone(),
                        right: n.right.clone(),
                        step,
                    },
                )
            })
            .collect();
        RationalCert { root: 0, nodes }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(FcatError::from_json)
    }

    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    id: NodeId,
    left: ObjectId,
    right: ObjectId,
    #[serde(default)]
    fwd: Option<ArrowId>,
    #[serde(default)]
    bwd: Option<ArrowId>,
    #[serde(default)]
    child0: Option<NodeId>,
    #[serde(default)]
    child1: Option<NodeId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertRepr {
    root: NodeId,
    nodes: Vec<NodeRepr>,
}

impl Serialize for RationalCert {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nodes = self
            .nodes
            .values()
            .map(|n| NodeRepr {
                id: n.id,
                left: n.left.clone(),
                right: n.right.clone(),
                fwd: n.step.as_ref().map(|x| x.fwd.clone()),
                bwd: n.step.as_ref().map(|x| x.bwd.clone()),
                child0: n.step.as_ref().map(|x| x.child0),
                child1: n.step.as_ref().map(|x| x.child1),
            })
            .collect();
        CertRepr { root: self.root, nodes }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalCert {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CertRepr::deserialize(d)?;
        let mut nodes = BTreeMap::new();
        for n in repr.nodes {
            let step = match (n.fwd, n.bwd, n.child0, n.child1) {
                (Some(fwd), Some(bwd), Some(child0), Some(child1)) => Some(CertStep {
                    fwd,
                    bwd,
                    child0,
                    child1,
                }),
                (None, None, None, None) => None,
                _ => {
                    return Err(D::Error::custom(format!(
                        "node {} must carry all of fwd/bwd/child0/child1 or none",
                        n.id
                    )))
                }
            };
            let node = CertNode {
                id: n.id,
                left: n.left,
                right: n.right,
                step,
            };
            if nodes.insert(n.id, node).is_some() {
                return Err(D::Error::custom(format!("duplicate node id {}", n.id)));
            }
        }
        if !nodes.contains_key(&repr.root) {
            return Err(D::Error::custom(format!("root {} is not a node", repr.root)));
        }
        Ok(RationalCert { root: repr.root, nodes })
    }
}

/// Mutable arena used by the certificate builders. Node ids are arena
/// indices; [`CertArena::extract`] cuts out one certificate.
#[derive(Clone, Debug, Default)]
pub struct CertArena {
    nodes: Vec<CertNode>,
}

impl CertArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: NodeId) -> &CertNode {
        &self.nodes[id as usize]
    }

    /// Allocates a node with the given pair and no step yet.
    pub fn alloc(&mut self, left: ObjectId, right: ObjectId) -> NodeId {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(CertNode {
            id,
            left,
            right,
            step: None,
        });
        id
    }

    pub fn set_step(&mut self, id: NodeId, step: CertStep) {
        self.nodes[id as usize].step = Some(step);
    }

    pub fn push(&mut self, left: ObjectId, right: ObjectId, step: Option<CertStep>) -> NodeId {
        let id = self.alloc(left, right);
        self.nodes[id as usize].step = step;
        id
    }

    /// Copies a certificate into the arena and returns its new root.
    pub fn import(&mut self, cert: &RationalCert) -> NodeId {
        let base = self.nodes.len() as NodeId;
        let renum: BTreeMap<NodeId, NodeId> = cert
            .nodes
            .keys()
            .enumerate()
            .map(|(i, id)| (*id, base + i as NodeId))
            .collect();
        for n in cert.nodes.values() {
            let step = n.step.as_ref().map(|s| CertStep {
                fwd: s.fwd.clone(),
                bwd: s.bwd.clone(),
                // dangling children are preserved as out-of-range ids so that
                // verification still reports them
                child0: renum.get(&s.child0).copied().unwrap_or(NodeId::MAX),
                child1: renum.get(&s.child1).copied().unwrap_or(NodeId::MAX),
            });
            self.nodes.push(CertNode {
                id: renum[&n.id],
                left: n.left.clone(),
                right: n.right.clone(),
                step,
            });
        }
        renum[&cert.root]
    }

    pub fn extract(&self, root: NodeId) -> RationalCert {
        let mut nodes = BTreeMap::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if nodes.contains_key(&id) || id as usize >= self.nodes.len() {
                continue;
            }
            let n = self.nodes[id as usize].clone();
            if let Some(s) = &n.step {
                stack.push(s.child0);
                stack.push(s.child1);
            }
            nodes.insert(id, n);
        }
        RationalCert { root, nodes }.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::{arr, obj};

    fn self_loop() -> RationalCert {
        let mut arena = CertArena::new();
        let n = arena.alloc(obj("A"), obj("A"));
        arena.set_step(
            n,
            CertStep {
                fwd: arr("1A"),
                bwd: arr("1A"),
                child0: n,
                child1: n,
            },
        );
        arena.extract(n)
    }

    #[test]
    fn json_shape_and_round_trip() {
        let c = self_loop();
        let text = c.to_canonical_json();
        assert!(text.contains("\"child0\": 0"));
        assert_eq!(RationalCert::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn leaf_nodes_serialize_with_nulls() {
        let mut arena = CertArena::new();
        let n = arena.alloc(obj("F"), obj("F"));
        let c = arena.extract(n);
        let text = c.to_canonical_json();
        assert!(text.contains("\"fwd\": null"));
        assert_eq!(RationalCert::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn partial_steps_are_rejected() {
        let text = r#"{"root":0,"nodes":[{"id":0,"left":"A","right":"A","fwd":"f"}]}"#;
        assert!(RationalCert::from_json_str(text).is_err());
        let text = r#"{"root":3,"nodes":[{"id":0,"left":"A","right":"A"}]}"#;
        assert!(RationalCert::from_json_str(text).is_err());
    }

    #[test]
    fn normalization_drops_unreachable_nodes() {
        let mut arena = CertArena::new();
        arena.alloc(obj("Z"), obj("Z"));
        let c = self_loop();
        let root = arena.import(&c);
        let out = arena.extract(root);
        assert_eq!(out, c);
    }
}
