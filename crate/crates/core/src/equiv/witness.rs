//! Constructive equivalence witnesses: substitution under horizontal
//! composition, transitivity through chains of equivalence arrows, and
//! cancellation of an equivalence arrow.
//!
//! All builders share one arena. Nodes are memoised by object pair, so the
//! coinductive constructions close up into finite certificates whenever the
//! presentation is finite.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::json;

use crate::equiv::cert::{CertArena, CertStep, NodeId, RationalCert};
use crate::equiv::transform::refl_cert;
use crate::equiv::verify::verify_cert;
use crate::error::{FcatError, Result};
use crate::ids::{ArrowId, ObjectId, Path};
use crate::presentation::Presentation;
use crate::report::{Report, Status};
use crate::weak::{mu_apply, mu_object, theta_lookup, ThetaKey, WeakStructure};

/// An equivalence arrow `fwd: X -> Y` with inverse `bwd`, together with
/// certificates for `J(fwd bwd) ≃ J(1_X)` and `J(bwd fwd) ≃ J(1_Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub fwd: ArrowId,
    pub bwd: ArrowId,
    pub unit: RationalCert,
    pub counit: RationalCert,
}

impl Link {
    /// The root step of a certificate, read as a link.
    pub fn from_cert(cert: &RationalCert) -> Result<Link> {
        let root = cert.root_node();
        let step = root
            .step
            .as_ref()
            .ok_or_else(|| FcatError::Precondition("certificate root is a frontier leaf".into()))?;
        let sub = |id: NodeId| RationalCert {
            root: id,
            nodes: cert.nodes.clone(),
        };
        Ok(Link {
            fwd: step.fwd.clone(),
            bwd: step.bwd.clone(),
            unit: trim(&sub(step.child0)),
            counit: trim(&sub(step.child1)),
        })
    }
}

fn trim(cert: &RationalCert) -> RationalCert {
    let mut a = CertArena::new();
    let root = a.import(cert);
    a.extract(root)
}

struct Builder<'a> {
    p: &'a Presentation,
    w: &'a WeakStructure,
    arena: CertArena,
    pairs: HashMap<(ObjectId, ObjectId), NodeId>,
    products: HashMap<Vec<NodeId>, NodeId>,
    /// Nodes whose children are still being built.
    open: BTreeSet<NodeId>,
}

/// One link of a chain, as seen by the elimination: forward and backward
/// arrows and the node certifying `J(fwd bwd) ≃ J(1)`.
#[derive(Clone)]
struct Edge {
    fwd: ArrowId,
    bwd: ArrowId,
    unit: NodeId,
}

impl<'a> Builder<'a> {
    fn new(p: &'a Presentation, w: &'a WeakStructure) -> Self {
        Builder {
            p,
            w,
            arena: CertArena::new(),
            pairs: HashMap::new(),
            products: HashMap::new(),
            open: BTreeSet::new(),
        }
    }

    fn pair(&self, n: NodeId) -> (ObjectId, ObjectId) {
        self.arena.get(n).pair()
    }

    fn touches_frontier(&self, x: &ObjectId, y: &ObjectId) -> bool {
        self.p.is_frontier(x) || self.p.is_frontier(y)
    }

    fn j(&self, f: &ArrowId) -> Result<ObjectId> {
        self.p.switchback_checked(f)
    }

    fn jc(&self, path: &Path) -> Result<ObjectId> {
        self.p.switchback_of(path)
    }

    fn import_link(&mut self, l: &Link) -> Result<NodeId> {
        let (x, y) = self
            .p
            .ends(&l.fwd)
            .ok_or_else(|| FcatError::UnknownArrow(l.fwd.clone()))?;
        let (x, y) = (x.clone(), y.clone());
        let child0 = self.arena.import(&l.unit);
        let child1 = self.arena.import(&l.counit);
        Ok(self.arena.push(
            x,
            y,
            Some(CertStep {
                fwd: l.fwd.clone(),
                bwd: l.bwd.clone(),
                child0,
                child1,
            }),
        ))
    }

    fn sym(&mut self, n: NodeId) -> NodeId {
        let node = self.arena.get(n).clone();
        let step = node.step.map(|s| CertStep {
            fwd: s.bwd,
            bwd: s.fwd,
            child0: s.child1,
            child1: s.child0,
        });
        self.arena.push(node.right, node.left, step)
    }

    fn refl(&mut self, a: &ObjectId) -> Result<NodeId> {
        if let Some(n) = self.pairs.get(&(a.clone(), a.clone())) {
            return Ok(*n);
        }
        match refl_cert(self.p, a) {
            Ok(c) => {
                let n = self.arena.import(&c);
                self.pairs.insert((a.clone(), a.clone()), n);
                Ok(n)
            }
            Err(FcatError::Precondition(_)) => self.trans(a, &[]),
            Err(e) => Err(e),
        }
    }

    /// Certificate for `A_0 ≃ A_n` from certificates `A_{i-1} ≃ A_i`.
    fn trans(&mut self, a0: &ObjectId, steps: &[NodeId]) -> Result<NodeId> {
        if steps.len() == 1 {
            return Ok(steps[0]);
        }
        let an = steps.last().map(|s| self.pair(*s).1).unwrap_or_else(|| a0.clone());
        if let Some(n) = self.pairs.get(&(a0.clone(), an.clone())) {
            return Ok(*n);
        }
        let node = self.arena.alloc(a0.clone(), an.clone());
        self.pairs.insert((a0.clone(), an.clone()), node);
        match self.trans_step(a0, &an, steps, node) {
            Ok(()) => Ok(node),
            Err(e) if self.touches_frontier(a0, &an) && (e.is_frontier() || is_leaf_error(&e)) => {
                self.open.remove(&node);
                Ok(node)
            }
            Err(e) => Err(e),
        }
    }

    fn trans_step(&mut self, a0: &ObjectId, an: &ObjectId, steps: &[NodeId], node: NodeId) -> Result<()> {
        let mut edges = Vec::new();
        let mut back = Vec::new();
        for s in steps {
            let n = self.arena.get(*s).clone();
            let st = n.step.ok_or_else(leaf_error)?;
            edges.push(Edge {
                fwd: st.fwd.clone(),
                bwd: st.bwd.clone(),
                unit: st.child0,
            });
            back.push(Edge {
                fwd: st.bwd,
                bwd: st.fwd,
                unit: st.child1,
            });
        }
        back.reverse();
        let fwd = self
            .p
            .compose(&Path::new(a0.clone(), edges.iter().map(|e| e.fwd.clone())))?;
        let bwd = self
            .p
            .compose(&Path::new(an.clone(), back.iter().map(|e| e.fwd.clone())))?;
        self.open.insert(node);
        let child0 = self.elim(a0, &edges)?;
        let child1 = self.elim(an, &back)?;
        self.arena.set_step(
            node,
            CertStep {
                fwd,
                bwd,
                child0,
                child1,
            },
        );
        self.open.remove(&node);
        Ok(())
    }

    /// Certificate for `J((f_1..f_n)(g_n..g_1)) ≃ J(1_{A_0})`: rebracket, then
    /// eliminate the pairs `f_k g_k` from the middle outwards.
    fn elim(&mut self, a0: &ObjectId, edges: &[Edge]) -> Result<NodeId> {
        let p = self.p;
        let n = edges.len();
        let fs: Vec<ArrowId> = edges.iter().map(|e| e.fwd.clone()).collect();
        let gs: Vec<ArrowId> = edges.iter().rev().map(|e| e.bwd.clone()).collect();
        let big_f = p.compose(&Path::new(a0.clone(), fs.iter().cloned()))?;
        let big_g = p.compose(&Path::new(
            p.cod(&big_f).expect("composite").clone(),
            gs.iter().cloned(),
        ))?;
        let start = self.jc(&Path::new(a0.clone(), [big_f.clone(), big_g]))?;
        let target = self.j(&p.identity_checked(a0)?)?;
        let mut chain = Chain::new(start);

        let mut head = vec![big_f];
        head.extend(gs.iter().cloned());
        let k1 = ThetaKey::new(Path::new(a0.clone(), head), 1, n + 1);
        self.theta_step(&mut chain, &k1)?;
        let path_k = |k: usize| {
            let mut v: Vec<ArrowId> = fs[..k].to_vec();
            v.extend(gs[n - k..].iter().cloned());
            Path::new(a0.clone(), v)
        };
        if n > 0 {
            self.theta_step(&mut chain, &ThetaKey::new(path_k(n), 0, n))?;
        }
        for k in (1..=n).rev() {
            let pk = path_k(k);
            self.theta_step(&mut chain, &ThetaKey::new(pk.clone(), k - 1, k + 1))?;
            let h = p.compose(&Path::new(
                p.dom(&fs[k - 1]).expect("arrow").clone(),
                [fs[k - 1].clone(), gs[n - k].clone()],
            ))?;
            let ak = p.dom(&fs[k - 1]).expect("arrow").clone();
            let one = p.identity_checked(&ak)?;
            let mut q = fs[..k - 1].to_vec();
            q.push(h);
            q.extend(gs[n - k + 1..].iter().cloned());
            let mut q2 = q.clone();
            q2[k - 1] = one;
            let (q, q2) = (Path::new(a0.clone(), q), Path::new(a0.clone(), q2));
            let mut comps = Vec::with_capacity(q.len());
            for (i, f) in q.arrows.iter().enumerate() {
                comps.push(if i == k - 1 {
                    Comp::Node(edges[k - 1].unit)
                } else {
                    Comp::Refl(f.clone())
                });
            }
            self.lemma_step(&mut chain, &q, &q2, comps)?;
            if k > 1 {
                self.theta_step(&mut chain, &ThetaKey::new(path_k(k - 1), k - 1, k - 1))?;
            }
        }
        self.finish(a0, chain, &target)
    }

    fn finish(&mut self, _a0: &ObjectId, chain: Chain, target: &ObjectId) -> Result<NodeId> {
        if chain.at != *target {
            return Err(FcatError::Precondition(format!(
                "chain ends at `{}`, expected `{target}`",
                chain.at
            )));
        }
        self.trans(&chain.start, &chain.steps)
    }

    fn theta_step(&mut self, chain: &mut Chain, key: &ThetaKey) -> Result<()> {
        let (x, y) = key.endpoints(self.p)?;
        if x == y {
            return Ok(());
        }
        let cert = theta_lookup(self.p, self.w, key)?;
        let n = self.arena.import(&cert);
        self.push_oriented(chain, n)
    }

    fn push_oriented(&mut self, chain: &mut Chain, n: NodeId) -> Result<()> {
        let (x, y) = self.pair(n);
        if x == chain.at {
            chain.steps.push(n);
            chain.at = y;
        } else if y == chain.at {
            let s = self.sym(n);
            chain.steps.push(s);
            chain.at = x;
        } else {
            return Err(FcatError::Precondition(format!(
                "step `{x}` ≃ `{y}` does not continue from `{}`",
                chain.at
            )));
        }
        Ok(())
    }

    fn lemma_step(&mut self, chain: &mut Chain, q: &Path, q2: &Path, comps: Vec<Comp>) -> Result<()> {
        if self.jc(q)? == self.jc(q2)? {
            return Ok(());
        }
        let n = self.lemma(comps)?;
        self.push_oriented(chain, n)
    }

    fn lemma(&mut self, comps: Vec<Comp>) -> Result<NodeId> {
        let mut roots = Vec::with_capacity(comps.len());
        for c in comps {
            roots.push(match c {
                Comp::Node(n) => n,
                Comp::Refl(f) => {
                    let o = self.j(&f)?;
                    self.refl(&o)?
                }
            });
        }
        self.product(roots)
    }

    /// Image under `mu` of the componentwise product of certificates.
    fn product(&mut self, tuple: Vec<NodeId>) -> Result<NodeId> {
        if let Some(n) = self.products.get(&tuple) {
            return Ok(*n);
        }
        if let Some(n) = tuple.iter().find(|n| self.open.contains(n)) {
            return Err(FcatError::Precondition(format!(
                "substitution needs certificate node {n} before it is complete"
            )));
        }
        let nodes: Vec<_> = tuple.iter().map(|n| self.arena.get(*n).clone()).collect();
        let image = |side: &dyn Fn(&crate::equiv::cert::CertNode) -> ObjectId| -> Result<ObjectId> {
            let pre = nodes
                .iter()
                .map(|n| self.p.switchback_inv_checked(&side(n)))
                .collect::<Result<Vec<_>>>()?;
            self.j(&mu_object(self.p, self.w, &pre)?)
        };
        let left = image(&|n| n.left.clone())?;
        let right = image(&|n| n.right.clone())?;
        let id = self.arena.alloc(left, right);
        self.products.insert(tuple, id);
        let steps: Option<Vec<CertStep>> = nodes.iter().map(|n| n.step.clone()).collect();
        let Some(steps) = steps else { return Ok(id) };
        let fwds: Vec<ArrowId> = steps.iter().map(|s| s.fwd.clone()).collect();
        let bwds: Vec<ArrowId> = steps.iter().map(|s| s.bwd.clone()).collect();
        let (fwd, bwd) = match (mu_apply(self.p, self.w, &fwds), mu_apply(self.p, self.w, &bwds)) {
            (Ok(f), Ok(b)) => (f, b),
            (Err(e), _) | (_, Err(e)) if e.is_frontier() => return Ok(id),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let child0 = self.product(steps.iter().map(|s| s.child0).collect())?;
        let child1 = self.product(steps.iter().map(|s| s.child1).collect())?;
        self.arena.set_step(
            id,
            CertStep {
                fwd,
                bwd,
                child0,
                child1,
            },
        );
        Ok(id)
    }

    fn done(&self, root: NodeId) -> Result<RationalCert> {
        let cert = self.arena.extract(root);
        let report = verify_cert(self.p, &cert);
        match report.failures().first() {
            None => Ok(cert),
            Some(f) => Err(FcatError::Precondition(format!(
                "constructed certificate does not verify: {} {}",
                f.check_id, f.witness
            ))),
        }
    }
}

enum Comp {
    Node(NodeId),
    Refl(ArrowId),
}

struct Chain {
    start: ObjectId,
    at: ObjectId,
    steps: Vec<NodeId>,
}

impl Chain {
    fn new(start: ObjectId) -> Self {
        Chain {
            at: start.clone(),
            start,
            steps: Vec::new(),
        }
    }
}

fn leaf_error() -> FcatError {
    FcatError::Precondition("link is a frontier leaf".into())
}

fn is_leaf_error(e: &FcatError) -> bool {
    matches!(e, FcatError::Precondition(m) if m == "link is a frontier leaf")
}

fn check_parallel(p: &Presentation, fs: &Path, gs: &Path) -> Result<()> {
    let bad = |detail: String| FcatError::Precondition(format!("{fs} and {gs} are not parallel: {detail}"));
    if fs.len() != gs.len() || fs.base != gs.base {
        return Err(bad("different length or base".into()));
    }
    for (f, g) in fs.arrows.iter().zip(&gs.arrows) {
        if p.ends(f) != p.ends(g) || p.ends(f).is_none() {
            return Err(bad(format!("`{f}` and `{g}`")));
        }
    }
    p.path_target(fs)?;
    Ok(())
}

/// Certificate for `J(f_1..f_n) ≃ J(g_1..g_n)` from certificates for
/// `J f_k ≃ J g_k`, pushed through `mu_n`.
pub fn lemma_a_cert(
    p: &Presentation,
    w: &WeakStructure,
    fs: &Path,
    gs: &Path,
    certs: &[RationalCert],
) -> Result<RationalCert> {
    check_parallel(p, fs, gs)?;
    if certs.len() != fs.len() || fs.is_empty() {
        return Err(FcatError::Precondition("one certificate per arrow is required".into()));
    }
    let mut b = Builder::new(p, w);
    let mut comps = Vec::new();
    for ((f, g), c) in fs.arrows.iter().zip(&gs.arrows).zip(certs) {
        if c.endpoints() != (p.switchback_checked(f)?, p.switchback_checked(g)?) {
            return Err(FcatError::Precondition(format!(
                "certificate does not relate J{f} and J{g}"
            )));
        }
        comps.push(Comp::Node(b.arena.import(c)));
    }
    let root = b.lemma(comps)?;
    b.done(root)
}

/// Transitivity: a certificate for `dom f_1 ≃ cod f_n` from a chain of
/// equivalence arrows. An empty chain gives reflexivity at `base`.
pub fn chain_cert(p: &Presentation, w: &WeakStructure, base: &ObjectId, links: &[Link]) -> Result<RationalCert> {
    let mut b = Builder::new(p, w);
    let mut at = base.clone();
    let mut steps = Vec::new();
    for l in links {
        let n = b.import_link(l)?;
        let (x, y) = b.pair(n);
        if x != at {
            return Err(FcatError::Precondition(format!(
                "link `{}` does not start at `{at}`",
                l.fwd
            )));
        }
        at = y;
        steps.push(n);
    }
    let root = if steps.is_empty() {
        b.refl(base)?
    } else {
        b.trans(base, &steps)?
    };
    b.done(root)
}

/// Left cancellation: from `u: A -> B` with inverse `v`, `f: B -> C`,
/// `g: A -> C` and a certificate for `J(uf) ≃ J(g)`, a certificate for
/// `J(f) ≃ J(vg)` along `f ≃ 1_B f ≃ (vu) f ≃ v (u f) ≃ v g`.
pub fn cancel_cert(
    p: &Presentation,
    w: &WeakStructure,
    u: &Link,
    f: &ArrowId,
    g: &ArrowId,
    premise: &RationalCert,
) -> Result<RationalCert> {
    let (ua, ub) = ends(p, &u.fwd)?;
    let (fb, _) = ends(p, f)?;
    let (ga, _) = ends(p, g)?;
    if fb != ub || ga != ua || ends(p, f)?.1 != ends(p, g)?.1 {
        return Err(FcatError::Precondition(
            "cancellation data is not typed A -> B -> C".into(),
        ));
    }
    let v = &u.bwd;
    let mut b = Builder::new(p, w);
    let link = b.import_link(u)?;
    let counit = b.arena.get(link).step.clone().expect("imported link").child1;
    let prem = b.arena.import(premise);
    let start = p.switchback_checked(f)?;
    let mut chain = Chain::new(start);
    let path = |xs: &[&ArrowId], base: &ObjectId| Path::new(base.clone(), xs.iter().map(|x| (*x).clone()));
    // f ≃ 1_B f
    b.theta_step(&mut chain, &ThetaKey::new(path(&[f], &ub), 0, 0))?;
    // 1_B f ≃ (vu) f
    let one = p.identity_checked(&ub)?;
    let vu = p.compose(&path(&[v, &u.fwd], &ub))?;
    let inv = b.sym(counit);
    b.lemma_step(
        &mut chain,
        &path(&[&one, f], &ub),
        &path(&[&vu, f], &ub),
        vec![Comp::Node(inv), Comp::Refl(f.clone())],
    )?;
    // (vu) f ≃ v u f ≃ v (u f)
    let vuf = path(&[v, &u.fwd, f], &ub);
    b.theta_step(&mut chain, &ThetaKey::new(vuf.clone(), 0, 2))?;
    b.theta_step(&mut chain, &ThetaKey::new(vuf, 1, 3))?;
    // v (u f) ≃ v g
    let uf = p.compose(&path(&[&u.fwd, f], &ua))?;
    b.lemma_step(
        &mut chain,
        &path(&[v, &uf], &ub),
        &path(&[v, g], &ub),
        vec![Comp::Refl(v.clone()), Comp::Node(prem)],
    )?;
    let target = p.switchback_of(&path(&[v, g], &ub))?;
    let root = b.finish(&ub, chain, &target)?;
    b.done(root)
}

/// Right cancellation: from `u: A -> B` with inverse `v`, `f: C -> A`,
/// `g: C -> B` and a certificate for `J(fu) ≃ J(g)`, a certificate for
/// `J(f) ≃ J(gv)` along `f ≃ f 1_A ≃ f (uv) ≃ (f u) v ≃ g v`.
pub fn cancel_cert_right(
    p: &Presentation,
    w: &WeakStructure,
    u: &Link,
    f: &ArrowId,
    g: &ArrowId,
    premise: &RationalCert,
) -> Result<RationalCert> {
    let (ua, ub) = ends(p, &u.fwd)?;
    let (fc, fa) = ends(p, f)?;
    let (gc, gb) = ends(p, g)?;
    if fa != ua || gb != ub || fc != gc {
        return Err(FcatError::Precondition(
            "cancellation data is not typed C -> A -> B".into(),
        ));
    }
    let v = &u.bwd;
    let mut b = Builder::new(p, w);
    let link = b.import_link(u)?;
    let unit = b.arena.get(link).step.clone().expect("imported link").child0;
    let prem = b.arena.import(premise);
    let mut chain = Chain::new(p.switchback_checked(f)?);
    let path = |xs: &[&ArrowId]| Path::new(fc.clone(), xs.iter().map(|x| (*x).clone()));
    b.theta_step(&mut chain, &ThetaKey::new(path(&[f]), 1, 1))?;
    let one = p.identity_checked(&ua)?;
    let uv = p.compose(&Path::new(ua.clone(), [u.fwd.clone(), v.clone()]))?;
    let inv = b.sym(unit);
    b.lemma_step(
        &mut chain,
        &path(&[f, &one]),
        &path(&[f, &uv]),
        vec![Comp::Refl(f.clone()), Comp::Node(inv)],
    )?;
    let fuv = path(&[f, &u.fwd, v]);
    b.theta_step(&mut chain, &ThetaKey::new(fuv.clone(), 1, 3))?;
    b.theta_step(&mut chain, &ThetaKey::new(fuv, 0, 2))?;
    let fu = p.compose(&path(&[f, &u.fwd]))?;
    b.lemma_step(
        &mut chain,
        &path(&[&fu, v]),
        &path(&[g, v]),
        vec![Comp::Node(prem), Comp::Refl(v.clone())],
    )?;
    let target = p.switchback_of(&path(&[g, v]))?;
    let root = b.finish(&fc, chain, &target)?;
    b.done(root)
}

/// Bounds for [`check_witnesses`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBounds {
    /// Longest paths fed to [`lemma_a_cert`] and longest chains fed to
    /// [`chain_cert`].
    pub max_len: usize,
    /// Maximum number of instances per builder.
    pub budget: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        Self {
            max_len: 2,
            budget: 20_000,
        }
    }
}

/// Runs every builder on all instances the decided relation of `p` offers
/// and verifies each output independently. Check ids: `witness-lemma-a`,
/// `witness-chain`, `witness-cancel`, `witness-cancel-right`.
pub fn check_witnesses(p: &Presentation, bounds: WitnessBounds) -> Result<Report> {
    use crate::equiv::decide::{decide_equiv, EquivMode};
    use crate::weak::weak_of;

    let w = weak_of(p);
    let rel = decide_equiv(p, EquivMode::Optimistic);
    let mut certs: BTreeMap<(ObjectId, ObjectId), Option<RationalCert>> = BTreeMap::new();
    let mut cert_of = |a: &ObjectId, b: &ObjectId| -> Option<RationalCert> {
        certs
            .entry((a.clone(), b.clone()))
            .or_insert_with(|| rel.extract(a, b))
            .clone()
    };
    let mut r = Report::new();
    let record = |r: &mut Report, id: &str, out: Result<RationalCert>, witness: serde_json::Value| match out {
        Ok(c) => {
            let v = verify_cert(p, &c);
            if v.has_failures() {
                let mut w = witness;
                w["verify"] = json!(v.failures().len());
                r.fail(id, w);
            } else {
                r.pass(id);
            }
        }
        Err(e) if e.is_frontier() => r.skip(id, Status::SkippedFrontier, witness),
        Err(e) => {
            let mut w = witness;
            w["error"] = json!(e.to_string());
            r.fail(id, w);
        }
    };

    // lemma a on parallel paths whose components are related
    let mut count = 0;
    for len in 1..=bounds.max_len {
        let paths = p.paths_of_length(len, bounds.budget)?;
        for fs in &paths {
            for gs in &paths {
                if fs.base != gs.base || count >= bounds.budget {
                    continue;
                }
                if fs.arrows.iter().zip(&gs.arrows).any(|(f, g)| p.ends(f) != p.ends(g)) {
                    continue;
                }
                let cs: Option<Vec<RationalCert>> = fs
                    .arrows
                    .iter()
                    .zip(&gs.arrows)
                    .map(|(f, g)| cert_of(p.switchback(f)?, p.switchback(g)?))
                    .collect();
                let Some(cs) = cs else { continue };
                count += 1;
                let witness = json!({ "left": fs.to_string(), "right": gs.to_string() });
                record(&mut r, "witness-lemma-a", lemma_a_cert(p, &w, fs, gs, &cs), witness);
            }
        }
    }

    // equivalence arrows, one per ordered pair with a support
    let mut links: Vec<(ObjectId, ObjectId, Link)> = Vec::new();
    for (a, b) in &rel.members {
        if p.touches_frontier([a, b]) {
            continue;
        }
        if let Some(l) = cert_of(a, b).and_then(|c| Link::from_cert(&c).ok()) {
            links.push((a.clone(), b.clone(), l));
        }
    }

    let mut count = 0;
    let mut chains: Vec<(ObjectId, Vec<usize>)> =
        links.iter().enumerate().map(|(i, l)| (l.1.clone(), vec![i])).collect();
    for len in 1..=bounds.max_len {
        let mut next = Vec::new();
        for (end, chain) in &chains {
            if count >= bounds.budget {
                break;
            }
            count += 1;
            let ls: Vec<Link> = chain.iter().map(|&i| links[i].2.clone()).collect();
            let base = &links[chain[0]].0;
            let names: Vec<&str> = ls.iter().map(|l| l.fwd.as_str()).collect();
            let witness = json!({ "base": base, "links": names });
            record(&mut r, "witness-chain", chain_cert(p, &w, base, &ls), witness);
            if len < bounds.max_len {
                for (i, l) in links.iter().enumerate() {
                    if &l.0 == end {
                        let mut c = chain.clone();
                        c.push(i);
                        next.push((l.1.clone(), c));
                    }
                }
            }
        }
        chains = next;
    }

    let mut count = 0;
    for (a, b, u) in &links {
        for f in p.out_arrows(b) {
            for g in p.out_arrows(a) {
                if p.cod(f) != p.cod(g) || count >= bounds.budget {
                    continue;
                }
                let Ok(uf) = p.compose2(&u.fwd, f) else { continue };
                let (Some(juf), Some(jg)) = (p.switchback(&uf), p.switchback(g)) else {
                    continue;
                };
                let Some(prem) = cert_of(juf, jg) else { continue };
                count += 1;
                let witness = json!({ "u": u.fwd, "f": f, "g": g });
                record(&mut r, "witness-cancel", cancel_cert(p, &w, u, f, g, &prem), witness);
            }
        }
        for f in p.in_arrows(a) {
            for g in p.in_arrows(b) {
                if p.dom(f) != p.dom(g) || count >= bounds.budget {
                    continue;
                }
                let Ok(fu) = p.compose2(f, &u.fwd) else { continue };
                let (Some(jfu), Some(jg)) = (p.switchback(&fu), p.switchback(g)) else {
                    continue;
                };
                let Some(prem) = cert_of(jfu, jg) else { continue };
                count += 1;
                let witness = json!({ "u": u.fwd, "f": f, "g": g });
                record(
                    &mut r,
                    "witness-cancel-right",
                    cancel_cert_right(p, &w, u, f, g, &prem),
                    witness,
                );
            }
        }
    }
    Ok(r)
}

fn ends(p: &Presentation, f: &ArrowId) -> Result<(ObjectId, ObjectId)> {
    p.ends(f)
        .map(|(d, c)| (d.clone(), c.clone()))
        .ok_or_else(|| FcatError::UnknownArrow(f.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::decide::{decide_equiv, EquivMode};
    use crate::equiv::transform::sym_cert;
    use crate::equiv::verify::accepts;
    use crate::fixtures;
    use crate::ids::{arr, obj};
    use crate::weak::weak_of;

    fn iso_link(p: &Presentation, x: &str, y: &str) -> Link {
        let r = decide_equiv(p, EquivMode::Optimistic);
        Link::from_cert(&r.extract(&obj(x), &obj(y)).unwrap()).unwrap()
    }

    #[test]
    fn lemma_a_unary_returns_the_input_verdict() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let c = refl_cert(&p, &obj("<u,0>")).unwrap();
        let out = lemma_a_cert(
            &p,
            &w,
            &Path::new(obj("X"), [arr("u")]),
            &Path::new(obj("X"), [arr("u")]),
            &[c],
        )
        .unwrap();
        assert_eq!(out.endpoints(), (obj("<u,0>"), obj("<u,0>")));
    }

    #[test]
    fn lemma_a_refl_pair() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let uv = Path::new(obj("X"), [arr("u"), arr("v")]);
        let certs = [
            refl_cert(&p, &obj("<u,0>")).unwrap(),
            refl_cert(&p, &obj("<v,0>")).unwrap(),
        ];
        let out = lemma_a_cert(&p, &w, &uv, &uv, &certs).unwrap();
        assert_eq!(out.endpoints(), (obj("<id_X,0>"), obj("<id_X,0>")));
        assert!(accepts(&p, &out));
    }

    #[test]
    fn whiskering_a_two_cell() {
        let p = fixtures::fix_2cat();
        let w = weak_of(&p);
        let alpha = decide_equiv(&p, EquivMode::Optimistic)
            .extract(&obj("<a,0>"), &obj("<a2,0>"))
            .unwrap();
        let b = refl_cert(&p, &obj("<b,0>")).unwrap();
        let fs = Path::new(obj("X"), [arr("a"), arr("b")]);
        let gs = Path::new(obj("X"), [arr("a2"), arr("b")]);
        let out = lemma_a_cert(&p, &w, &fs, &gs, &[alpha, b]).unwrap();
        assert_eq!(out.endpoints(), (obj("<ab,0>"), obj("<a2b,0>")));
    }

    #[test]
    fn single_link_chain() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let c = chain_cert(&p, &w, &obj("X"), &[iso_link(&p, "X", "Y")]).unwrap();
        assert_eq!(c.endpoints(), (obj("X"), obj("Y")));
    }

    #[test]
    fn two_link_chain_is_transitivity() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let links = [iso_link(&p, "X", "Y"), iso_link(&p, "Y", "X")];
        let c = chain_cert(&p, &w, &obj("X"), &links).unwrap();
        assert_eq!(c.endpoints(), (obj("X"), obj("X")));
        assert!(accepts(&p, &c));
    }

    #[test]
    fn empty_chain_is_reflexivity() {
        let p = fixtures::fix_iso();
        let c = chain_cert(&p, &weak_of(&p), &obj("Y"), &[]).unwrap();
        assert_eq!(c, refl_cert(&p, &obj("Y")).unwrap());
    }

    #[test]
    fn cancellation_both_sides() {
        let p = fixtures::fix_iso();
        let w = weak_of(&p);
        let u = iso_link(&p, "X", "Y");
        // J(u id_Y) ≃ J(u), hence J(id_Y) ≃ J(v u)
        let premise = refl_cert(&p, &obj("<u,0>")).unwrap();
        let c = cancel_cert(&p, &w, &u, &arr("id_Y"), &arr("u"), &premise).unwrap();
        assert_eq!(c.endpoints(), (obj("<id_Y,0>"), obj("<id_Y,0>")));
        // J(id_X u) ≃ J(u), hence J(id_X) ≃ J(u v)
        let c = cancel_cert_right(&p, &w, &u, &arr("id_X"), &arr("u"), &premise).unwrap();
        assert_eq!(c.endpoints(), (obj("<id_X,0>"), obj("<id_X,0>")));
        let s = sym_cert(&c);
        assert!(accepts(&p, &s));
    }

    #[test]
    fn witness_suite_on_fixtures() {
        for p in [fixtures::fix_iso(), fixtures::fix_2cat()] {
            let r = check_witnesses(&p, WitnessBounds::default()).unwrap();
            assert!(!r.has_failures(), "{:?}", r.failures());
            for id in [
                "witness-lemma-a",
                "witness-chain",
                "witness-cancel",
                "witness-cancel-right",
            ] {
                assert!(r.instances(id) > 0, "{id}");
            }
        }
    }
}
