//! The reference fixtures, small category generators and the mutation
//! catalogue used by the tests, the command line tool and the benches.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::constructions::{
    free_strict_on_graph, from_category, from_strict_2category, mutate_presentation, CategoryPresentation, GraphData,
    Mutation, TwoCategoryPresentation,
};
use crate::equiv::transform::refl_cert;
use crate::format::{ArrowDecl, BinaryEntry, PresentationData, ThetaKeyData};
use crate::ids::{arr, obj};
use crate::oracle::{truncate_oracle, TruncateOptions};
use crate::presentation::Presentation;

fn decl(id: &str, d: &str, c: &str) -> ArrowDecl {
    ArrowDecl {
        id: arr(id),
        dom: obj(d),
        cod: obj(c),
    }
}

fn entry(l: &str, r: &str, o: &str) -> BinaryEntry {
    BinaryEntry {
        left: arr(l),
        right: arr(r),
        out: arr(o),
    }
}

/// One object `A`, one arrow `1_A`, with `J(1_A) = A`.
pub fn fix_one() -> Presentation {
    Presentation::from_data(PresentationData {
        objects: vec![obj("A")],
        arrows: vec![decl("1_A", "A", "A")],
        identity: [(obj("A"), arr("1_A"))].into(),
        bcomp: vec![entry("1_A", "1_A", "1_A")],
        switchback: [(arr("1_A"), obj("A"))].into(),
        ..Default::default()
    })
    .expect("fixture")
}

/// Objects `o0, o1, ...`, only identities, and `J(1_i) = o_perm[i]`. These
/// are exactly the finite presentations with empty frontier: every object
/// needs an identity and `J` is injective, so there is room for nothing else.
pub fn permutation(perm: &[usize]) -> Presentation {
    let n = perm.len();
    let o = |i: usize| obj(&format!("o{i}"));
    let one = |i: usize| arr(&format!("1_o{i}"));
    Presentation::from_data(PresentationData {
        objects: (0..n).map(o).collect(),
        arrows: (0..n)
            .map(|i| decl(&format!("1_o{i}"), &format!("o{i}"), &format!("o{i}")))
            .collect(),
        identity: (0..n).map(|i| (o(i), one(i))).collect(),
        bcomp: (0..n)
            .map(|i| entry(&format!("1_o{i}"), &format!("1_o{i}"), &format!("1_o{i}")))
            .collect(),
        switchback: (0..n).map(|i| (one(i), o(perm[i] % n))).collect(),
        ..Default::default()
    })
    .expect("permutation fixture")
}

/// `from_category(cat)` cut at the given tower depth.
pub fn truncated(cat: &CategoryPresentation, depth: usize) -> crate::error::Result<Presentation> {
    truncate_oracle(&from_category(cat)?, TruncateOptions::depth(depth))
}

/// Two objects and an isomorphism `u: X -> Y` with inverse `v`.
pub fn walking_iso() -> CategoryPresentation {
    CategoryPresentation {
        objects: vec![obj("X"), obj("Y")],
        morphisms: vec![
            decl("id_X", "X", "X"),
            decl("id_Y", "Y", "Y"),
            decl("u", "X", "Y"),
            decl("v", "Y", "X"),
        ],
        identity: [(obj("X"), arr("id_X")), (obj("Y"), arr("id_Y"))].into(),
        composition: vec![
            entry("id_X", "id_X", "id_X"),
            entry("id_X", "u", "u"),
            entry("id_Y", "id_Y", "id_Y"),
            entry("id_Y", "v", "v"),
            entry("u", "id_Y", "u"),
            entry("u", "v", "id_X"),
            entry("v", "id_X", "v"),
            entry("v", "u", "id_Y"),
        ],
    }
}

/// The walking isomorphism through the tower construction, cut at tower
/// depth 2.
pub fn fix_iso() -> Presentation {
    let o = from_category(&walking_iso()).expect("fixture");
    truncate_oracle(&o, TruncateOptions::depth(2)).expect("fixture")
}

/// A cell `alpha: Jf -> Jg` between arrows `f: A -> B` and `g: B -> B` that
/// are not parallel.
pub fn fix_par() -> Presentation {
    let arrows = vec![
        decl("f", "A", "B"),
        decl("g", "B", "B"),
        decl("alpha", "F", "G"),
        decl("1_A", "A", "A"),
        decl("1_B", "B", "B"),
        decl("1_F", "F", "F"),
        decl("1_G", "G", "G"),
        decl("1_H", "H", "H"),
    ];
    let j = [
        ("f", "F"),
        ("g", "G"),
        ("alpha", "H"),
        ("1_A", "A"),
        ("1_B", "B"),
        ("1_F", "F1"),
        ("1_G", "G1"),
        ("1_H", "H1"),
    ];
    let bcomp = vec![
        entry("1_A", "1_A", "1_A"),
        entry("1_A", "f", "f"),
        entry("f", "1_B", "f"),
        entry("f", "g", "f"),
        entry("1_B", "1_B", "1_B"),
        entry("1_B", "g", "g"),
        entry("g", "1_B", "g"),
        entry("g", "g", "g"),
        entry("1_F", "1_F", "1_F"),
        entry("1_F", "alpha", "alpha"),
        entry("alpha", "1_G", "alpha"),
        entry("1_G", "1_G", "1_G"),
        entry("1_H", "1_H", "1_H"),
    ];
    Presentation::from_data(PresentationData {
        objects: ["A", "B", "F", "G", "H", "F1", "G1", "H1"].map(obj).to_vec(),
        arrows,
        identity: [("A", "1_A"), ("B", "1_B"), ("F", "1_F"), ("G", "1_G"), ("H", "1_H")]
            .map(|(o, a)| (obj(o), arr(a)))
            .into(),
        bcomp,
        switchback: j.map(|(a, o)| (arr(a), obj(o))).into(),
        frontier: ["F1", "G1", "H1"].map(obj).to_vec(),
        ..Default::default()
    })
    .expect("fixture")
}

/// One-cells `a, a2: X -> Y`, `b: Y -> Z` and their composites, with
/// `a ≅ a2` and hence `ab ≅ a2b` as the only non-identity 2-cells.
pub fn two_category_a_a2() -> TwoCategoryPresentation {
    let cat = CategoryPresentation {
        objects: vec![obj("X"), obj("Y"), obj("Z")],
        morphisms: vec![
            decl("id_X", "X", "X"),
            decl("id_Y", "Y", "Y"),
            decl("id_Z", "Z", "Z"),
            decl("a", "X", "Y"),
            decl("a2", "X", "Y"),
            decl("b", "Y", "Z"),
            decl("ab", "X", "Z"),
            decl("a2b", "X", "Z"),
        ],
        identity: [("X", "id_X"), ("Y", "id_Y"), ("Z", "id_Z")]
            .map(|(o, a)| (obj(o), arr(a)))
            .into(),
        composition: unit_laws(
            &[("X", "id_X"), ("Y", "id_Y"), ("Z", "id_Z")],
            &[
                ("a", "X", "Y"),
                ("a2", "X", "Y"),
                ("b", "Y", "Z"),
                ("ab", "X", "Z"),
                ("a2b", "X", "Z"),
            ],
            &[("a", "b", "ab"), ("a2", "b", "a2b")],
        ),
    };
    TwoCategoryPresentation::thin(&cat, &[vec![arr("a"), arr("a2")], vec![arr("ab"), arr("a2b")]]).expect("fixture")
}

fn unit_laws(ids: &[(&str, &str)], ms: &[(&str, &str, &str)], extra: &[(&str, &str, &str)]) -> Vec<BinaryEntry> {
    let id_of: BTreeMap<&str, &str> = ids.iter().copied().collect();
    let mut out: Vec<BinaryEntry> = ids.iter().map(|(_, i)| entry(i, i, i)).collect();
    for (m, d, c) in ms {
        out.push(entry(id_of[d], m, m));
        out.push(entry(m, id_of[c], m));
    }
    out.extend(extra.iter().map(|(l, r, o)| entry(l, r, o)));
    out
}

/// The strict 2-category [`two_category_a_a2`] as a weak folded category,
/// cut at tower depth 1.
pub fn fix_2cat() -> Presentation {
    let o = from_strict_2category(&two_category_a_a2()).expect("fixture");
    truncate_oracle(&o, TruncateOptions::depth(1)).expect("fixture")
}

/// One vertex `v` with a loop `l`.
pub fn loop_graph() -> GraphData {
    GraphData {
        vertices: vec![obj("v")],
        edges: vec![decl("l", "v", "v")],
    }
}

/// The free category on [`loop_graph`], paths up to length 3, tower depth 1.
pub fn fix_loop() -> Presentation {
    let o = free_strict_on_graph(&loop_graph()).expect("fixture");
    let opts = TruncateOptions {
        path_budget: 3,
        ..TruncateOptions::depth(1)
    };
    truncate_oracle(&o, opts).expect("fixture")
}

/// All named fixtures.
pub fn all() -> Vec<(&'static str, Presentation)> {
    vec![
        ("fix-one", fix_one()),
        ("fix-iso", fix_iso()),
        ("fix-par", fix_par()),
        ("fix-2cat", fix_2cat()),
        ("fix-loop", fix_loop()),
    ]
}

/// The preorder on `0..n` generated by `edges`, as a thin category with
/// objects `p0, p1, ...` and morphisms `p0<p1` (`p0<p0` is the identity).
#[allow(clippy::needless_range_loop)]
pub fn preorder(n: usize, edges: &[(usize, usize)]) -> CategoryPresentation {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j) in edges {
        if i < n && j < n {
            le[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let o = |i: usize| obj(&format!("p{i}"));
    let m = |i: usize, j: usize| arr(&format!("p{i}<p{j}"));
    let mut morphisms = Vec::new();
    let mut composition = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !le[i][j] {
                continue;
            }
            morphisms.push(ArrowDecl {
                id: m(i, j),
                dom: o(i),
                cod: o(j),
            });
            for k in 0..n {
                if le[j][k] {
                    composition.push(BinaryEntry {
                        left: m(i, j),
                        right: m(j, k),
                        out: m(i, k),
                    });
                }
            }
        }
    }
    CategoryPresentation {
        objects: (0..n).map(o).collect(),
        morphisms,
        identity: (0..n).map(|i| (o(i), m(i, i))).collect(),
        composition,
    }
}

/// The cyclic group of order `n` as a one-object category with morphisms
/// `g0` (the identity) to `g{n-1}`.
pub fn cyclic_group(n: usize) -> CategoryPresentation {
    let n = n.max(1);
    let g = |i: usize| arr(&format!("g{i}"));
    CategoryPresentation {
        objects: vec![obj("*")],
        morphisms: (0..n)
            .map(|i| ArrowDecl {
                id: g(i),
                dom: obj("*"),
                cod: obj("*"),
            })
            .collect(),
        identity: [(obj("*"), g(0))].into(),
        composition: (0..n)
            .flat_map(|i| {
                (0..n).map(move |j| BinaryEntry {
                    left: g(i),
                    right: g(j),
                    out: g((i + j) % n),
                })
            })
            .collect(),
    }
}

/// A small random finite category: a preorder on at most four objects or a
/// cyclic group of order at most four.
pub fn random_category(seed: u64) -> CategoryPresentation {
    let mut rng = StdRng::seed_from_u64(seed);
    if rng.gen_bool(0.25) {
        return cyclic_group(rng.gen_range(1..=4));
    }
    let n = rng.gen_range(1..=4);
    let edges: Vec<(usize, usize)> = (0..rng.gen_range(0..=n + 1))
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    preorder(n, &edges)
}

/// A random valid presentation with at most `max_objects` objects: either a
/// truncated [`random_category`] or a [`permutation`] presentation.
pub fn random_presentation(seed: u64, max_objects: usize) -> Presentation {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        if rng.gen_bool(0.2) {
            let mut perm: Vec<usize> = (0..rng.gen_range(1..=max_objects.clamp(1, 6))).collect();
            perm.shuffle(&mut rng);
            return permutation(&perm);
        }
        let cat = random_category(rng.gen());
        let depth = rng.gen_range(0..=1);
        let size = cat.objects.len() + cat.morphisms.len() * (depth + 1);
        if size <= max_objects {
            return truncated(&cat, depth).expect("random category truncates");
        }
    }
}

/// A named single-entry mutation of a fixture.
#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub base: &'static str,
    pub mutation: Mutation,
}

impl CatalogueEntry {
    pub fn apply(&self) -> crate::error::Result<Presentation> {
        let p = match self.base {
            "fix-iso" => fix_iso(),
            "fix-2cat" => fix_2cat(),
            other => unreachable!("catalogue base {other}"),
        };
        mutate_presentation(&p, &self.mutation)
    }
}

fn key(base: &str, arrows: &[&str], a: usize, b: usize) -> ThetaKeyData {
    ThetaKeyData {
        base: obj(base),
        arrows: arrows.iter().map(|a| arr(a)).collect(),
        a,
        b,
    }
}

/// Twelve single-entry mutations of FIX-ISO and FIX-2CAT, each of which
/// some validator must notice.
pub fn mutation_catalogue() -> Vec<CatalogueEntry> {
    let retarget = |a: &str, o: &str| Mutation::RetargetJ {
        arrow: arr(a),
        object: obj(o),
    };
    let wrong_cert = |p: &Presentation, at: &str| refl_cert(p, &obj(at)).expect("fixture");
    let iso = fix_iso();
    let two = fix_2cat();
    let e = |name, base, mutation| CatalogueEntry { name, base, mutation };
    vec![
        e("iso-retarget-u", "fix-iso", retarget("u", "<v,0>")),
        e("iso-retarget-tower", "fix-iso", retarget("1<u,0>", "<v,1>")),
        e(
            "iso-rewire-uv",
            "fix-iso",
            Mutation::RewireBcomp {
                left: arr("u"),
                right: arr("v"),
                out: arr("u"),
            },
        ),
        e(
            "iso-retype-u",
            "fix-iso",
            Mutation::RetypeArrow {
                arrow: arr("u"),
                dom: obj("Y"),
                cod: obj("X"),
            },
        ),
        e(
            "iso-drop-theta",
            "fix-iso",
            Mutation::DropTheta {
                key: key("X", &["u", "v"], 0, 2),
            },
        ),
        e(
            "iso-wrong-theta",
            "fix-iso",
            Mutation::SetTheta {
                key: key("X", &["u", "v"], 0, 2),
                cert: wrong_cert(&iso, "<u,0>"),
            },
        ),
        e(
            "2cat-rewire-ab",
            "fix-2cat",
            Mutation::RewireBcomp {
                left: arr("a"),
                right: arr("b"),
                out: arr("a2b"),
            },
        ),
        e(
            "2cat-rewire-whisker",
            "fix-2cat",
            Mutation::RewireHcomp {
                left: arr("a~a2"),
                right: arr("b~b"),
                out: arr("a2b~ab"),
            },
        ),
        e("2cat-retarget-cell", "fix-2cat", retarget("a~a2", "<a2~a,0>")),
        e(
            "2cat-retype-b",
            "fix-2cat",
            Mutation::RetypeArrow {
                arrow: arr("b"),
                dom: obj("X"),
                cod: obj("Z"),
            },
        ),
        e(
            "2cat-drop-theta",
            "fix-2cat",
            Mutation::DropTheta {
                key: key("X", &["a", "b"], 0, 2),
            },
        ),
        e(
            "2cat-wrong-theta",
            "fix-2cat",
            Mutation::SetTheta {
                key: key("X", &["a", "b"], 0, 2),
                cert: wrong_cert(&two, "<a,0>"),
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(fix_iso().num_objects(), 14);
        assert_eq!(fix_one().num_arrows(), 1);
        assert_eq!(mutation_catalogue().len(), 12);
    }

    #[test]
    fn generators_are_categories() {
        preorder(4, &[(0, 1), (1, 2), (3, 2)]).validate().unwrap();
        cyclic_group(5).validate().unwrap();
        for m in mutation_catalogue() {
            m.apply().unwrap();
        }
    }

    #[test]
    fn random_presentations_respect_the_bound() {
        for seed in 0..40 {
            let p = random_presentation(seed, 20);
            assert!(p.num_objects() <= 20, "seed {seed}");
            assert!(!crate::validate_presentation(&p).has_failures(), "seed {seed}");
            random_category(seed).validate().unwrap();
        }
    }

    #[test]
    fn permutation_has_empty_frontier() {
        let p = permutation(&[1, 2, 0]);
        assert!(p.frontier().is_empty());
        assert!(!crate::validate_presentation(&p).has_failures());
    }
}
