//! Automorphisms of a graph product, represented by generator images.
//!
//! The generating families are graph symmetries, vertex isomorphisms,
//! partial conjugations and transvections. Every constructor validates its
//! legality conditions, checks that the images satisfy the defining
//! relations (vertex orders and edge commutations), and records explicit
//! inverse images so that composition never needs a general inversion
//! solver.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{CyclicOrder, DefiningGraph, VertexId, VertexSet};
use crate::words::{enumerate_ball_restricted, GroupWord, Syllable};

/// A partial conjugation descriptor: a vertex together with one connected
/// component of the graph minus its star.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcDescriptor {
    pub vertex: VertexId,
    pub component: VertexSet,
}

impl PcDescriptor {
    /// Deterministic name `p_<v>_<least vertex of C>`.
    pub fn name(&self, g: &DefiningGraph) -> String {
        let least = self.component.iter().next().expect("component is nonempty");
        format!("p_{}_{}", g.name(self.vertex), g.name(*least))
    }
}

/// All partial conjugation descriptors of a graph, sorted by vertex and
/// then by least component vertex.
pub fn all_partial_conjugations(g: &DefiningGraph) -> Vec<PcDescriptor> {
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        for component in g.components_outside_star(v) {
            out.push(PcDescriptor { vertex: v, component });
        }
    }
    out.sort();
    out
}

#[derive(Debug, Error)]
pub enum AutError {
    #[error("`{component:?}` is not a connected component of the graph minus st({vertex})")]
    NotAComponent { vertex: String, component: Vec<String> },
    #[error("vertex isomorphism exponent {k} is not invertible mod {order} at `{vertex}`")]
    IsoNotInvertible { vertex: String, k: i64, order: u32 },
    #[error("vertex isomorphism exponent {k} must be 1 or -1 at infinite-order vertex `{vertex}`")]
    IsoInfiniteExponent { vertex: String, k: i64 },
    #[error("permutation is not a bijection on the vertices")]
    SymmetryNotBijective,
    #[error("permutation does not preserve adjacency at pair ({a}, {b})")]
    SymmetryAdjacency { a: String, b: String },
    #[error("permutation does not preserve the vertex order at `{vertex}`")]
    SymmetryOrder { vertex: String },
    #[error("transvection requires distinct vertices")]
    TransvectionSameVertex,
    #[error("transvection with |{v}| infinite requires k = 1, got {k}")]
    TransvectionInfiniteExponent { v: String, k: i64 },
    #[error("transvection with |{v}| infinite requires lk({v}) within st({w})")]
    TransvectionLinkStar { v: String, w: String },
    #[error("transvection orders |{v}| = {ov}, |{w}| = {ow} are not powers of one prime")]
    TransvectionOrders { v: String, w: String, ov: String, ow: String },
    #[error("transvection with |{v}| = p^i, |{w}| = p^j requires k = max(1, p^(j-i)) = {expected}, got {k}")]
    TransvectionExponent { v: String, w: String, expected: i64, k: i64 },
    #[error("transvection with finite orders requires st({v}) within st({w})")]
    TransvectionStarStar { v: String, w: String },
    #[error("images break the defining relations: {detail}")]
    RelationViolation { detail: String },
}

/// Which side a transvection multiplies on: `v -> v w^k` or `v -> w^k v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// An automorphism given by the images of all vertex generators, together
/// with the images under its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    token: u64,
    images: Vec<GroupWord>,
    inverse_images: Vec<GroupWord>,
}

/// Outcome of the bounded inner-ness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerVerdict {
    /// A conjugating element realizing the automorphism.
    Found(GroupWord),
    /// Certified: the search space provably contained every possible
    /// conjugator and none worked.
    NotFound,
    /// The bounded search was not exhaustive; no verdict.
    Inconclusive,
}

impl Automorphism {
    fn assemble(
        g: &DefiningGraph,
        images: Vec<GroupWord>,
        inverse_images: Vec<GroupWord>,
    ) -> Result<Self, AutError> {
        let aut = Automorphism {
            token: g.token(),
            images,
            inverse_images,
        };
        aut.check_relations(g)?;
        debug_assert!(aut.check_inverse(g));
        Ok(aut)
    }

    /// Verifies that the images satisfy every defining relation: the image
    /// of a finite-order vertex has that order, and images of adjacent
    /// vertices commute.
    fn check_relations(&self, g: &DefiningGraph) -> Result<(), AutError> {
        for v in g.vertex_ids() {
            if let CyclicOrder::Finite(n) = g.order(v) {
                if !g.word_pow(&self.images[v.index()], n as i64).is_identity() {
                    return Err(AutError::RelationViolation {
                        detail: format!("image of {} does not have order {}", g.name(v), n),
                    });
                }
            }
        }
        for (u, v) in g.edges() {
            let a = &self.images[u.index()];
            let b = &self.images[v.index()];
            if g.multiply(a, b) != g.multiply(b, a) {
                return Err(AutError::RelationViolation {
                    detail: format!("images of edge ({}, {}) do not commute", g.name(u), g.name(v)),
                });
            }
        }
        Ok(())
    }

    fn check_inverse(&self, g: &DefiningGraph) -> bool {
        g.vertex_ids().all(|v| {
            let round = self.apply_images(g, &self.images, &self.inverse_images[v.index()]);
            round == g.generator(v)
        })
    }

    pub fn identity(g: &DefiningGraph) -> Self {
        let images: Vec<GroupWord> = g.vertex_ids().map(|v| g.generator(v)).collect();
        Automorphism {
            token: g.token(),
            images: images.clone(),
            inverse_images: images,
        }
    }

    /// Conjugates the generators of one component of the graph minus
    /// `st(v)` by `v`, fixing every other generator.
    pub fn partial_conjugation(
        g: &DefiningGraph,
        v: VertexId,
        component: &VertexSet,
    ) -> Result<Self, AutError> {
        if !g.components_outside_star(v).contains(component) {
            return Err(AutError::NotAComponent {
                vertex: g.name(v).to_string(),
                component: component.iter().map(|&u| g.name(u).to_string()).collect(),
            });
        }
        let conj = g.generator(v);
        let conj_inv = g.invert(&conj);
        let mut images = Vec::new();
        let mut inverse_images = Vec::new();
        for x in g.vertex_ids() {
            let gen = g.generator(x);
            if component.contains(&x) {
                images.push(g.conjugate(&conj, &gen));
                inverse_images.push(g.conjugate(&conj_inv, &gen));
            } else {
                images.push(gen.clone());
                inverse_images.push(gen);
            }
        }
        Self::assemble(g, images, inverse_images)
    }

    pub fn from_descriptor(g: &DefiningGraph, pc: &PcDescriptor) -> Result<Self, AutError> {
        Self::partial_conjugation(g, pc.vertex, &pc.component)
    }

    /// Conjugation of the whole group by `word`.
    pub fn inner(g: &DefiningGraph, word: &GroupWord) -> Self {
        let inv = g.invert(word);
        let images = g
            .vertex_ids()
            .map(|x| g.conjugate(word, &g.generator(x)))
            .collect();
        let inverse_images = g
            .vertex_ids()
            .map(|x| g.conjugate(&inv, &g.generator(x)))
            .collect();
        Self::assemble(g, images, inverse_images).expect("conjugation preserves relations")
    }

    /// `v -> v^k` on one vertex group, identity elsewhere. For finite order
    /// `n` this needs `gcd(k, n) = 1`; for infinite order `k` must be `1`
    /// or `-1`.
    pub fn vertex_iso(g: &DefiningGraph, v: VertexId, k: i64) -> Result<Self, AutError> {
        let k_inv = match g.order(v) {
            CyclicOrder::Finite(n) => {
                let k_mod = k.rem_euclid(n as i64);
                match mod_inverse(k_mod, n as i64) {
                    Some(inv) => inv,
                    None => {
                        return Err(AutError::IsoNotInvertible {
                            vertex: g.name(v).to_string(),
                            k,
                            order: n,
                        })
                    }
                }
            }
            CyclicOrder::Infinite => {
                if k == 1 || k == -1 {
                    k
                } else {
                    return Err(AutError::IsoInfiniteExponent {
                        vertex: g.name(v).to_string(),
                        k,
                    });
                }
            }
        };
        let mut images = Vec::new();
        let mut inverse_images = Vec::new();
        for x in g.vertex_ids() {
            if x == v {
                images.push(g.normalize(&[(v, k)]));
                inverse_images.push(g.normalize(&[(v, k_inv)]));
            } else {
                images.push(g.generator(x));
                inverse_images.push(g.generator(x));
            }
        }
        Self::assemble(g, images, inverse_images)
    }

    /// Permutation of the generators induced by a symmetry of the graph;
    /// `perm[i]` is the image of vertex `i`. The permutation must preserve
    /// adjacency and vertex orders.
    pub fn graph_symmetry(g: &DefiningGraph, perm: &[VertexId]) -> Result<Self, AutError> {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(AutError::SymmetryNotBijective);
        }
        for &p in perm {
            if p.index() >= n || seen[p.index()] {
                return Err(AutError::SymmetryNotBijective);
            }
            seen[p.index()] = true;
        }
        for v in g.vertex_ids() {
            if g.order(v) != g.order(perm[v.index()]) {
                return Err(AutError::SymmetryOrder {
                    vertex: g.name(v).to_string(),
                });
            }
            for w in g.vertex_ids() {
                if v < w
                    && g.adjacent(v, w) != g.adjacent(perm[v.index()], perm[w.index()])
                {
                    return Err(AutError::SymmetryAdjacency {
                        a: g.name(v).to_string(),
                        b: g.name(w).to_string(),
                    });
                }
            }
        }
        let mut inverse_perm = vec![VertexId(0); n];
        for v in g.vertex_ids() {
            inverse_perm[perm[v.index()].index()] = v;
        }
        let images = perm.iter().map(|&p| g.generator(p)).collect();
        let inverse_images = inverse_perm.iter().map(|&p| g.generator(p)).collect();
        Self::assemble(g, images, inverse_images)
    }

    /// `v -> v w^k` (or `w^k v`), all other generators fixed.
    ///
    /// Legal when either `|v|` is infinite, `k = 1` and `lk(v)` lies in
    /// `st(w)`, or `|v| = p^i` and `|w| = p^j` are powers of the same
    /// prime, `k = max(1, p^(j-i))` and `st(v)` lies in `st(w)`.
    pub fn transvection(
        g: &DefiningGraph,
        v: VertexId,
        w: VertexId,
        side: Side,
        k: i64,
    ) -> Result<Self, AutError> {
        if v == w {
            return Err(AutError::TransvectionSameVertex);
        }
        match (g.order(v), g.order(w)) {
            (CyclicOrder::Infinite, _) => {
                if k != 1 {
                    return Err(AutError::TransvectionInfiniteExponent {
                        v: g.name(v).to_string(),
                        k,
                    });
                }
                let star_w = g.star(w);
                if !g.link(v).iter().all(|u| star_w.contains(u)) {
                    return Err(AutError::TransvectionLinkStar {
                        v: g.name(v).to_string(),
                        w: g.name(w).to_string(),
                    });
                }
            }
            (CyclicOrder::Finite(ov), CyclicOrder::Finite(ow)) => {
                let expected = match prime_power_exponent_gap(ov, ow) {
                    Some(gap) => gap,
                    None => {
                        return Err(AutError::TransvectionOrders {
                            v: g.name(v).to_string(),
                            w: g.name(w).to_string(),
                            ov: ov.to_string(),
                            ow: ow.to_string(),
                        })
                    }
                };
                if k != expected {
                    return Err(AutError::TransvectionExponent {
                        v: g.name(v).to_string(),
                        w: g.name(w).to_string(),
                        expected,
                        k,
                    });
                }
                let star_w = g.star(w);
                if !g.star(v).iter().all(|u| star_w.contains(u)) {
                    return Err(AutError::TransvectionStarStar {
                        v: g.name(v).to_string(),
                        w: g.name(w).to_string(),
                    });
                }
            }
            (CyclicOrder::Finite(ov), CyclicOrder::Infinite) => {
                return Err(AutError::TransvectionOrders {
                    v: g.name(v).to_string(),
                    w: g.name(w).to_string(),
                    ov: ov.to_string(),
                    ow: "inf".to_string(),
                });
            }
        }
        let mut images = Vec::new();
        let mut inverse_images = Vec::new();
        for x in g.vertex_ids() {
            if x == v {
                let (image, inv_image) = match side {
                    Side::Right => (
                        g.normalize(&[(v, 1), (w, k)]),
                        g.normalize(&[(v, 1), (w, -k)]),
                    ),
                    Side::Left => (
                        g.normalize(&[(w, k), (v, 1)]),
                        g.normalize(&[(w, -k), (v, 1)]),
                    ),
                };
                images.push(image);
                inverse_images.push(inv_image);
            } else {
                images.push(g.generator(x));
                inverse_images.push(g.generator(x));
            }
        }
        Self::assemble(g, images, inverse_images)
    }

    pub fn image_of(&self, v: VertexId) -> &GroupWord {
        &self.images[v.index()]
    }

    fn apply_images(&self, g: &DefiningGraph, images: &[GroupWord], x: &GroupWord) -> GroupWord {
        let mut out = g.identity_word();
        for s in x.syllables() {
            let image = &images[s.vertex.index()];
            out = g.multiply(&out, &g.word_pow(image, s.exponent));
        }
        out
    }

    /// Image of a word: substitute generator images and normalize. This is
    /// a homomorphism: `apply(x * y) = apply(x) * apply(y)`.
    pub fn apply(&self, g: &DefiningGraph, x: &GroupWord) -> GroupWord {
        assert_eq!(self.token, g.token(), "automorphism over a different graph");
        self.apply_images(g, &self.images, x)
    }

    /// The inverse automorphism; inverse images were recorded at
    /// construction, so this is a swap.
    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            token: self.token,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// Composition `self . other`: first `other`, then `self`.
    pub fn compose(&self, g: &DefiningGraph, other: &Automorphism) -> Automorphism {
        assert_eq!(self.token, other.token, "automorphisms over different graphs");
        let images = other
            .images
            .iter()
            .map(|img| self.apply_images(g, &self.images, img))
            .collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|img| other.apply_images(g, &other.inverse_images, img))
            .collect();
        Automorphism {
            token: self.token,
            images,
            inverse_images,
        }
    }

    pub fn pow(&self, g: &DefiningGraph, e: u32) -> Automorphism {
        let mut out = Automorphism::identity(g);
        for _ in 0..e {
            out = out.compose(g, self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, img)| {
            img.syllables()
                == [Syllable {
                    vertex: VertexId(i as u32),
                    exponent: 1,
                }]
        })
    }

    /// Whether two automorphisms commute, decided on generator images.
    pub fn commutes(&self, g: &DefiningGraph, other: &Automorphism) -> bool {
        g.vertex_ids().all(|v| {
            self.apply(g, other.image_of(v)) == other.apply(g, self.image_of(v))
        })
    }

    /// Generators whose image differs from themselves.
    pub fn moved_generators(&self, g: &DefiningGraph) -> VertexSet {
        g.vertex_ids()
            .filter(|&v| self.images[v.index()] != g.generator(v))
            .collect()
    }

    /// Searches for a conjugating element realizing this automorphism.
    ///
    /// Any conjugator must centralize every unmoved generator, hence lie in
    /// the parabolic subgroup on `T`, the intersection of their stars. When
    /// `G_T` is finite (a clique of finite-order vertices) it is enumerated
    /// completely and the verdict is exact; otherwise the ball of radius
    /// `radius` in `G_T` (infinite-order exponents bounded by `exp_bound`)
    /// is searched and a miss is reported as [`InnerVerdict::Inconclusive`].
    pub fn is_inner(&self, g: &DefiningGraph, radius: usize, exp_bound: i64) -> InnerVerdict {
        if self.is_identity() {
            return InnerVerdict::Found(g.identity_word());
        }
        let moved = self.moved_generators(g);
        let mut parabolic: VertexSet = g.vertex_ids().collect();
        for y in g.vertex_ids() {
            if !moved.contains(&y) {
                let star = g.star(y);
                parabolic.retain(|u| star.contains(u));
            }
        }

        let is_finite_clique = parabolic.iter().all(|&t| g.order(t).is_finite())
            && parabolic
                .iter()
                .all(|&a| parabolic.iter().all(|&b| a == b || g.adjacent(a, b)));
        let group_size: Option<u64> = if is_finite_clique {
            parabolic.iter().try_fold(1u64, |acc, &t| match g.order(t) {
                CyclicOrder::Finite(n) => acc.checked_mul(n as u64).filter(|&s| s <= 1_000_000),
                CyclicOrder::Infinite => None,
            })
        } else {
            None
        };

        if group_size.is_some() {
            // G_T is finite abelian: enumerate it completely.
            for cand in finite_clique_elements(g, &parabolic) {
                if self.matches_conjugation(g, &cand) {
                    return InnerVerdict::Found(cand);
                }
            }
            InnerVerdict::NotFound
        } else {
            for cand in enumerate_ball_restricted(g, &parabolic, radius, exp_bound) {
                if self.matches_conjugation(g, &cand) {
                    return InnerVerdict::Found(cand);
                }
            }
            InnerVerdict::Inconclusive
        }
    }

    fn matches_conjugation(&self, g: &DefiningGraph, cand: &GroupWord) -> bool {
        let inv = g.invert(cand);
        g.vertex_ids().all(|x| {
            let conj = g.multiply(&g.multiply(cand, &g.generator(x)), &inv);
            conj == self.images[x.index()]
        })
    }

    /// Text format: one `v -> <word>` line per generator in declaration
    /// order.
    pub fn format(&self, g: &DefiningGraph) -> String {
        let mut out = String::new();
        for v in g.vertex_ids() {
            writeln!(out, "{} -> {}", g.name(v), g.format_word(&self.images[v.index()])).unwrap();
        }
        out
    }
}

/// All elements of the finite abelian parabolic on a clique `T`, as
/// canonical words, in lexicographic exponent order.
fn finite_clique_elements(g: &DefiningGraph, clique: &VertexSet) -> Vec<GroupWord> {
    let vertices: Vec<VertexId> = clique.iter().copied().collect();
    let orders: Vec<i64> = vertices
        .iter()
        .map(|&v| match g.order(v) {
            CyclicOrder::Finite(n) => n as i64,
            CyclicOrder::Infinite => unreachable!("caller checked finiteness"),
        })
        .collect();
    let mut exps = vec![0i64; vertices.len()];
    let mut out = Vec::new();
    loop {
        let raw: Vec<(VertexId, i64)> = vertices
            .iter()
            .zip(&exps)
            .filter(|&(_, &e)| e != 0)
            .map(|(&v, &e)| (v, e))
            .collect();
        out.push(g.normalize(&raw));
        let mut i = 0;
        loop {
            if i == vertices.len() {
                return out;
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn mod_inverse(k: i64, n: i64) -> Option<i64> {
    if gcd(k, n) != 1 {
        return None;
    }
    (1..n).find(|&x| (k * x).rem_euclid(n) == 1)
}

/// For orders `p^i` and `p^j` of the same prime, the legal transvection
/// exponent `max(1, p^(j-i))`; `None` when the orders are not powers of a
/// common prime.
fn prime_power_exponent_gap(ov: u32, ow: u32) -> Option<i64> {
    let (pv, iv) = prime_power_parts(ov)?;
    let (pw, iw) = prime_power_parts(ow)?;
    if pv != pw {
        return None;
    }
    if iw > iv {
        Some((pv as i64).pow(iw - iv))
    } else {
        Some(1)
    }
}

fn prime_power_parts(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            return (m == 1).then_some((d, e));
        }
        d += 1;
    }
    Some((n, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DefiningGraph;

    fn path6() -> DefiningGraph {
        let vertices: Vec<(String, CyclicOrder)> = (1..=6)
            .map(|i| (format!("v{i}"), CyclicOrder::Finite(2)))
            .collect();
        let edges: Vec<(String, String)> = (1..6)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        DefiningGraph::new(vertices, &edges).unwrap()
    }

    fn tripod_plus() -> DefiningGraph {
        DefiningGraph::parse(
            "vertex c order 2\nvertex x order 2\nvertex y order 2\nvertex z order 2\nvertex x2 order 2\nedge c x\nedge c y\nedge c z\nedge x x2",
        )
        .unwrap()
    }

    fn pc(g: &DefiningGraph, v: &str, members: &[&str]) -> Automorphism {
        let vid = g.vertex_id(v).unwrap();
        let comp: VertexSet = members.iter().map(|m| g.vertex_id(m).unwrap()).collect();
        Automorphism::partial_conjugation(g, vid, &comp).unwrap()
    }

    #[test]
    fn partial_conjugation_images_on_path() {
        let g = path6();
        let a = pc(&g, "v3", &["v1"]);
        let v1 = g.vertex_id("v1").unwrap();
        assert_eq!(g.format_word(a.image_of(v1)), "v3 v1 v3");
        for name in ["v2", "v3", "v4", "v5", "v6"] {
            let v = g.vertex_id(name).unwrap();
            assert_eq!(a.image_of(v), &g.generator(v));
        }
    }

    #[test]
    fn partial_conjugation_rejects_non_component() {
        let g = path6();
        let v3 = g.vertex_id("v3").unwrap();
        let bogus: VertexSet = [g.vertex_id("v5").unwrap()].into_iter().collect();
        assert!(matches!(
            Automorphism::partial_conjugation(&g, v3, &bogus),
            Err(AutError::NotAComponent { .. })
        ));
    }

    #[test]
    fn vertex_iso_identity_and_inverse() {
        let g = DefiningGraph::parse("vertex v order 5").unwrap();
        let v = g.vertex_id("v").unwrap();
        assert!(Automorphism::vertex_iso(&g, v, 1).unwrap().is_identity());
        let a = Automorphism::vertex_iso(&g, v, 2).unwrap();
        assert!(a.compose(&g, &a.inverse()).is_identity());
        assert!(matches!(
            Automorphism::vertex_iso(&g, v, 5),
            Err(AutError::IsoNotInvertible { .. })
        ));
    }

    #[test]
    fn transvection_prime_power_exponent() {
        let g = DefiningGraph::parse("vertex v order 2\nvertex w order 4\nedge v w").unwrap();
        let v = g.vertex_id("v").unwrap();
        let w = g.vertex_id("w").unwrap();
        // |v| = 2^1, |w| = 2^2: the only legal exponent is 2.
        assert!(matches!(
            Automorphism::transvection(&g, v, w, Side::Right, 1),
            Err(AutError::TransvectionExponent { expected: 2, .. })
        ));
        let a = Automorphism::transvection(&g, v, w, Side::Right, 2).unwrap();
        assert_eq!(g.format_word(a.image_of(v)), "v w^2");
        assert!(a.compose(&g, &a.inverse()).is_identity());
    }

    #[test]
    fn transvection_infinite_requires_link_in_star() {
        let g = DefiningGraph::parse(
            "vertex v order inf\nvertex w order inf\nvertex u order inf\nedge v u\nedge w u",
        )
        .unwrap();
        let v = g.vertex_id("v").unwrap();
        let w = g.vertex_id("w").unwrap();
        let a = Automorphism::transvection(&g, v, w, Side::Left, 1).unwrap();
        assert_eq!(g.format_word(a.image_of(v)), "w v");

        // Breaking the link condition: add a neighbor of v outside st(w).
        let h = DefiningGraph::parse(
            "vertex v order inf\nvertex w order inf\nvertex u order inf\nedge v u",
        )
        .unwrap();
        let hv = h.vertex_id("v").unwrap();
        let hw = h.vertex_id("w").unwrap();
        assert!(matches!(
            Automorphism::transvection(&h, hv, hw, Side::Right, 1),
            Err(AutError::TransvectionLinkStar { .. })
        ));
    }

    #[test]
    fn graph_symmetry_validation() {
        let g = path6();
        let flip: Vec<VertexId> = (0..6).rev().map(VertexId).collect();
        let a = Automorphism::graph_symmetry(&g, &flip).unwrap();
        let v1 = g.vertex_id("v1").unwrap();
        assert_eq!(g.format_word(a.image_of(v1)), "v6");
        assert!(a.compose(&g, &a).is_identity());

        let bad: Vec<VertexId> = vec![
            VertexId(1),
            VertexId(0),
            VertexId(2),
            VertexId(3),
            VertexId(4),
            VertexId(5),
        ];
        assert!(matches!(
            Automorphism::graph_symmetry(&g, &bad),
            Err(AutError::SymmetryAdjacency { .. })
        ));
    }

    #[test]
    fn apply_is_a_homomorphism() {
        let g = path6();
        let a = pc(&g, "v1", &["v3", "v4", "v5", "v6"]);
        let x = g.parse_word("v2 v4 v6").unwrap();
        let y = g.parse_word("v3 v1").unwrap();
        let xy = g.multiply(&x, &y);
        assert_eq!(
            a.apply(&g, &xy),
            g.multiply(&a.apply(&g, &x), &a.apply(&g, &y))
        );
        assert_eq!(Automorphism::identity(&g).apply(&g, &x), x);
    }

    #[test]
    fn composition_order_on_distant_pair() {
        // v = v1, w = v3 on the six-path: the component of v3 outside
        // st(v1) and the component of v1 outside st(v3).
        let g = path6();
        let a = pc(&g, "v1", &["v3", "v4", "v5", "v6"]); // conjugates C0 by v1
        let b = pc(&g, "v3", &["v1"]); // conjugates D0 by v3
        let v1 = g.vertex_id("v1").unwrap();

        let ab = a.compose(&g, &b);
        assert_eq!(g.format_word(&ab.apply(&g, &g.generator(v1))), "v1 v3 v1 v3 v1");

        let ba = b.compose(&g, &a);
        assert_eq!(g.format_word(&ba.apply(&g, &g.generator(v1))), "v3 v1 v3");

        assert!(!a.commutes(&g, &b));
    }

    #[test]
    fn same_vertex_partial_conjugations_commute() {
        let g = path6();
        let a = pc(&g, "v3", &["v1"]);
        let b = pc(&g, "v3", &["v5", "v6"]);
        assert!(a.commutes(&g, &b));
        assert_eq!(a.compose(&g, &b), b.compose(&g, &a));
    }

    #[test]
    fn distant_disjoint_components_commute() {
        let g = path6();
        let a = pc(&g, "v1", &["v3", "v4", "v5", "v6"]);
        let b = pc(&g, "v4", &["v6"]);
        assert!(a.commutes(&g, &b));
    }

    #[test]
    fn partial_conjugation_has_vertex_order() {
        let g = DefiningGraph::parse(
            "vertex a order 3\nvertex b order 2\nvertex c order 2\nedge b c",
        )
        .unwrap();
        let a = pc(&g, "a", &["b", "c"]);
        assert!(!a.is_identity());
        assert!(!a.pow(&g, 2).is_identity());
        assert!(a.pow(&g, 3).is_identity());
    }

    #[test]
    fn inner_search_finds_vertex_conjugator() {
        let g = path6();
        let v3 = g.vertex_id("v3").unwrap();
        let full = pc(&g, "v3", &["v1"]).compose(&g, &pc(&g, "v3", &["v5", "v6"]));
        match full.is_inner(&g, 4, 2) {
            InnerVerdict::Found(conj) => assert_eq!(conj, g.generator(v3)),
            other => panic!("expected Found(v3), got {other:?}"),
        }
        match Automorphism::identity(&g).is_inner(&g, 4, 2) {
            InnerVerdict::Found(conj) => assert!(conj.is_identity()),
            other => panic!("expected Found(identity), got {other:?}"),
        }
    }

    #[test]
    fn sil_commutator_is_certified_not_inner() {
        let g = tripod_plus();
        let a = pc(&g, "x", &["z"]);
        let b = pc(&g, "y", &["z"]);
        let comm = a
            .compose(&g, &b)
            .compose(&g, &a.inverse())
            .compose(&g, &b.inverse());
        assert!(!comm.is_identity());
        assert_eq!(comm.is_inner(&g, 4, 2), InnerVerdict::NotFound);
    }

    #[test]
    fn descriptor_listing_is_sorted() {
        let g = path6();
        let pcs = all_partial_conjugations(&g);
        assert_eq!(pcs.len(), 8);
        let names: Vec<String> = pcs.iter().map(|d| d.name(&g)).collect();
        assert_eq!(
            names,
            vec![
                "p_v1_v3", "p_v2_v4", "p_v3_v1", "p_v3_v5", "p_v4_v1", "p_v4_v6", "p_v5_v1",
                "p_v6_v1"
            ]
        );
    }

    #[test]
    fn automorphism_text_format() {
        let g = DefiningGraph::parse("vertex a order 2\nvertex b order 2").unwrap();
        let a = pc(&g, "a", &["b"]);
        assert_eq!(a.format(&g), "a -> a\nb -> a b a\n");
    }
}
