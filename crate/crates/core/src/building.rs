//! Finite combinatorial balls of the right-angled building of a graph
//! product.
//!
//! Chambers are canonical coset representatives of the fundamental domain;
//! two chambers are `v`-equivalent when they differ by a right factor in
//! the vertex group of `v`. The Coxeter-valued distance replaces every
//! syllable of the difference by the corresponding order-2 generator.
//! Poset vertices are cosets of spherical (clique) parabolic subgroups;
//! comparable pairs span combinatorial cubes, and links of interior poset
//! vertices are checked to be flag complexes.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::aut::{AutError, Automorphism};
use crate::graph::{CyclicOrder, DefiningGraph, VertexId, VertexSet};
use crate::report::Report;
use crate::words::{enumerate_ball, oracle_least_reduced, GroupWord};

/// The right-angled Coxeter group sharing the defining graph, obtained by
/// forcing every vertex order to 2.
#[derive(Debug, Clone)]
pub struct CoxeterShadow {
    graph: DefiningGraph,
}

impl CoxeterShadow {
    pub fn new(g: &DefiningGraph) -> Self {
        let vertices: Vec<(String, CyclicOrder)> = g
            .vertex_ids()
            .map(|v| (g.name(v).to_string(), CyclicOrder::Finite(2)))
            .collect();
        let edges: Vec<(String, String)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (g.name(u).to_string(), g.name(v).to_string()))
            .collect();
        CoxeterShadow {
            graph: DefiningGraph::new(vertices, &edges).expect("shadow of a valid graph"),
        }
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    /// The syllable map: each syllable `(v, e)` of a normal form becomes
    /// the Coxeter generator of `v`. The image of a reduced word is
    /// reduced, so the length is preserved. Not a homomorphism.
    pub fn gamma(&self, word: &GroupWord) -> GroupWord {
        let raw: Vec<(VertexId, i64)> =
            word.syllables().iter().map(|s| (s.vertex, 1)).collect();
        self.graph.normalize(&raw)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildingError {
    #[error("spherical set {0:?} does not span a complete subgraph")]
    NotAClique(Vec<String>),
    #[error("gallery type is not reduced in the Coxeter shadow")]
    TypeNotReduced,
}

/// The unique minimal-length representative of the coset `x G_T`:
/// repeatedly delete a syllable of a `T`-vertex that can shuffle to the
/// right end. `T` must span a complete subgraph.
pub fn coset_rep(
    g: &DefiningGraph,
    x: &GroupWord,
    spherical: &VertexSet,
) -> Result<GroupWord, BuildingError> {
    for &a in spherical {
        for &b in spherical {
            if a < b && !g.adjacent(a, b) {
                return Err(BuildingError::NotAClique(
                    spherical.iter().map(|&v| g.name(v).to_string()).collect(),
                ));
            }
        }
    }
    let mut syllables: Vec<(VertexId, i64)> = x
        .syllables()
        .iter()
        .map(|s| (s.vertex, s.exponent))
        .collect();
    'outer: loop {
        for i in (0..syllables.len()).rev() {
            let (v, _) = syllables[i];
            if spherical.contains(&v)
                && syllables[i + 1..].iter().all(|&(u, _)| g.adjacent(u, v))
            {
                syllables.remove(i);
                let renorm = g.normalize(&syllables);
                syllables = renorm
                    .syllables()
                    .iter()
                    .map(|s| (s.vertex, s.exponent))
                    .collect();
                continue 'outer;
            }
        }
        break;
    }
    Ok(g.normalize(&syllables))
}

/// All vertex subsets spanning complete subgraphs, including the empty
/// set, in deterministic order.
pub fn spherical_subsets(g: &DefiningGraph) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = vec![VertexSet::new()];
    let mut frontier: Vec<VertexSet> = vec![VertexSet::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for clique in &frontier {
            let min_next = clique.iter().next_back().map_or(0, |v| v.0 + 1);
            for v in g.vertex_ids().filter(|v| v.0 >= min_next) {
                if clique.iter().all(|&u| g.adjacent(u, v)) {
                    let mut bigger = clique.clone();
                    bigger.insert(v);
                    next.push(bigger);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// All chambers with representatives of at most `radius` syllables, with
/// the equivalence-class structure restricted to the ball.
#[derive(Debug, Clone)]
pub struct ChamberBall {
    graph: DefiningGraph,
    shadow: CoxeterShadow,
    radius: usize,
    exp_bound: i64,
    chambers: Vec<GroupWord>,
    index: HashMap<GroupWord, usize>,
    complete: bool,
}

impl ChamberBall {
    pub fn build(g: &DefiningGraph, radius: usize, exp_bound: i64) -> Self {
        let chambers = enumerate_ball(g, radius, exp_bound);
        let index: HashMap<GroupWord, usize> = chambers
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        // The ball is the whole group when it is closed under right
        // multiplication by every generator.
        let complete = chambers.iter().all(|c| {
            g.vertex_ids().all(|v| match g.order(v) {
                CyclicOrder::Finite(n) => (1..n as i64).all(|e| {
                    index.contains_key(&g.multiply(c, &g.normalize(&[(v, e)])))
                }),
                CyclicOrder::Infinite => false,
            })
        });
        ChamberBall {
            graph: g.clone(),
            shadow: CoxeterShadow::new(g),
            radius,
            exp_bound,
            chambers,
            index,
            complete,
        }
    }

    /// Whether the ball is the entire (finite) group.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn shadow(&self) -> &CoxeterShadow {
        &self.shadow
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn exp_bound(&self) -> i64 {
        self.exp_bound
    }

    pub fn chambers(&self) -> &[GroupWord] {
        &self.chambers
    }

    pub fn contains(&self, chamber: &GroupWord) -> bool {
        self.index.contains_key(chamber)
    }

    /// Canonical key of the `v`-equivalence class of a chamber: the
    /// representative of its coset modulo the vertex group of `v`.
    pub fn s_class_key(&self, chamber: &GroupWord, v: VertexId) -> GroupWord {
        let single: VertexSet = [v].into_iter().collect();
        coset_rep(&self.graph, chamber, &single).expect("a single vertex is a clique")
    }

    /// Chambers of the ball grouped into `v`-equivalence classes.
    pub fn s_classes(&self, v: VertexId) -> BTreeMap<GroupWord, Vec<GroupWord>> {
        let mut classes: BTreeMap<GroupWord, Vec<GroupWord>> = BTreeMap::new();
        for c in &self.chambers {
            classes
                .entry(self.s_class_key(c, v))
                .or_default()
                .push(c.clone());
        }
        classes
    }

    /// Whether all members of the `v`-class with the given key fit in the
    /// ball, making the restricted class equal to the full one.
    pub fn s_class_is_complete(&self, key: &GroupWord, v: VertexId) -> bool {
        match self.graph.order(v) {
            CyclicOrder::Finite(_) => self.complete || key.len() + 1 <= self.radius,
            CyclicOrder::Infinite => false,
        }
    }

    /// Coxeter-valued distance between two chambers.
    pub fn w_distance(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        self.shadow
            .gamma(&self.graph.multiply(&self.graph.invert(a), b))
    }

    /// Whether a gallery of the given reduced type connects `a` to `b`
    /// inside the ball: consecutive chambers must be distinct and
    /// equivalent under the type's generator.
    pub fn gallery_check(
        &self,
        a: &GroupWord,
        b: &GroupWord,
        gallery_type: &[VertexId],
    ) -> Result<bool, BuildingError> {
        let raw: Vec<(VertexId, i64)> = gallery_type.iter().map(|&v| (v, 1)).collect();
        if self.shadow.graph.normalize(&raw).len() != gallery_type.len() {
            return Err(BuildingError::TypeNotReduced);
        }
        let mut current: Vec<usize> = match self.index.get(a) {
            Some(&i) => vec![i],
            None => return Ok(false),
        };
        if !self.index.contains_key(b) {
            return Ok(false);
        }
        for &v in gallery_type {
            let mut next = Vec::new();
            let mut seen = vec![false; self.chambers.len()];
            for &ci in &current {
                let key = self.s_class_key(&self.chambers[ci], v);
                for (cj, other) in self.chambers.iter().enumerate() {
                    if cj != ci && !seen[cj] && self.s_class_key(other, v) == key {
                        seen[cj] = true;
                        next.push(cj);
                    }
                }
            }
            current = next;
            if current.is_empty() {
                return Ok(false);
            }
        }
        let target = self.index[b];
        Ok(current.contains(&target))
    }

    /// Deterministic text export: one chamber line per chamber, one
    /// adjacency line per (chamber, vertex) pair.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for c in &self.chambers {
            out.push_str(&format!("chamber {}\n", self.graph.format_word(c)));
        }
        for c in &self.chambers {
            for v in self.graph.vertex_ids() {
                out.push_str(&format!(
                    "chamber {} vertex {} class {}\n",
                    self.graph.format_word(c),
                    self.graph.name(v),
                    self.graph.format_word(&self.s_class_key(c, v))
                ));
            }
        }
        out
    }
}

/// All reduced expressions of a Coxeter shadow element: the swap orbit of
/// its normal form, sorted.
pub fn reduced_expressions(shadow: &CoxeterShadow, w: &GroupWord) -> Vec<Vec<VertexId>> {
    let raw: Vec<(VertexId, i64)> = w.syllables().iter().map(|s| (s.vertex, 1)).collect();
    let mut orbit: Vec<Vec<VertexId>> = vec![raw.iter().map(|&(v, _)| v).collect()];
    let mut seen: std::collections::HashSet<Vec<VertexId>> =
        orbit.iter().cloned().collect();
    let mut queue: Vec<Vec<VertexId>> = orbit.clone();
    while let Some(word) = queue.pop() {
        for i in 0..word.len().saturating_sub(1) {
            if word[i] != word[i + 1] && shadow.graph.adjacent(word[i], word[i + 1]) {
                let mut next = word.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    orbit.push(next.clone());
                    queue.push(next);
                }
            }
        }
    }
    orbit.sort();
    orbit
}

/// Desk-scale verification of the distance/gallery axiom on a ball: for
/// chamber pairs whose galleries provably fit inside the ball, a gallery
/// of reduced type `w` exists iff `w` is the Coxeter-valued distance.
/// Pairs without enough margin are skipped and counted.
pub fn verify_building_axiom(ball: &ChamberBall) -> Report {
    let mut report = Report::new();
    let mut checked_pairs = 0usize;
    let mut skipped_pairs = 0usize;
    let mut negative_checks = 0usize;
    let shadow_words = enumerate_ball(ball.shadow().graph(), ball.radius(), 1);
    for a in ball.chambers() {
        for b in ball.chambers() {
            let margin = if ball.is_complete() {
                ball.radius()
            } else {
                ball.radius().saturating_sub(a.len() + b.len())
            };
            let dist = ball.w_distance(a, b);
            if dist.len() > margin {
                skipped_pairs += 1;
                continue;
            }
            checked_pairs += 1;
            for expr in reduced_expressions(ball.shadow(), &dist) {
                match ball.gallery_check(a, b, &expr) {
                    Ok(true) => {}
                    Ok(false) => report.violation(format!(
                        "no gallery of distance type between {} and {}",
                        ball.graph().format_word(a),
                        ball.graph().format_word(b)
                    )),
                    Err(_) => report.violation("distance word not reduced".to_string()),
                }
            }
            for other in &shadow_words {
                if *other == dist || other.len() > margin {
                    continue;
                }
                for expr in reduced_expressions(ball.shadow(), other) {
                    negative_checks += 1;
                    if ball.gallery_check(a, b, &expr) != Ok(false) {
                        report.violation(format!(
                            "gallery of wrong type {} connects {} and {}",
                            ball.shadow().graph().format_word(other),
                            ball.graph().format_word(a),
                            ball.graph().format_word(b)
                        ));
                    }
                }
            }
        }
    }
    report.line(format!(
        "checked {checked_pairs} chamber pairs ({negative_checks} negative gallery types), skipped {skipped_pairs} near the boundary"
    ));
    report
}

/// Verification that restricted equivalence classes behave: complete
/// classes carry exactly the vertex group order many chambers.
pub fn verify_s_classes(ball: &ChamberBall) -> Report {
    let mut report = Report::new();
    let mut complete = 0usize;
    let mut truncated = 0usize;
    for v in ball.graph().vertex_ids() {
        for (key, members) in ball.s_classes(v) {
            if ball.s_class_is_complete(&key, v) {
                complete += 1;
                let expected = match ball.graph().order(v) {
                    CyclicOrder::Finite(n) => n as usize,
                    CyclicOrder::Infinite => unreachable!("infinite classes are never complete"),
                };
                if members.len() != expected {
                    report.violation(format!(
                        "class {} of vertex {} has {} chambers, expected {expected}",
                        ball.graph().format_word(&key),
                        ball.graph().name(v),
                        members.len()
                    ));
                }
            } else {
                truncated += 1;
            }
        }
    }
    report.line(format!(
        "checked {complete} complete classes, {truncated} truncated at the boundary"
    ));
    report
}

/// A vertex of the building's poset model: a coset of a spherical
/// parabolic subgroup, held by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CosetVertex {
    pub rep: GroupWord,
    pub spherical: VertexSet,
}

/// The poset of spherical cosets with representatives inside a ball,
/// with its order relation and cube intervals.
#[derive(Debug, Clone)]
pub struct PosetBall {
    graph: DefiningGraph,
    radius: usize,
    elements: Vec<CosetVertex>,
    index: HashMap<(GroupWord, VertexSet), usize>,
    relations: Vec<(usize, usize)>,
}

impl PosetBall {
    pub fn build(g: &DefiningGraph, radius: usize, exp_bound: i64) -> Self {
        let chambers = enumerate_ball(g, radius, exp_bound);
        let sphericals = spherical_subsets(g);
        let mut elements: Vec<CosetVertex> = Vec::new();
        let mut index: HashMap<(GroupWord, VertexSet), usize> = HashMap::new();
        for chamber in &chambers {
            for t in &sphericals {
                let rep = coset_rep(g, chamber, t).expect("spherical sets are cliques");
                let key = (rep.clone(), t.clone());
                if !index.contains_key(&key) {
                    index.insert(key, 0);
                    elements.push(CosetVertex {
                        rep,
                        spherical: t.clone(),
                    });
                }
            }
        }
        elements.sort();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.rep.clone(), e.spherical.clone()), i))
            .collect();

        let mut relations = Vec::new();
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                if i != j && poset_le(g, x, y) {
                    relations.push((i, j));
                }
            }
        }
        PosetBall {
            graph: g.clone(),
            radius,
            elements,
            index,
            relations,
        }
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[CosetVertex] {
        &self.elements
    }

    pub fn index_of(&self, e: &CosetVertex) -> Option<usize> {
        self.index.get(&(e.rep.clone(), e.spherical.clone())).copied()
    }

    /// Strict order pairs `(x, y)` with `x < y`.
    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    /// Cube intervals `[x, y]` with their dimensions `|T_y| - |T_x|`.
    pub fn cubes(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.relations.iter().map(|&(i, j)| {
            let dim = self.elements[j].spherical.len() - self.elements[i].spherical.len();
            (i, j, dim)
        })
    }

    /// Deterministic text export: `coset` lines then `le` lines.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            let t: Vec<&str> = e.spherical.iter().map(|&v| self.graph.name(v)).collect();
            out.push_str(&format!(
                "coset {} | {{{}}}\n",
                self.graph.format_word(&e.rep),
                t.join(" ")
            ));
        }
        for &(i, j) in &self.relations {
            out.push_str(&format!("le {i} {j}\n"));
        }
        out
    }
}

/// Coset order: `x G_{T1} <= y G_{T2}` iff `T1` is contained in `T2` and
/// the representatives agree modulo `G_{T2}`.
pub fn poset_le(g: &DefiningGraph, x: &CosetVertex, y: &CosetVertex) -> bool {
    if !x.spherical.is_subset(&y.spherical) {
        return false;
    }
    let diff = g.multiply(&g.invert(&x.rep), &y.rep);
    coset_rep(g, &diff, &y.spherical)
        .expect("spherical set of a poset element is a clique")
        .is_identity()
}

/// One direction of the link of a poset vertex: either up into a larger
/// spherical set or down into one of the sub-cosets dropping one vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum LinkVertex {
    Up(VertexId),
    Down(VertexId, i64),
}

/// Checks that the link of every interior poset vertex is a flag
/// simplicial complex: pairwise-compatible sets of link directions must
/// span a cube whose corners all exist in the ball. Elements whose star
/// leaves the ball, or with infinite-order spherical directions, are
/// skipped and counted.
pub fn link_flag_check(poset: &PosetBall) -> Report {
    let g = poset.graph();
    let mut report = Report::new();
    let mut interior = 0usize;
    let mut skipped = 0usize;

    'element: for x in poset.elements() {
        if x.spherical
            .iter()
            .any(|&s| !g.order(s).is_finite())
        {
            skipped += 1;
            continue;
        }
        let ups: Vec<VertexId> = g
            .vertex_ids()
            .filter(|u| !x.spherical.contains(u))
            .filter(|&u| x.spherical.iter().all(|&s| g.adjacent(s, u)))
            .collect();
        let mut downs: Vec<(VertexId, i64)> = Vec::new();
        for &s in &x.spherical {
            let CyclicOrder::Finite(n) = g.order(s) else { unreachable!() };
            for e in 0..n as i64 {
                downs.push((s, e));
            }
        }

        // Interior test: every corner of every cube through x must be an
        // element of the ball.
        let corners = star_corners(g, x, &ups, &downs);
        for corner in &corners {
            if poset.index_of(corner).is_none() {
                skipped += 1;
                continue 'element;
            }
        }
        interior += 1;

        // Link vertices and pairwise compatibility.
        let mut verts: Vec<LinkVertex> = ups.iter().map(|&u| LinkVertex::Up(u)).collect();
        verts.extend(downs.iter().map(|&(s, e)| LinkVertex::Down(s, e)));
        let compatible = |a: &LinkVertex, b: &LinkVertex| -> bool {
            match (a, b) {
                (LinkVertex::Up(u1), LinkVertex::Up(u2)) => u1 != u2 && g.adjacent(*u1, *u2),
                (LinkVertex::Down(s1, _), LinkVertex::Down(s2, _)) => s1 != s2,
                _ => true,
            }
        };

        // Every clique of the compatibility graph must span a cube whose
        // corners are all present.
        let cliques = link_cliques(&verts, &compatible);
        for clique in cliques {
            if clique.len() < 2 {
                continue;
            }
            let up_set: VertexSet = clique
                .iter()
                .filter_map(|lv| match lv {
                    LinkVertex::Up(u) => Some(*u),
                    _ => None,
                })
                .collect();
            let down_set: Vec<(VertexId, i64)> = clique
                .iter()
                .filter_map(|lv| match lv {
                    LinkVertex::Down(s, e) => Some((*s, *e)),
                    _ => None,
                })
                .collect();
            for corner in cube_corners(g, x, &up_set, &down_set) {
                if poset.index_of(&corner).is_none() {
                    report.violation(format!(
                        "link of coset {} | {:?} is not flag: missing corner {} | {:?}",
                        g.format_word(&x.rep),
                        x.spherical.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                        g.format_word(&corner.rep),
                        corner.spherical.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                    ));
                }
            }
        }
    }
    report.line(format!(
        "checked {interior} interior poset vertices, skipped {skipped} at the boundary"
    ));
    report
}

/// Corners of the maximal cubes through `x`: for every clique extension
/// `T'` of a subset of the spherical set and every exponent choice on the
/// dropped vertices.
fn star_corners(
    g: &DefiningGraph,
    x: &CosetVertex,
    ups: &[VertexId],
    downs: &[(VertexId, i64)],
) -> Vec<CosetVertex> {
    let mut up_subsets: Vec<VertexSet> = vec![VertexSet::new()];
    for &u in ups {
        let mut more = Vec::new();
        for s in &up_subsets {
            if s.iter().all(|&t| g.adjacent(t, u)) {
                let mut bigger = s.clone();
                bigger.insert(u);
                more.push(bigger);
            }
        }
        up_subsets.extend(more);
    }
    let mut down_choices: Vec<Vec<(VertexId, i64)>> = vec![Vec::new()];
    let down_vertices: VertexSet = downs.iter().map(|&(s, _)| s).collect();
    for &s in &down_vertices {
        let mut more = Vec::new();
        for choice in &down_choices {
            for &(s2, e) in downs.iter().filter(|&&(s2, _)| s2 == s) {
                let mut bigger = choice.clone();
                bigger.push((s2, e));
                more.push(bigger);
            }
        }
        down_choices.extend(more);
    }

    let mut corners = Vec::new();
    for ups_chosen in &up_subsets {
        for downs_chosen in &down_choices {
            corners.extend(cube_corners(g, x, ups_chosen, downs_chosen));
        }
    }
    corners.sort();
    corners.dedup();
    corners
}

/// Corners of the single cube through `x` determined by a set of up
/// directions and a choice of one sub-coset per down direction.
fn cube_corners(
    g: &DefiningGraph,
    x: &CosetVertex,
    ups: &VertexSet,
    downs: &[(VertexId, i64)],
) -> Vec<CosetVertex> {
    let down_vertices: Vec<VertexId> = downs.iter().map(|&(s, _)| s).collect();
    let mut corners = Vec::new();
    // A corner keeps some subset of the down directions dropped and some
    // subset of the ups added.
    let up_list: Vec<VertexId> = ups.iter().copied().collect();
    for up_mask in 0..(1usize << up_list.len()) {
        for down_mask in 0..(1usize << down_vertices.len()) {
            let mut t = x.spherical.clone();
            for (k, &u) in up_list.iter().enumerate() {
                if up_mask & (1 << k) != 0 {
                    t.insert(u);
                }
            }
            let mut shift: Vec<(VertexId, i64)> = Vec::new();
            for (k, &(s, e)) in downs.iter().enumerate() {
                if down_mask & (1 << k) != 0 {
                    t.remove(&s);
                    shift.push((s, e));
                }
            }
            let mut moved = x.rep.clone();
            for (s, e) in shift {
                moved = g.multiply(&moved, &g.normalize(&[(s, e)]));
            }
            let rep = coset_rep(g, &moved, &t).expect("clique subsets stay cliques");
            corners.push(CosetVertex { rep, spherical: t });
        }
    }
    corners.sort();
    corners.dedup();
    corners
}

/// All cliques (including singletons and the empty set) of the
/// compatibility graph on link vertices.
fn link_cliques(
    verts: &[LinkVertex],
    compatible: &dyn Fn(&LinkVertex, &LinkVertex) -> bool,
) -> Vec<Vec<LinkVertex>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for clique in &frontier {
            let start = clique.last().map_or(0, |&i| i + 1);
            for i in start..verts.len() {
                if clique.iter().all(|&j| compatible(&verts[j], &verts[i])) {
                    let mut bigger = clique.clone();
                    bigger.push(i);
                    next.push(bigger);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter()
        .map(|ix| ix.into_iter().map(|i| verts[i].clone()).collect())
        .collect()
}

/// An element of the finite symmetry group: a graph symmetry combined
/// with one vertex-group isomorphism per vertex, acting as
/// `v -> perm(v)^k_v`.
#[derive(Debug, Clone)]
pub struct SigmaElement {
    perm: Vec<VertexId>,
    iso_exponents: Vec<i64>,
    aut: Automorphism,
}

impl SigmaElement {
    pub fn new(
        g: &DefiningGraph,
        perm: Vec<VertexId>,
        iso_exponents: Vec<i64>,
    ) -> Result<Self, AutError> {
        let symmetry = Automorphism::graph_symmetry(g, &perm)?;
        let mut aut = symmetry;
        for (i, &k) in iso_exponents.iter().enumerate() {
            let iso = Automorphism::vertex_iso(g, VertexId(i as u32), k)?;
            aut = aut.compose(g, &iso);
        }
        Ok(SigmaElement {
            perm,
            iso_exponents,
            aut,
        })
    }

    pub fn identity(g: &DefiningGraph) -> Self {
        let perm: Vec<VertexId> = g.vertex_ids().collect();
        let iso_exponents = vec![1; g.vertex_count()];
        Self::new(g, perm, iso_exponents).expect("identity element is legal")
    }

    pub fn automorphism(&self) -> &Automorphism {
        &self.aut
    }

    pub fn image_vertex(&self, v: VertexId) -> VertexId {
        self.perm[v.index()]
    }

    pub fn iso_exponent(&self, v: VertexId) -> i64 {
        self.iso_exponents[v.index()]
    }

    /// Action on a chamber: apply the automorphism to the representative.
    /// Syllable lengths are preserved, so balls are stable.
    pub fn apply_chamber(&self, g: &DefiningGraph, chamber: &GroupWord) -> GroupWord {
        self.aut.apply(g, chamber)
    }

    /// Action on a poset vertex: move the representative and the spherical
    /// set, then re-canonicalize.
    pub fn apply_coset(&self, g: &DefiningGraph, cv: &CosetVertex) -> CosetVertex {
        let spherical: VertexSet = cv.spherical.iter().map(|&s| self.image_vertex(s)).collect();
        let moved = self.aut.apply(g, &cv.rep);
        let rep = coset_rep(g, &moved, &spherical).expect("images of cliques are cliques");
        CosetVertex { rep, spherical }
    }
}

/// The syllable-length-preservation property of the Coxeter map, checked
/// over a ball of normal forms.
pub fn verify_gamma_lengths(g: &DefiningGraph, max_len: usize, exp_bound: i64) -> Report {
    let shadow = CoxeterShadow::new(g);
    let mut report = Report::new();
    let words = enumerate_ball(g, max_len, exp_bound);
    for w in &words {
        let image = shadow.gamma(w);
        if image.len() != w.len() {
            report.violation(format!(
                "gamma changed the length of {}",
                g.format_word(w)
            ));
        }
        // Independent reducedness witness: the least reduced word in the
        // image's move closure has the same length.
        let raw: Vec<(VertexId, i64)> =
            image.syllables().iter().map(|s| (s.vertex, s.exponent)).collect();
        if oracle_least_reduced(shadow.graph(), &raw).len() != image.len() {
            report.violation(format!(
                "gamma image of {} is not reduced in the shadow",
                g.format_word(w)
            ));
        }
    }
    report.line(format!("checked {} normal forms", words.len()));
    report
}
