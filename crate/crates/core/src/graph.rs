//! Defining graphs and their subgraph operators.
//!
//! A [`DefiningGraph`] is a finite simplicial graph whose vertices are
//! labeled by cyclic orders. The declaration order of the vertices is the
//! canonical total order used by every normal form and report downstream.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Order of a cyclic vertex group: finite of order at least 2, or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CyclicOrder {
    Finite(u32),
    Infinite,
}

impl CyclicOrder {
    /// Fails on orders below 2; a trivial vertex group is represented by
    /// omitting the vertex entirely.
    pub fn finite(n: u32) -> Result<Self, GraphError> {
        if n < 2 {
            Err(GraphError::OrderBelowTwo { order: n })
        } else {
            Ok(CyclicOrder::Finite(n))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CyclicOrder::Finite(_))
    }
}

impl fmt::Display for CyclicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicOrder::Finite(n) => write!(f, "{n}"),
            CyclicOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Index of a vertex in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of vertices, kept sorted in declaration order.
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone)]
struct VertexInfo {
    name: String,
    order: CyclicOrder,
}

/// Witness that a graph has a separating intersection of links: a vertex
/// pair at distance at least 2 together with a component of the complement
/// of their common link containing neither of them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SilWitness {
    pub v: VertexId,
    pub w: VertexId,
    pub component: VertexSet,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex order {order} is below 2")]
    OrderBelowTwo { order: u32 },
    #[error("unknown vertex `{name}`")]
    UnknownVertex { name: String },
}

/// One parse violation, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// All violations found in a graph file; parsing reports every issue, not
/// just the first.
#[derive(Debug, Error)]
pub struct GraphParseError {
    pub issues: Vec<ParseIssue>,
}

impl fmt::Display for GraphParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// A finite simplicial graph with cyclic vertex orders.
///
/// Vertices are addressed by [`VertexId`] in declaration order. The graph
/// is immutable after construction; every operation is a pure function.
#[derive(Debug, Clone)]
pub struct DefiningGraph {
    vertices: Vec<VertexInfo>,
    adj: Vec<VertexSet>,
    adj_matrix: Vec<bool>,
    id: u64,
}

impl DefiningGraph {
    /// Builds a graph from `(name, order)` pairs in declaration order and a
    /// list of edges given by vertex names.
    pub fn new(
        vertices: Vec<(String, CyclicOrder)>,
        edges: &[(String, String)],
    ) -> Result<Self, GraphParseError> {
        let mut text = String::new();
        for (name, order) in &vertices {
            text.push_str(&format!("vertex {name} order {order}\n"));
        }
        for (a, b) in edges {
            text.push_str(&format!("edge {a} {b}\n"));
        }
        Self::parse(&text)
    }

    /// Parses the line-based graph file format.
    ///
    /// One directive per line, `#` starts a comment:
    ///
    /// ```text
    /// vertex <name> order <n|inf>
    /// edge <name> <name>
    /// ```
    ///
    /// Names match `[A-Za-z0-9_.]+`. Declaration order of `vertex` lines is
    /// the canonical total order. Every violation is reported with its line
    /// number.
    pub fn parse(text: &str) -> Result<Self, GraphParseError> {
        let mut issues = Vec::new();
        let mut names: BTreeMap<String, u32> = BTreeMap::new();
        let mut vertices: Vec<VertexInfo> = Vec::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut seen_edges: BTreeSet<(u32, u32)> = BTreeSet::new();

        for (lineno, raw_line) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            match tokens[0] {
                "vertex" => {
                    if tokens.len() != 4 || tokens[2] != "order" {
                        issues.push(ParseIssue {
                            line,
                            message: "expected `vertex <name> order <n|inf>`".into(),
                        });
                        continue;
                    }
                    let name = tokens[1];
                    if !valid_name(name) {
                        issues.push(ParseIssue {
                            line,
                            message: format!(
                                "invalid vertex name `{name}` (allowed: [A-Za-z0-9_.]+)"
                            ),
                        });
                        continue;
                    }
                    let order = match tokens[3] {
                        "inf" => CyclicOrder::Infinite,
                        t => match t.parse::<u32>() {
                            Ok(n) if n >= 2 => CyclicOrder::Finite(n),
                            Ok(n) => {
                                issues.push(ParseIssue {
                                    line,
                                    message: format!("vertex `{name}` has order {n}, below 2"),
                                });
                                continue;
                            }
                            Err(_) => {
                                issues.push(ParseIssue {
                                    line,
                                    message: format!("cannot parse order `{t}`"),
                                });
                                continue;
                            }
                        },
                    };
                    if names.contains_key(name) {
                        issues.push(ParseIssue {
                            line,
                            message: format!("duplicate vertex `{name}`"),
                        });
                        continue;
                    }
                    names.insert(name.to_string(), vertices.len() as u32);
                    vertices.push(VertexInfo {
                        name: name.to_string(),
                        order,
                    });
                }
                "edge" => {
                    if tokens.len() != 3 {
                        issues.push(ParseIssue {
                            line,
                            message: "expected `edge <name> <name>`".into(),
                        });
                        continue;
                    }
                    let mut endpoint = |t: &str| match names.get(t) {
                        Some(&i) => Some(i),
                        None => {
                            issues.push(ParseIssue {
                                line,
                                message: format!("unknown edge endpoint `{t}`"),
                            });
                            None
                        }
                    };
                    let (Some(a), Some(b)) = (endpoint(tokens[1]), endpoint(tokens[2])) else {
                        continue;
                    };
                    if a == b {
                        issues.push(ParseIssue {
                            line,
                            message: format!("loop at vertex `{}`", tokens[1]),
                        });
                        continue;
                    }
                    let key = (a.min(b), a.max(b));
                    if !seen_edges.insert(key) {
                        issues.push(ParseIssue {
                            line,
                            message: format!("duplicate edge `{} {}`", tokens[1], tokens[2]),
                        });
                        continue;
                    }
                    edges.push(key);
                }
                other => {
                    issues.push(ParseIssue {
                        line,
                        message: format!("unknown directive `{other}`"),
                    });
                }
            }
        }

        if !issues.is_empty() {
            return Err(GraphParseError { issues });
        }

        let n = vertices.len();
        let mut adj = vec![VertexSet::new(); n];
        let mut adj_matrix = vec![false; n * n];
        for &(a, b) in &edges {
            adj[a as usize].insert(VertexId(b));
            adj[b as usize].insert(VertexId(a));
            adj_matrix[a as usize * n + b as usize] = true;
            adj_matrix[b as usize * n + a as usize] = true;
        }

        Ok(DefiningGraph {
            vertices,
            adj,
            adj_matrix,
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// Opaque identity used to catch cross-graph mixing of words.
    pub fn token(&self) -> u64 {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()].name
    }

    pub fn order(&self, v: VertexId) -> CyclicOrder {
        self.vertices[v.index()].order
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertices
            .iter()
            .position(|info| info.name == name)
            .map(|i| VertexId(i as u32))
            .ok_or_else(|| GraphError::UnknownVertex { name: name.into() })
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj_matrix[u.index() * self.vertices.len() + v.index()]
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertex_ids() {
            for &v in &self.adj[u.index()] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Neighbors of `v`.
    pub fn link(&self, v: VertexId) -> &VertexSet {
        &self.adj[v.index()]
    }

    /// Neighbors of `v` together with `v` itself.
    pub fn star(&self, v: VertexId) -> VertexSet {
        let mut s = self.adj[v.index()].clone();
        s.insert(v);
        s
    }

    /// Connected components of the full subgraph on `kept`, each sorted,
    /// the list sorted by least vertex.
    pub fn components_within(&self, kept: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &start in kept {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &w in &self.adj[u.index()] {
                    if kept.contains(&w) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        // BTreeSet iteration makes `out` already sorted by least vertex.
        out
    }

    /// Connected components of the graph minus the star of `v`.
    pub fn components_outside_star(&self, v: VertexId) -> Vec<VertexSet> {
        let star = self.star(v);
        let kept: VertexSet = self.vertex_ids().filter(|u| !star.contains(u)).collect();
        self.components_within(&kept)
    }

    /// Edge-count distance; `None` when the vertices lie in different
    /// components.
    pub fn distance(&self, v: VertexId, w: VertexId) -> Option<u32> {
        if v == w {
            return Some(0);
        }
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[v.index()] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &x in &self.adj[u.index()] {
                if dist[x.index()] == u32::MAX {
                    dist[x.index()] = dist[u.index()] + 1;
                    if x == w {
                        return Some(dist[x.index()]);
                    }
                    queue.push_back(x);
                }
            }
        }
        None
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let all: VertexSet = self.vertex_ids().collect();
        self.components_within(&all).len() <= 1
    }

    pub fn component_count(&self) -> usize {
        let all: VertexSet = self.vertex_ids().collect();
        self.components_within(&all).len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edge_count() == n * (n - 1) / 2
    }

    /// All separating intersections of links, as witnesses `(v, w, C)` with
    /// `v` before `w` in declaration order and `C` a component of the graph
    /// minus the common link of `v` and `w` containing neither. Sorted by
    /// `(v, w, least vertex of C)`. An empty list means no SILs.
    pub fn find_sils(&self) -> Vec<SilWitness> {
        let mut out = Vec::new();
        for v in self.vertex_ids() {
            for w in self.vertex_ids() {
                if w <= v {
                    continue;
                }
                match self.distance(v, w) {
                    Some(d) if d < 2 => continue,
                    _ => {}
                }
                let common: VertexSet = self
                    .link(v)
                    .intersection(self.link(w))
                    .copied()
                    .collect();
                let kept: VertexSet = self
                    .vertex_ids()
                    .filter(|u| !common.contains(u))
                    .collect();
                for comp in self.components_within(&kept) {
                    if !comp.contains(&v) && !comp.contains(&w) {
                        out.push(SilWitness {
                            v,
                            w,
                            component: comp,
                        });
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn has_sil(&self) -> bool {
        !self.find_sils().is_empty()
    }

    /// Splits off the clique of vertices adjacent to every other vertex:
    /// returns that vertex set and the full subgraph on the complement,
    /// inheriting names, orders and declaration order.
    pub fn center_split(&self) -> (VertexSet, DefiningGraph) {
        let n = self.vertices.len();
        let delta: VertexSet = self
            .vertex_ids()
            .filter(|&v| self.adj[v.index()].len() == n - 1)
            .collect();
        let rest: VertexSet = self.vertex_ids().filter(|v| !delta.contains(v)).collect();
        (delta.clone(), self.induced(&rest))
    }

    /// Full subgraph on `kept`, preserving names, orders and relative
    /// declaration order.
    pub fn induced(&self, kept: &VertexSet) -> DefiningGraph {
        let vertices: Vec<(String, CyclicOrder)> = kept
            .iter()
            .map(|&v| (self.name(v).to_string(), self.order(v)))
            .collect();
        let mut edges = Vec::new();
        for &u in kept {
            for &v in kept {
                if u < v && self.adjacent(u, v) {
                    edges.push((self.name(u).to_string(), self.name(v).to_string()));
                }
            }
        }
        DefiningGraph::new(vertices, &edges).expect("induced subgraph of a valid graph is valid")
    }
}

/// Emits the graph back in its file format, deterministically: vertices in
/// declaration order, edges sorted.
impl fmt::Display for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vertex_ids() {
            writeln!(f, "vertex {} order {}", self.name(v), self.order(v))?;
        }
        for (u, v) in self.edges() {
            writeln!(f, "edge {} {}", self.name(u), self.name(v))?;
        }
        Ok(())
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// A graph whose vertices carry finitely generated abelian groups given as
/// lists of cyclic factors, the input of [`blow_up`].
#[derive(Debug, Clone)]
pub struct FactoredGraph {
    pub vertices: Vec<(String, Vec<CyclicOrder>)>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Error)]
pub enum BlowUpError {
    #[error("vertex `{vertex}` has factor {factor}, which is not an indecomposable cyclic order (prime power >= 2 or inf)")]
    NotIndecomposable { vertex: String, factor: u32 },
    #[error("vertex `{vertex}` has an empty factor list")]
    EmptyFactors { vertex: String },
}

/// Replaces each vertex by a complete graph on its cyclic factors; factors
/// of adjacent vertices are fully joined. Names are derived as
/// `<name>.1`, `<name>.2`, ... in factor order.
///
/// Every finite factor must be a prime power (indecomposability of the
/// cyclic summand); composite orders like 6 are rejected.
pub fn blow_up(input: &FactoredGraph) -> Result<DefiningGraph, BlowUpError> {
    for (name, factors) in &input.vertices {
        if factors.is_empty() {
            return Err(BlowUpError::EmptyFactors {
                vertex: name.clone(),
            });
        }
        for &f in factors {
            if let CyclicOrder::Finite(n) = f {
                if !is_prime_power(n) {
                    return Err(BlowUpError::NotIndecomposable {
                        vertex: name.clone(),
                        factor: n,
                    });
                }
            }
        }
    }

    let mut vertices = Vec::new();
    let mut groups: Vec<Vec<String>> = Vec::new();
    for (name, factors) in &input.vertices {
        let mut group = Vec::new();
        for (i, &f) in factors.iter().enumerate() {
            let vname = format!("{}.{}", name, i + 1);
            vertices.push((vname.clone(), f));
            group.push(vname);
        }
        groups.push(group);
    }

    let mut edges = Vec::new();
    for group in &groups {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                edges.push((group[i].clone(), group[j].clone()));
            }
        }
    }
    for &(a, b) in &input.edges {
        for x in &groups[a] {
            for y in &groups[b] {
                edges.push((x.clone(), y.clone()));
            }
        }
    }

    Ok(DefiningGraph::new(vertices, &edges).expect("blow-up construction yields a valid graph"))
}

fn is_prime_power(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            // Prime power iff the smallest prime factor exhausts n.
            return m == 1;
        }
        d += 1;
    }
    true // n is prime
}
