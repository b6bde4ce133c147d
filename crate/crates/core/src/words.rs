//! Canonical normal forms and arithmetic for graph product elements.
//!
//! An element is a sequence of syllables `(vertex, exponent)`. Two words
//! represent the same element iff one can be turned into the other by
//! shuffling commuting syllables, merging adjacent syllables of the same
//! vertex (mod the vertex order) and deleting trivial syllables. The
//! canonical form chosen here is the lexicographically least reduced word
//! with respect to vertex declaration order: each incoming syllable moves
//! left through the maximal suffix of syllables it commutes with, merging
//! with a syllable of its own vertex if it meets one, and otherwise lands
//! immediately before the first later-declared vertex in that suffix.
//!
//! [`oracle_equal`] is an independent equality check that explores the
//! shuffle/merge/delete moves directly and never consults the canonical
//! form; the test suites compare the two exhaustively.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{CyclicOrder, DefiningGraph, VertexId, VertexSet};

/// One block of a word: a vertex generator raised to a nonzero exponent.
///
/// For a vertex of finite order `n` the canonical exponent range is
/// `1..=n-1`; for an infinite-order vertex any nonzero integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub vertex: VertexId,
    pub exponent: i64,
}

/// Canonical normal form of a group element.
///
/// Constructed only through [`DefiningGraph::normalize`] and the word
/// operations, so equal elements always compare equal. Words carry the
/// token of the graph they were built over; mixing graphs panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    token: u64,
    syllables: Vec<Syllable>,
}

impl GroupWord {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn token(&self) -> u64 {
        self.token
    }

    pub(crate) fn from_parts(token: u64, syllables: Vec<Syllable>) -> Self {
        GroupWord { token, syllables }
    }
}

#[derive(Debug, Error)]
pub enum WordError {
    #[error("unknown vertex `{name}` in word")]
    UnknownVertex { name: String },
    #[error("cannot parse word token `{token}`")]
    BadToken { token: String },
    #[error("word exceeds the oracle budget of {budget} syllables")]
    BudgetExceeded { budget: usize },
}

impl DefiningGraph {
    pub fn identity_word(&self) -> GroupWord {
        GroupWord {
            token: self.token(),
            syllables: Vec::new(),
        }
    }

    /// The canonical generator of the vertex group of `v`.
    pub fn generator(&self, v: VertexId) -> GroupWord {
        self.normalize(&[(v, 1)])
    }

    /// Canonical exponent: `1..=n-1` for finite order `n` (0 meaning the
    /// identity), unchanged for infinite order.
    fn canon_exp(&self, v: VertexId, e: i64) -> i64 {
        match self.order(v) {
            CyclicOrder::Finite(n) => e.rem_euclid(n as i64),
            CyclicOrder::Infinite => e,
        }
    }

    /// Appends one syllable to a canonical word, keeping it canonical.
    fn push_syllable(&self, word: &mut Vec<Syllable>, v: VertexId, e: i64) {
        let e = self.canon_exp(v, e);
        if e == 0 {
            return;
        }
        // Walk left through the maximal commuting suffix, looking for a
        // syllable of the same vertex to merge with.
        let mut boundary = 0;
        for i in (0..word.len()).rev() {
            let t = word[i];
            if t.vertex == v {
                let merged = self.canon_exp(v, t.exponent + e);
                if merged == 0 {
                    let tail: Vec<Syllable> = word.drain(i + 1..).collect();
                    word.pop();
                    for s in tail {
                        self.push_syllable(word, s.vertex, s.exponent);
                    }
                } else {
                    word[i].exponent = merged;
                }
                return;
            }
            if !self.adjacent(t.vertex, v) {
                boundary = i + 1;
                break;
            }
        }
        // No merge: land immediately before the first later-declared
        // vertex of the suffix.
        let mut pos = word.len();
        for (offset, t) in word[boundary..].iter().enumerate() {
            if t.vertex > v {
                pos = boundary + offset;
                break;
            }
        }
        word.insert(pos, Syllable { vertex: v, exponent: e });
    }

    /// Canonical normal form of a raw syllable sequence. Zero exponents are
    /// allowed in the input and vanish.
    pub fn normalize(&self, raw: &[(VertexId, i64)]) -> GroupWord {
        let mut word = Vec::with_capacity(raw.len());
        for &(v, e) in raw {
            assert!(v.index() < self.vertex_count(), "vertex out of range");
            self.push_syllable(&mut word, v, e);
        }
        GroupWord {
            token: self.token(),
            syllables: word,
        }
    }

    fn check_token(&self, w: &GroupWord) {
        assert_eq!(
            w.token,
            self.token(),
            "word belongs to a different defining graph"
        );
    }

    /// Canonical form of `a` extended by one syllable on the right.
    pub fn append_syllable(&self, a: &GroupWord, v: VertexId, e: i64) -> GroupWord {
        self.check_token(a);
        let mut word = a.syllables.clone();
        self.push_syllable(&mut word, v, e);
        GroupWord {
            token: self.token(),
            syllables: word,
        }
    }

    /// Canonical form of the concatenation `a * b`.
    pub fn multiply(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        self.check_token(a);
        self.check_token(b);
        let mut word = a.syllables.clone();
        for s in &b.syllables {
            self.push_syllable(&mut word, s.vertex, s.exponent);
        }
        GroupWord {
            token: self.token(),
            syllables: word,
        }
    }

    /// Canonical form of the inverse: syllables reversed and negated.
    pub fn invert(&self, a: &GroupWord) -> GroupWord {
        self.check_token(a);
        let mut word = Vec::with_capacity(a.len());
        for s in a.syllables.iter().rev() {
            self.push_syllable(&mut word, s.vertex, -s.exponent);
        }
        GroupWord {
            token: self.token(),
            syllables: word,
        }
    }

    pub fn word_pow(&self, a: &GroupWord, e: i64) -> GroupWord {
        let base = if e < 0 { self.invert(a) } else { a.clone() };
        let mut out = self.identity_word();
        for _ in 0..e.unsigned_abs() {
            out = self.multiply(&out, &base);
        }
        out
    }

    /// Conjugate `g x g^-1`.
    pub fn conjugate(&self, g: &GroupWord, x: &GroupWord) -> GroupWord {
        self.multiply(&self.multiply(g, x), &self.invert(g))
    }

    /// Parses the word text format: whitespace-separated `name^exp` tokens
    /// with `^exp` defaulting to 1; `1` alone denotes the identity.
    pub fn parse_word(&self, text: &str) -> Result<GroupWord, WordError> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" && self.vertex_id("1").is_err() {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp_str)) => {
                    let exp = exp_str.parse::<i64>().map_err(|_| WordError::BadToken {
                        token: token.to_string(),
                    })?;
                    (name, exp)
                }
                None => (token, 1),
            };
            let v = self
                .vertex_id(name)
                .map_err(|_| WordError::UnknownVertex { name: name.into() })?;
            raw.push((v, exp));
        }
        Ok(self.normalize(&raw))
    }

    /// Formats a word in the text format; the identity prints as `1`.
    pub fn format_word(&self, w: &GroupWord) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, s) in w.syllables.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            if s.exponent == 1 {
                write!(out, "{}", self.name(s.vertex)).unwrap();
            } else {
                write!(out, "{}^{}", self.name(s.vertex), s.exponent).unwrap();
            }
        }
        out
    }
}

/// All canonical normal forms of syllable length at most `max_syllables`,
/// with exponents of infinite-order vertices bounded by `exp_bound` in
/// absolute value. Sorted by length, then lexicographically.
pub fn enumerate_ball(
    g: &DefiningGraph,
    max_syllables: usize,
    exp_bound: i64,
) -> Vec<GroupWord> {
    let all: VertexSet = g.vertex_ids().collect();
    enumerate_ball_restricted(g, &all, max_syllables, exp_bound)
}

/// Ball restricted to words whose syllables use only `allowed` vertices
/// (the normal forms of the corresponding parabolic subgroup).
pub fn enumerate_ball_restricted(
    g: &DefiningGraph,
    allowed: &VertexSet,
    max_syllables: usize,
    exp_bound: i64,
) -> Vec<GroupWord> {
    let letters: Vec<(VertexId, i64)> = allowed
        .iter()
        .flat_map(|&v| -> Vec<(VertexId, i64)> {
            match g.order(v) {
                CyclicOrder::Finite(n) => (1..n as i64).map(|e| (v, e)).collect(),
                CyclicOrder::Infinite => (1..=exp_bound)
                    .flat_map(|e| [(v, -e), (v, e)])
                    .collect(),
            }
        })
        .collect();

    let mut out = vec![g.identity_word()];
    let mut seen: HashSet<GroupWord> = out.iter().cloned().collect();
    let mut level = out.clone();
    for k in 1..=max_syllables {
        let mut next = Vec::new();
        for w in &level {
            for &(v, e) in &letters {
                let mut syl = w.syllables.clone();
                g.push_syllable(&mut syl, v, e);
                if syl.len() != k {
                    continue;
                }
                if syl
                    .iter()
                    .any(|s| !g.order(s.vertex).is_finite() && s.exponent.abs() > exp_bound)
                {
                    continue;
                }
                let word = GroupWord::from_parts(g.token(), syl);
                if seen.insert(word.clone()) {
                    next.push(word);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Result of one oracle query that could not be answered within budget.
#[derive(Debug, Error)]
#[error("oracle budget of {budget} syllables exceeded (word has {length})")]
pub struct OracleBudget {
    pub budget: usize,
    pub length: usize,
}

fn oracle_prepare(g: &DefiningGraph, raw: &[(VertexId, i64)]) -> Vec<Syllable> {
    // Canonicalize exponents, drop trivial syllables and merge adjacent
    // same-vertex runs (all of which are elementary moves), so the budget
    // is measured on the merged length.
    let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
    for &(v, e) in raw {
        let e = g.canon_exp(v, e);
        if e == 0 {
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.vertex == v {
                let merged = g.canon_exp(v, last.exponent + e);
                if merged == 0 {
                    out.pop();
                } else {
                    last.exponent = merged;
                }
                continue;
            }
        }
        out.push(Syllable { vertex: v, exponent: e });
    }
    out
}

/// All words reachable from `start` by swapping adjacent commuting
/// syllables, merging adjacent same-vertex syllables (mod order) and
/// deleting trivial syllables. These moves never grow a word, so the
/// closure is finite.
fn oracle_closure(g: &DefiningGraph, start: Vec<Syllable>) -> HashSet<Vec<Syllable>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if a.vertex == b.vertex {
                let mut next = w.clone();
                let merged = g.canon_exp(a.vertex, a.exponent + b.exponent);
                next.remove(i + 1);
                if merged == 0 {
                    next.remove(i);
                } else {
                    next[i].exponent = merged;
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            } else if g.adjacent(a.vertex, b.vertex) {
                let mut next = w.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Least reduced word reachable from `raw` by the elementary moves alone:
/// the words of minimal length in the closure are exactly the reduced
/// words of the element, and the least of them is a canonical class
/// invariant independent of [`DefiningGraph::normalize`].
pub fn oracle_least_reduced(g: &DefiningGraph, raw: &[(VertexId, i64)]) -> Vec<Syllable> {
    let start = oracle_prepare(g, raw);
    oracle_closure(g, start)
        .into_iter()
        .min_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())))
        .expect("closure contains at least the start word")
}

/// Independent equality check: explores elementary moves (swap commuting
/// neighbors, merge same-vertex neighbors mod order, delete trivial
/// syllables) from both inputs and reports whether the two sets of
/// reachable words meet. Exceeding `budget` is reported distinctly from
/// inequality.
pub fn oracle_equal(
    g: &DefiningGraph,
    raw1: &[(VertexId, i64)],
    raw2: &[(VertexId, i64)],
    budget: usize,
) -> Result<bool, OracleBudget> {
    let a = oracle_prepare(g, raw1);
    let b = oracle_prepare(g, raw2);
    for w in [&a, &b] {
        if w.len() > budget {
            return Err(OracleBudget {
                budget,
                length: w.len(),
            });
        }
    }
    let ca = oracle_closure(g, a);
    let cb = oracle_closure(g, b);
    let (small, large) = if ca.len() <= cb.len() { (&ca, &cb) } else { (&cb, &ca) };
    Ok(small.iter().any(|w| large.contains(w)))
}
