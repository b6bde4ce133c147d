//! The derived graph of partial conjugations and the evaluation map onto
//! the subgroup of the automorphism group they generate.
//!
//! The derived graph has one vertex per partial conjugation descriptor
//! `(v, C)`, carrying the cyclic order of `v`. Two descriptors span an
//! edge unless `d(v, w) >= 2`, `v` lies in `D` and `w` lies in `C` — the
//! exact configuration in which the two partial conjugations fail to
//! commute when the base graph has no SIL. The derived graph is itself a
//! defining graph, so every word and automorphism operation applies to its
//! graph product, and the map sending each generator to its partial
//! conjugation evaluates words to automorphisms of the base group.

use rayon::prelude::*;
use thiserror::Error;

use crate::aut::{all_partial_conjugations, Automorphism, InnerVerdict, PcDescriptor};
use crate::graph::{CyclicOrder, DefiningGraph, SilWitness, VertexId};
use crate::report::Report;
use crate::words::{enumerate_ball, GroupWord};

/// Refusal raised by the theorem-level checks when the base graph has
/// separating intersections of links.
#[derive(Debug, Error)]
#[error("base graph has {} SIL witness(es); the structure theorems do not apply", witnesses.len())]
pub struct SilsPresent {
    pub witnesses: Vec<SilWitness>,
}

#[derive(Debug, Error)]
#[error("graph is not connected")]
pub struct NotConnected;

/// The derived graph together with the partial conjugations its vertices
/// stand for.
#[derive(Debug, Clone)]
pub struct TildeGraph {
    base: DefiningGraph,
    graph: DefiningGraph,
    descriptors: Vec<PcDescriptor>,
    pcs: Vec<Automorphism>,
}

impl TildeGraph {
    /// Builds the derived graph of any base graph. The construction never
    /// fails; the isomorphism-level claims are gated separately on the
    /// absence of SILs.
    pub fn build(base: &DefiningGraph) -> TildeGraph {
        let descriptors = all_partial_conjugations(base);
        let vertices: Vec<(String, CyclicOrder)> = descriptors
            .iter()
            .map(|d| (d.name(base), base.order(d.vertex)))
            .collect();
        let mut edges = Vec::new();
        for (i, a) in descriptors.iter().enumerate() {
            for (j, b) in descriptors.iter().enumerate() {
                if i < j && tilde_edge(base, a, b) {
                    edges.push((a.name(base), b.name(base)));
                }
            }
        }
        let graph = DefiningGraph::new(vertices, &edges)
            .expect("descriptor names are unique and valid");
        let pcs = descriptors
            .iter()
            .map(|d| {
                Automorphism::from_descriptor(base, d)
                    .expect("descriptors come from components_outside_star")
            })
            .collect();
        debug_assert_eq!(
            graph.vertex_count(),
            base.vertex_ids()
                .map(|v| base.components_outside_star(v).len())
                .sum::<usize>()
        );
        TildeGraph {
            base: base.clone(),
            graph,
            descriptors,
            pcs,
        }
    }

    pub fn base(&self) -> &DefiningGraph {
        &self.base
    }

    /// The derived graph as an ordinary defining graph; it can be fed back
    /// into every other operation.
    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn descriptors(&self) -> &[PcDescriptor] {
        &self.descriptors
    }

    pub fn descriptor(&self, v: VertexId) -> &PcDescriptor {
        &self.descriptors[v.index()]
    }

    pub fn partial_conjugation(&self, v: VertexId) -> &Automorphism {
        &self.pcs[v.index()]
    }

    /// The derived-graph vertex standing for a given descriptor.
    pub fn vertex_of(&self, d: &PcDescriptor) -> Option<VertexId> {
        self.descriptors
            .binary_search(d)
            .ok()
            .map(|i| VertexId(i as u32))
    }

    /// The product of all `p_{v,C}` over the components outside `st(v)`,
    /// in component order; its evaluation is the inner automorphism by
    /// `v`. Central vertices give the identity.
    pub fn p_v_word(&self, v: VertexId) -> GroupWord {
        assert!(v.index() < self.base.vertex_count(), "vertex out of range");
        let raw: Vec<(VertexId, i64)> = self
            .descriptors
            .iter()
            .enumerate()
            .filter(|(_, d)| d.vertex == v)
            .map(|(i, _)| (VertexId(i as u32), 1))
            .collect();
        self.graph.normalize(&raw)
    }

    fn pc_power(&self, v: VertexId, e: i64) -> Automorphism {
        let pc = &self.pcs[v.index()];
        if e >= 0 {
            pc.pow(&self.base, e as u32)
        } else {
            pc.inverse().pow(&self.base, e.unsigned_abs() as u32)
        }
    }

    /// Evaluates a word over the derived graph to an automorphism of the
    /// base group: a word `p1 p2 ... pk` maps to the composition applying
    /// `pk` first and `p1` last.
    pub fn phi(&self, word: &GroupWord) -> Automorphism {
        let mut out = Automorphism::identity(&self.base);
        for s in word.syllables() {
            out = out.compose(&self.base, &self.pc_power(s.vertex, s.exponent));
        }
        out
    }

    /// Whether `phi(word)` is the identity automorphism, evaluated one
    /// base generator at a time with early exit.
    fn phi_is_identity(&self, word: &GroupWord) -> bool {
        for x in self.base.vertex_ids() {
            let mut img = self.base.generator(x);
            for s in word.syllables().iter().rev() {
                let pc = self.pc_power(s.vertex, s.exponent);
                img = pc.apply(&self.base, &img);
            }
            if img != self.base.generator(x) {
                return false;
            }
        }
        true
    }

    /// Checks that the derived graph's defining relations hold among the
    /// partial conjugations: every edge commutes and every finite vertex
    /// order is an automorphism order. Violations are reported, not
    /// errors — on SIL graphs the edge rule genuinely over-approximates
    /// commutation.
    pub fn verify_phi_well_defined(&self) -> Report {
        let mut report = Report::new();
        let edges = self.graph.edges();
        let violations: Vec<String> = edges
            .par_iter()
            .filter_map(|&(i, j)| {
                let a = &self.pcs[i.index()];
                let b = &self.pcs[j.index()];
                if a.commutes(&self.base, b) {
                    None
                } else {
                    Some(format!(
                        "edge ({}, {}): partial conjugations do not commute",
                        self.graph.name(i),
                        self.graph.name(j)
                    ))
                }
            })
            .collect();
        for v in self.graph.vertex_ids() {
            if let CyclicOrder::Finite(n) = self.graph.order(v) {
                if !self.pcs[v.index()].pow(&self.base, n).is_identity() {
                    report.violation(format!(
                        "vertex {}: partial conjugation does not have order {n}",
                        self.graph.name(v)
                    ));
                }
            }
        }
        for line in violations {
            report.violation(line);
        }
        report.line(format!(
            "checked {} edges and {} vertex orders",
            edges.len(),
            self.graph.vertex_count()
        ));
        report
    }

    fn refuse_on_sils(&self) -> Result<(), SilsPresent> {
        let witnesses = self.base.find_sils();
        if witnesses.is_empty() {
            Ok(())
        } else {
            Err(SilsPresent { witnesses })
        }
    }

    /// Enumerates all nontrivial normal forms over the derived graph with
    /// at most `max_len` syllables (infinite-order exponents bounded by
    /// `exp_bound`) and checks that each evaluates to a nontrivial
    /// automorphism. Refuses on SIL graphs, where injectivity fails.
    pub fn verify_injectivity_sample(
        &self,
        max_len: usize,
        exp_bound: i64,
    ) -> Result<Report, SilsPresent> {
        self.refuse_on_sils()?;
        let mut report = Report::new();
        let words = enumerate_ball(&self.graph, max_len, exp_bound);
        let counterexamples: Vec<String> = words
            .par_iter()
            .filter(|w| !w.is_identity())
            .filter_map(|w| {
                if self.phi_is_identity(w) {
                    Some(format!(
                        "nontrivial word {} evaluates to the identity automorphism",
                        self.graph.format_word(w)
                    ))
                } else {
                    None
                }
            })
            .collect();
        for line in counterexamples {
            report.violation(line);
        }
        report.line(format!(
            "checked {} nontrivial words of length <= {max_len} (exponent bound {exp_bound})",
            words.len() - 1
        ));
        Ok(report)
    }

    /// Conjugation formula for the image of the inner-automorphism words:
    /// conjugating `p_v` by a generator `p_{w,D}` evaluates to `phi(p_v)`
    /// when `v` is outside `D` and to `phi(p_w p_v p_w^-1)` when `v` lies
    /// in `D`. Refuses on SIL graphs.
    pub fn verify_normality(&self) -> Result<Report, SilsPresent> {
        self.refuse_on_sils()?;
        let mut report = Report::new();
        let (delta, _) = self.base.center_split();
        let mut checked = 0usize;
        for v in self.base.vertex_ids() {
            if delta.contains(&v) {
                continue;
            }
            let pv = self.p_v_word(v);
            for (i, d) in self.descriptors.iter().enumerate() {
                let gen = self.graph.generator(VertexId(i as u32));
                let conjugated = self.graph.multiply(
                    &self.graph.multiply(&gen, &pv),
                    &self.graph.invert(&gen),
                );
                let lhs = self.phi(&conjugated);
                let rhs = if d.component.contains(&v) {
                    let pw = self.p_v_word(d.vertex);
                    self.phi(&self.graph.multiply(
                        &self.graph.multiply(&pw, &pv),
                        &self.graph.invert(&pw),
                    ))
                } else {
                    self.phi(&pv)
                };
                checked += 1;
                if lhs != rhs {
                    report.violation(format!(
                        "conjugating p_{} by {} does not match the normality formula",
                        self.base.name(v),
                        self.graph.name(VertexId(i as u32)),
                    ));
                }
            }
        }
        report.line(format!("checked {checked} conjugation formulas"));
        Ok(report)
    }

    /// Samples random word pairs over the derived graph and checks that
    /// evaluation is a homomorphism. Deterministic for a fixed seed.
    /// Refuses on SIL graphs: there the derived graph's commutation
    /// relations do not all hold among the partial conjugations, so
    /// evaluation is not constant on shuffle classes.
    pub fn verify_phi_homomorphism_sample(
        &self,
        seed: u64,
        samples: usize,
        max_len: usize,
    ) -> Result<Report, SilsPresent> {
        use rand::{Rng, SeedableRng};
        self.refuse_on_sils()?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut report = Report::new();
        if self.graph.vertex_count() == 0 {
            report.line("no partial conjugations; nothing to sample".to_string());
            return Ok(report);
        }
        for _ in 0..samples {
            let random_word = |rng: &mut rand_chacha::ChaCha8Rng| {
                let len = rng.gen_range(0..=max_len);
                let raw: Vec<(VertexId, i64)> = (0..len)
                    .map(|_| {
                        let v = VertexId(rng.gen_range(0..self.graph.vertex_count() as u32));
                        let e = match self.graph.order(v) {
                            CyclicOrder::Finite(n) => rng.gen_range(1..n as i64),
                            CyclicOrder::Infinite => *[-2, -1, 1, 2]
                                .iter()
                                .nth(rng.gen_range(0..4))
                                .unwrap(),
                        };
                        (v, e)
                    })
                    .collect();
                self.graph.normalize(&raw)
            };
            let x = random_word(&mut rng);
            let y = random_word(&mut rng);
            let lhs = self.phi(&self.graph.multiply(&x, &y));
            let rhs = self.phi(&x).compose(&self.base, &self.phi(&y));
            if lhs != rhs {
                report.violation(format!(
                    "phi({} * {}) differs from phi({}) . phi({})",
                    self.graph.format_word(&x),
                    self.graph.format_word(&y),
                    self.graph.format_word(&x),
                    self.graph.format_word(&y),
                ));
            }
        }
        report.line(format!("checked {samples} sampled word pairs (seed {seed})"));
        Ok(report)
    }
}

/// Edge rule of the derived graph: `p_{v,C}` and `p_{w,D}` span an edge
/// unless `d(v,w) >= 2`, `v` in `D` and `w` in `C`.
pub fn tilde_edge(base: &DefiningGraph, a: &PcDescriptor, b: &PcDescriptor) -> bool {
    let distant = match base.distance(a.vertex, b.vertex) {
        Some(d) => d >= 2,
        None => true,
    };
    !(distant && b.component.contains(&a.vertex) && a.component.contains(&b.vertex))
}

/// Verdict of the commutator sweep over all pairs of partial conjugations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutPcVerdict {
    /// Every commutator of two partial conjugations is inner.
    AbelianConsistent,
    /// Some commutator is certified non-inner; the witness pair is the
    /// first in descriptor order.
    NonAbelian {
        witness: (PcDescriptor, PcDescriptor),
    },
    /// At least one commutator could not be decided within the search
    /// bounds and none was certified non-inner.
    Inconclusive,
}

/// Outcome of [`out_pc_abelian_test`], including the SIL cross-reference.
#[derive(Debug, Clone)]
pub struct OutPcReport {
    pub verdict: OutPcVerdict,
    pub pairs_checked: usize,
    pub commutators_searched: usize,
    /// Every pair whose commutator was certified non-inner, in descriptor
    /// order.
    pub non_inner_pairs: Vec<(PcDescriptor, PcDescriptor)>,
    pub sil_witnesses: Vec<SilWitness>,
}

/// Tests whether conjugation classes of partial conjugations pairwise
/// commute: for every pair, the commutator is checked for inner-ness with
/// the given search bounds. Connected graphs only.
pub fn out_pc_abelian_test(
    g: &DefiningGraph,
    radius: usize,
    exp_bound: i64,
) -> Result<OutPcReport, NotConnected> {
    if !g.is_connected() {
        return Err(NotConnected);
    }
    let descriptors = all_partial_conjugations(g);
    let pcs: Vec<Automorphism> = descriptors
        .iter()
        .map(|d| Automorphism::from_descriptor(g, d).expect("valid descriptor"))
        .collect();

    let pairs: Vec<(usize, usize)> = (0..pcs.len())
        .flat_map(|i| (i + 1..pcs.len()).map(move |j| (i, j)))
        .collect();

    let verdicts: Vec<(usize, usize, Option<InnerVerdict>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = &pcs[i];
            let b = &pcs[j];
            if a.commutes(g, b) {
                return (i, j, None);
            }
            let comm = a
                .compose(g, b)
                .compose(g, &a.inverse())
                .compose(g, &b.inverse());
            (i, j, Some(comm.is_inner(g, radius, exp_bound)))
        })
        .collect();

    let mut commutators_searched = 0usize;
    let mut saw_inconclusive = false;
    let mut non_inner_pairs = Vec::new();
    for (i, j, verdict) in &verdicts {
        match verdict {
            None | Some(InnerVerdict::Found(_)) => {}
            Some(InnerVerdict::NotFound) => {
                non_inner_pairs.push((descriptors[*i].clone(), descriptors[*j].clone()));
            }
            Some(InnerVerdict::Inconclusive) => saw_inconclusive = true,
        }
        if verdict.is_some() {
            commutators_searched += 1;
        }
    }

    let verdict = match non_inner_pairs.first() {
        Some(pair) => OutPcVerdict::NonAbelian {
            witness: pair.clone(),
        },
        None if saw_inconclusive => OutPcVerdict::Inconclusive,
        None => OutPcVerdict::AbelianConsistent,
    };
    Ok(OutPcReport {
        verdict,
        pairs_checked: pairs.len(),
        commutators_searched,
        non_inner_pairs,
        sil_witnesses: g.find_sils(),
    })
}
