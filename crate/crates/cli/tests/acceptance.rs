//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p graphprod-cli --test acceptance`.

use std::collections::HashMap;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;

use graphprod_core::aut::{all_partial_conjugations, Automorphism};
use graphprod_core::autpc::{out_pc_abelian_test, tilde_edge, OutPcVerdict, TildeGraph};
use graphprod_core::building::{
    link_flag_check, verify_building_axiom, verify_s_classes, ChamberBall, PosetBall,
};
use graphprod_core::enumerate::{
    all_classes_up_to, connected_classes_up_to, graph_from_mask, order_assignments_up_to_aut,
};
use graphprod_core::graph::{CyclicOrder, DefiningGraph, VertexId, VertexSet};
use graphprod_core::words::{oracle_least_reduced, GroupWord, Syllable};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn finish(criterion: &str, failures: &[String], elapsed_s: f64, budget_s: f64, detail: &str) {
    let status = if failures.is_empty() && elapsed_s <= budget_s {
        "PASS"
    } else {
        "FAIL"
    };
    println!("[{status}] {criterion}: {detail} ({elapsed_s:.1}s / {budget_s:.0}s budget)");
    for f in failures.iter().take(20) {
        println!("    {f}");
    }
    assert!(
        failures.is_empty(),
        "{criterion}: {} failure(s), first: {}",
        failures.len(),
        failures[0]
    );
    assert!(
        elapsed_s <= budget_s,
        "{criterion}: took {elapsed_s:.1}s, budget {budget_s:.0}s"
    );
}

/// Connected no-SIL graphs with up to 6 vertices, orders in {2, 3}, one
/// order assignment per orbit of the graph's automorphism group.
struct FamilyCase {
    n: usize,
    mask: u32,
    orders: Vec<CyclicOrder>,
}

static FAMILY: OnceLock<Vec<FamilyCase>> = OnceLock::new();

fn no_sil_family() -> &'static [FamilyCase] {
    FAMILY.get_or_init(|| {
        let palette = [CyclicOrder::Finite(2), CyclicOrder::Finite(3)];
        let mut out = Vec::new();
        for (n, mask) in connected_classes_up_to(6) {
            let probe = graph_from_mask(n, mask, &vec![CyclicOrder::Finite(2); n]);
            if probe.has_sil() {
                continue;
            }
            for orders in order_assignments_up_to_aut(n, mask, &palette) {
                out.push(FamilyCase { n, mask, orders });
            }
        }
        out
    })
}

#[test]
fn criterion_1_six_path_derived_graph() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let text = std::fs::read_to_string(data("path6.g")).unwrap();
    let g = DefiningGraph::parse(&text).unwrap();
    let t = TildeGraph::build(&g);

    let expected: Vec<(&str, &str, &[&str])> = vec![
        ("p_v1_v3", "v1", &["v3", "v4", "v5", "v6"]),
        ("p_v2_v4", "v2", &["v4", "v5", "v6"]),
        ("p_v3_v1", "v3", &["v1"]),
        ("p_v3_v5", "v3", &["v5", "v6"]),
        ("p_v4_v1", "v4", &["v1", "v2"]),
        ("p_v4_v6", "v4", &["v6"]),
        ("p_v5_v1", "v5", &["v1", "v2", "v3"]),
        ("p_v6_v1", "v6", &["v1", "v2", "v3", "v4"]),
    ];
    if t.graph().vertex_count() != 8 {
        failures.push(format!("expected 8 derived vertices, got {}", t.graph().vertex_count()));
    }
    for (i, (name, base_v, comp)) in expected.iter().enumerate() {
        let d = &t.descriptors()[i];
        let comp_set: VertexSet = comp.iter().map(|m| g.vertex_id(m).unwrap()).collect();
        if t.graph().name(VertexId(i as u32)) != *name
            || g.name(d.vertex) != *base_v
            || d.component != comp_set
        {
            failures.push(format!("descriptor {i} mismatch: expected {name}"));
        }
    }
    if t.graph().edge_count() != 18 {
        failures.push(format!("expected 18 derived edges, got {}", t.graph().edge_count()));
    }
    let non_edges = [
        ("p_v1_v3", "p_v3_v1"),
        ("p_v1_v3", "p_v4_v1"),
        ("p_v1_v3", "p_v5_v1"),
        ("p_v1_v3", "p_v6_v1"),
        ("p_v2_v4", "p_v4_v1"),
        ("p_v2_v4", "p_v5_v1"),
        ("p_v2_v4", "p_v6_v1"),
        ("p_v3_v5", "p_v5_v1"),
        ("p_v3_v5", "p_v6_v1"),
        ("p_v4_v6", "p_v6_v1"),
    ];
    for (a, b) in non_edges {
        let va = t.graph().vertex_id(a).unwrap();
        let vb = t.graph().vertex_id(b).unwrap();
        if t.graph().adjacent(va, vb) {
            failures.push(format!("{a} - {b} should be a non-edge"));
        }
    }

    // The emitted form from the CLI parses back to the same graph.
    let (stdout, code) = run_cli(&["tilde", "--graph", &data("path6.g"), "--emit"]);
    if code != 0 {
        failures.push(format!("tilde --emit exited {code}"));
    }
    match DefiningGraph::parse(&stdout) {
        Ok(emitted) => {
            if emitted.vertex_count() != 8 || emitted.edge_count() != 18 {
                failures.push("emitted derived graph has wrong size".to_string());
            }
        }
        Err(e) => failures.push(format!("emitted derived graph does not parse: {e}")),
    }

    finish(
        "criterion 1",
        &failures,
        start.elapsed().as_secs_f64(),
        1.0,
        "six-path derived graph: 8 vertices with exact components, 18 edges",
    );
}

#[test]
fn criterion_2_sil_detection() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let text = std::fs::read_to_string(data("chorded10.g")).unwrap();
    let g = DefiningGraph::parse(&text).unwrap();
    if !g.find_sils().is_empty() {
        failures.push("chorded 10-cycle should have no SILs".to_string());
    }

    let text = std::fs::read_to_string(data("tripod_plus.g")).unwrap();
    let g = DefiningGraph::parse(&text).unwrap();
    let sils = g.find_sils();
    let x = g.vertex_id("x").unwrap();
    let y = g.vertex_id("y").unwrap();
    let z: VertexSet = [g.vertex_id("z").unwrap()].into_iter().collect();
    if !sils
        .iter()
        .any(|s| s.v == x && s.w == y && s.component == z)
    {
        failures.push("tripod-plus misses the witness (x, y, {z})".to_string());
    }

    finish(
        "criterion 2",
        &failures,
        start.elapsed().as_secs_f64(),
        1.0,
        "SIL detection on the chorded 10-cycle and the extended tripod",
    );
}

/// Expected composite image under the commuting-case formulas.
fn piecewise_expect(
    g: &DefiningGraph,
    v: VertexId,
    w: VertexId,
    c: &VertexSet,
    d: &VertexSet,
    c_is_c0: bool,
    d_is_d0: bool,
    x: VertexId,
) -> GroupWord {
    let gen = |u: VertexId| g.generator(u);
    let conj = |a: &GroupWord, t: &GroupWord| g.conjugate(a, t);
    match (c_is_c0, d_is_d0) {
        (false, false) => {
            if c.contains(&x) {
                conj(&gen(v), &gen(x))
            } else if d.contains(&x) {
                conj(&gen(w), &gen(x))
            } else {
                gen(x)
            }
        }
        (false, true) => {
            if c.contains(&x) {
                conj(&g.multiply(&gen(w), &gen(v)), &gen(x))
            } else if d.contains(&x) {
                conj(&gen(w), &gen(x))
            } else {
                gen(x)
            }
        }
        (true, false) => {
            if d.contains(&x) {
                conj(&g.multiply(&gen(v), &gen(w)), &gen(x))
            } else if c.contains(&x) {
                conj(&gen(v), &gen(x))
            } else {
                gen(x)
            }
        }
        (true, true) => unreachable!("non-commuting case handled separately"),
    }
}

fn lemma_case_failures(case: &FamilyCase) -> Vec<String> {
    let g = graph_from_mask(case.n, case.mask, &case.orders);
    let mut fails = Vec::new();
    let descriptors = all_partial_conjugations(&g);
    let pcs: Vec<Automorphism> = descriptors
        .iter()
        .map(|d| Automorphism::from_descriptor(&g, d).unwrap())
        .collect();
    let label = format!("n={} mask={} orders={:?}", case.n, case.mask, case.orders);

    // Commutation matches the derived-graph edge rule, for every pair.
    for i in 0..pcs.len() {
        for j in i + 1..pcs.len() {
            let commute = pcs[i].commutes(&g, &pcs[j]);
            let edge = tilde_edge(&g, &descriptors[i], &descriptors[j]);
            if commute != edge {
                fails.push(format!(
                    "{label}: pair ({}, {}) commute={commute} but edge={edge}",
                    descriptors[i].name(&g),
                    descriptors[j].name(&g)
                ));
            }
        }
    }

    // Partial conjugations have exactly the vertex group order.
    for (d, pc) in descriptors.iter().zip(&pcs) {
        let CyclicOrder::Finite(n) = g.order(d.vertex) else { continue };
        if !pc.pow(&g, n).is_identity() {
            fails.push(format!("{label}: {} order exceeds {n}", d.name(&g)));
        }
        for k in 1..n {
            if pc.pow(&g, k).is_identity() {
                fails.push(format!("{label}: {} order divides {k}", d.name(&g)));
            }
        }
    }

    // Component containment and the composite formulas for distant pairs.
    for v in g.vertex_ids() {
        for w in g.vertex_ids() {
            if v == w || g.distance(v, w).map_or(false, |dist| dist < 2) {
                continue;
            }
            let comps_v = g.components_outside_star(v);
            let comps_w = g.components_outside_star(w);
            let c0 = comps_v
                .iter()
                .find(|c| c.contains(&w))
                .expect("w lies outside st(v)");
            let d0 = comps_w
                .iter()
                .find(|c| c.contains(&v))
                .expect("v lies outside st(w)");
            for c in &comps_v {
                if c != c0 && !c.is_subset(d0) {
                    fails.push(format!(
                        "{label}: component {c:?} of {} not inside the {}-component of {}",
                        g.name(v),
                        g.name(v),
                        g.name(w)
                    ));
                }
            }
            for c in &comps_v {
                for d in &comps_w {
                    let a = &pcs[descriptors
                        .iter()
                        .position(|t| t.vertex == v && &t.component == c)
                        .unwrap()];
                    let b = &pcs[descriptors
                        .iter()
                        .position(|t| t.vertex == w && &t.component == d)
                        .unwrap()];
                    let ab = a.compose(&g, b);
                    let ba = b.compose(&g, a);
                    if c == c0 && d == d0 {
                        // The displayed non-commuting values on the
                        // generator of v.
                        let gen_v = g.generator(v);
                        let lhs = ab.apply(&g, &gen_v);
                        let expected = g.normalize(&[(v, 1), (w, 1), (v, 1), (w, -1), (v, -1)]);
                        if lhs != expected {
                            fails.push(format!("{label}: composite value on v wrong"));
                        }
                        let rhs = ba.apply(&g, &gen_v);
                        let expected = g.normalize(&[(w, 1), (v, 1), (w, -1)]);
                        if rhs != expected {
                            fails.push(format!("{label}: reversed composite value on v wrong"));
                        }
                        if a.commutes(&g, b) {
                            fails.push(format!("{label}: distinguished pair commutes"));
                        }
                    } else {
                        for x in g.vertex_ids() {
                            let expected =
                                piecewise_expect(&g, v, w, c, d, c == c0, d == d0, x);
                            let gen_x = g.generator(x);
                            if ab.apply(&g, &gen_x) != expected
                                || ba.apply(&g, &gen_x) != expected
                            {
                                fails.push(format!(
                                    "{label}: piecewise formula fails at {} for pair ({}, {})",
                                    g.name(x),
                                    g.name(v),
                                    g.name(w)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    fails
}

#[test]
fn criterion_3_commutation_lemma_sweep() {
    let start = Instant::now();
    let family = no_sil_family();
    let failures: Vec<String> = family.par_iter().flat_map(lemma_case_failures).collect();
    finish(
        "criterion 3",
        &failures,
        start.elapsed().as_secs_f64(),
        300.0,
        &format!(
            "commutation = edge rule + composite formulas over {} no-SIL cases",
            family.len()
        ),
    );
}

fn theorem_case_failures(case: &FamilyCase) -> Vec<String> {
    let g = graph_from_mask(case.n, case.mask, &case.orders);
    let label = format!("n={} mask={} orders={:?}", case.n, case.mask, case.orders);
    let mut fails = Vec::new();
    let t = TildeGraph::build(&g);
    let phi = t.verify_phi_well_defined();
    if !phi.is_ok() {
        fails.push(format!("{label}: relations: {}", phi.summary()));
    }
    match t.verify_normality() {
        Ok(r) if r.is_ok() => {}
        Ok(r) => fails.push(format!("{label}: normality: {}", r.summary())),
        Err(e) => fails.push(format!("{label}: normality refused: {e}")),
    }
    match t.verify_injectivity_sample(3, 2) {
        Ok(r) if r.is_ok() => {}
        Ok(r) => fails.push(format!("{label}: injectivity: {}", r.summary())),
        Err(e) => fails.push(format!("{label}: injectivity refused: {e}")),
    }
    fails
}

#[test]
fn criterion_4_structure_theorem_sweep() {
    let start = Instant::now();
    let family = no_sil_family();
    let failures: Vec<String> = family.par_iter().flat_map(theorem_case_failures).collect();
    finish(
        "criterion 4",
        &failures,
        start.elapsed().as_secs_f64(),
        600.0,
        &format!(
            "relations, normality and injectivity samples over {} no-SIL cases",
            family.len()
        ),
    );
}

#[test]
fn criterion_5_abelianness_dichotomy() {
    let start = Instant::now();
    let mut no_sil_masks = Vec::new();
    let mut sil_masks = Vec::new();
    for (n, mask) in connected_classes_up_to(6) {
        let probe = graph_from_mask(n, mask, &vec![CyclicOrder::Finite(2); n]);
        if probe.has_sil() {
            if sil_masks.len() < 24 {
                sil_masks.push((n, mask));
            }
        } else if no_sil_masks.len() < 24 {
            no_sil_masks.push((n, mask));
        }
    }
    assert!(no_sil_masks.len() >= 20 && sil_masks.len() >= 20);

    let orders_for = |n: usize, alternate: bool| -> Vec<CyclicOrder> {
        (0..n)
            .map(|i| {
                if alternate && i % 2 == 1 {
                    CyclicOrder::Finite(3)
                } else {
                    CyclicOrder::Finite(2)
                }
            })
            .collect()
    };

    let mut cases: Vec<(usize, u32, bool, bool)> = Vec::new();
    for &(n, mask) in &no_sil_masks {
        cases.push((n, mask, false, false));
        cases.push((n, mask, false, true));
    }
    for &(n, mask) in &sil_masks {
        cases.push((n, mask, true, false));
        cases.push((n, mask, true, true));
    }

    let failures: Vec<String> = cases
        .par_iter()
        .flat_map(|&(n, mask, has_sil, alternate)| {
            let g = graph_from_mask(n, mask, &orders_for(n, alternate));
            let label = format!("n={n} mask={mask} alternate={alternate}");
            let report = match out_pc_abelian_test(&g, 4, 2) {
                Ok(r) => r,
                Err(e) => return vec![format!("{label}: refused: {e}")],
            };
            let mut fails = Vec::new();
            match (&report.verdict, has_sil) {
                (OutPcVerdict::AbelianConsistent, false) => {}
                (OutPcVerdict::NonAbelian { .. }, true) => {}
                (OutPcVerdict::Inconclusive, _) => {
                    fails.push(format!("{label}: inconclusive verdict"))
                }
                (v, _) => fails.push(format!("{label}: verdict {v:?} contradicts SIL class")),
            }
            fails
        })
        .collect();

    finish(
        "criterion 5",
        &failures,
        start.elapsed().as_secs_f64(),
        600.0,
        &format!(
            "abelian dichotomy over {} no-SIL and {} SIL graphs, two order patterns each",
            no_sil_masks.len(),
            sil_masks.len()
        ),
    );
}

#[test]
fn criterion_6_building_axioms() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let text = std::fs::read_to_string(data("edge23.g")).unwrap();
    let g = DefiningGraph::parse(&text).unwrap();
    let ball = ChamberBall::build(&g, 2, 1);
    if ball.chambers().len() != 6 || !ball.is_complete() {
        failures.push("order-6 building should be complete at radius 2".to_string());
    }
    for (name, report) in [
        ("axiom", verify_building_axiom(&ball)),
        ("classes", verify_s_classes(&ball)),
        ("links", link_flag_check(&PosetBall::build(&g, 2, 1))),
    ] {
        if !report.is_ok() {
            failures.push(format!("edge (2,3): {name}: {}", report.summary()));
        }
    }

    let text = std::fs::read_to_string(data("path3_racg.g")).unwrap();
    let g = DefiningGraph::parse(&text).unwrap();
    let ball = ChamberBall::build(&g, 3, 1);
    for (name, report) in [
        ("axiom", verify_building_axiom(&ball)),
        ("classes", verify_s_classes(&ball)),
        ("links", link_flag_check(&PosetBall::build(&g, 3, 1))),
    ] {
        if !report.is_ok() {
            failures.push(format!("3-path ball: {name}: {}", report.summary()));
        }
    }

    finish(
        "criterion 6",
        &failures,
        start.elapsed().as_secs_f64(),
        60.0,
        "distance/gallery axiom, class sizes and flag links on two balls",
    );
}

/// Compact encoding of a word for the oracle sweep maps; exponents stay
/// within -7..7 for the sweep's alphabets and lengths.
fn encode_word(sylls: &[Syllable]) -> u64 {
    let mut out = (sylls.len() as u64) << 48;
    for (i, s) in sylls.iter().enumerate() {
        let v = s.vertex.0 as u64;
        let e = (s.exponent + 8) as u64;
        debug_assert!(v < 4 && s.exponent != 0 && s.exponent.abs() <= 7);
        out |= (v << 4 | e) << (6 * i);
    }
    out
}

struct OracleSweep {
    words: usize,
    fails: Vec<String>,
}

fn oracle_sweep_case(n: usize, mask: u32, orders: &[CyclicOrder]) -> OracleSweep {
    let g = graph_from_mask(n, mask, orders);
    let letters: Vec<(VertexId, i64)> = g
        .vertex_ids()
        .flat_map(|v| -> Vec<(VertexId, i64)> {
            match g.order(v) {
                CyclicOrder::Finite(2) => vec![(v, 1)],
                CyclicOrder::Finite(3) => vec![(v, 1), (v, 2)],
                CyclicOrder::Infinite => vec![(v, -1), (v, 1)],
                CyclicOrder::Finite(_) => unreachable!("sweep palette is 2, 3, inf"),
            }
        })
        .collect();

    let mut sweep = OracleSweep {
        words: 0,
        fails: Vec::new(),
    };
    let mut nf_to_key: HashMap<u64, u64> = HashMap::new();
    let mut key_to_nf: HashMap<u64, u64> = HashMap::new();
    let label = format!("n={n} mask={mask} orders={orders:?}");

    struct Frame {
        nf: GroupWord,
        key: Vec<Syllable>,
        depth: usize,
    }
    let mut stack = vec![Frame {
        nf: g.identity_word(),
        key: Vec::new(),
        depth: 0,
    }];
    while let Some(frame) = stack.pop() {
        sweep.words += 1;
        let enc_nf = encode_word(frame.nf.syllables());
        let enc_key = encode_word(&frame.key);
        match nf_to_key.insert(enc_nf, enc_key) {
            Some(prev) if prev != enc_key => sweep.fails.push(format!(
                "{label}: one normal form, two oracle classes (nf {enc_nf:x})"
            )),
            _ => {}
        }
        match key_to_nf.insert(enc_key, enc_nf) {
            Some(prev) if prev != enc_nf => sweep.fails.push(format!(
                "{label}: one oracle class, two normal forms (key {enc_key:x})"
            )),
            _ => {}
        }
        if frame.depth == 6 || !sweep.fails.is_empty() {
            continue;
        }
        for &(v, e) in &letters {
            let nf = g.append_syllable(&frame.nf, v, e);
            let mut key_input: Vec<(VertexId, i64)> = frame
                .key
                .iter()
                .map(|s| (s.vertex, s.exponent))
                .collect();
            key_input.push((v, e));
            let key = oracle_least_reduced(&g, &key_input);
            stack.push(Frame {
                nf,
                key,
                depth: frame.depth + 1,
            });
        }
    }
    sweep
}

#[test]
fn criterion_7_normal_form_oracle_equivalence() {
    let start = Instant::now();
    let palette = [
        CyclicOrder::Finite(2),
        CyclicOrder::Finite(3),
        CyclicOrder::Infinite,
    ];
    let mut cases = Vec::new();
    for (n, mask) in all_classes_up_to(4) {
        for orders in order_assignments_up_to_aut(n, mask, &palette) {
            cases.push((n, mask, orders));
        }
    }
    let sweeps: Vec<OracleSweep> = cases
        .par_iter()
        .map(|(n, mask, orders)| oracle_sweep_case(*n, *mask, orders))
        .collect();
    let words: usize = sweeps.iter().map(|s| s.words).sum();
    let failures: Vec<String> = sweeps.into_iter().flat_map(|s| s.fails).collect();
    finish(
        "criterion 7",
        &failures,
        start.elapsed().as_secs_f64(),
        600.0,
        &format!(
            "normal form vs oracle over {} raw words in {} graph cases",
            words,
            cases.len()
        ),
    );
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let exe = env!("CARGO_BIN_EXE_graphprod");
    let output = std::process::Command::new(exe)
        .args(args)
        .output()
        .expect("failed to spawn graphprod");
    (
        String::from_utf8_lossy(&output.stdout).into_owned(),
        output.status.code().unwrap_or(-1),
    )
}

#[test]
fn criterion_8_report_determinism() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let p6 = data("path6.g");
    let tripod = data("tripod_plus.g");
    let edge = data("edge23.g");
    let commands: Vec<Vec<&str>> = vec![
        vec!["sil", "--graph", &p6],
        vec!["tilde", "--graph", &p6, "--emit"],
        vec!["verify", "--graph", &p6, "--all"],
        vec!["verify", "--graph", &tripod, "--all"],
        vec!["building", "--graph", &edge, "--radius", "2", "--check", "--emit"],
        vec!["nf", "--graph", &edge, "--word", "w v w^2 v"],
    ];
    for cmd in &commands {
        let (out1, code1) = run_cli(cmd);
        let (out2, code2) = run_cli(cmd);
        if out1 != out2 || code1 != code2 {
            failures.push(format!("command {cmd:?} is not deterministic"));
        }
        let mut jobs1 = cmd.clone();
        jobs1.extend_from_slice(&["--jobs", "1"]);
        let mut jobs4 = cmd.clone();
        jobs4.extend_from_slice(&["--jobs", "4"]);
        let (outj1, _) = run_cli(&jobs1);
        let (outj4, _) = run_cli(&jobs4);
        if outj1 != out1 || outj4 != out1 {
            failures.push(format!("command {cmd:?} output depends on --jobs"));
        }
    }

    finish(
        "criterion 8",
        &failures,
        start.elapsed().as_secs_f64(),
        120.0,
        &format!("byte-identical reports across reruns and --jobs for {} commands", commands.len()),
    );
}
