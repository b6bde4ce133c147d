//! Command-line front end: normal forms, SIL detection, the derived graph
//! of partial conjugations, automorphism algebra, the verification suite,
//! building balls and the finite symmetry action.
//!
//! Every report is deterministic for fixed inputs and flags (including
//! `--jobs`), ends with `OK` or `FAIL <n>`, and the process exits 0 on
//! success, 1 when FAIL lines were produced and 2 on usage or parse
//! errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use graphprod_core::aut::{Automorphism, Side};
use graphprod_core::autpc::{out_pc_abelian_test, OutPcVerdict, TildeGraph};
use graphprod_core::building::{
    coset_rep, link_flag_check, verify_building_axiom, verify_s_classes, ChamberBall,
    CosetVertex, PosetBall, SigmaElement,
};
use graphprod_core::graph::{DefiningGraph, VertexId, VertexSet};
use graphprod_core::report::Report;
use graphprod_core::words::GroupWord;

#[derive(Parser)]
#[command(
    name = "graphprod",
    about = "Exact computation in graph products of cyclic groups",
    version
)]
struct Cli {
    /// Bound on sweep parallelism; reports are byte-identical for any
    /// value. 0 means one thread per available core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file (`vertex <name> order <n|inf>` / `edge <a> <b>` lines).
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical normal form of a word.
    Nf {
        #[command(flatten)]
        graph: GraphArg,
        /// Word in `name^exp` tokens, e.g. "v1 v2^-1 v1^3".
        #[arg(long)]
        word: String,
    },
    /// List all separating intersections of links.
    Sil {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Build the derived graph of partial conjugations.
    Tilde {
        #[command(flatten)]
        graph: GraphArg,
        /// Emit the derived graph in graph file format.
        #[arg(long)]
        emit: bool,
    },
    /// Build, compose and apply automorphism generators.
    Aut {
        #[command(flatten)]
        graph: GraphArg,
        /// Generator specs, composed left to right:
        /// `pc:<v>:<member>` (partial conjugation by v of the component
        /// containing <member>), `inner:<word>`, `viso:<v>:<k>`,
        /// `sym:<a>=<b>,...` (unlisted vertices fixed),
        /// `trans:<v>:<w>:<left|right>:<k>`.
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// Optional word to apply the composed automorphism to.
        #[arg(long)]
        word: Option<String>,
    },
    /// Run the structure-theorem verification suite.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        /// Run every check (default if no individual check is chosen).
        #[arg(long)]
        all: bool,
        /// Commutation and orders behind the derived graph's edges.
        #[arg(long)]
        phi: bool,
        /// Conjugation formulas for the inner-automorphism words.
        #[arg(long)]
        normality: bool,
        /// Nontrivial short words evaluate to nontrivial automorphisms.
        #[arg(long)]
        injectivity: bool,
        /// Commutators of partial conjugations against the SIL dichotomy.
        #[arg(long)]
        outpc: bool,
        /// Sampled homomorphism property of the evaluation map.
        #[arg(long)]
        homsample: bool,
        /// Syllable-length bound for the injectivity enumeration.
        #[arg(long, default_value_t = 3)]
        len: usize,
        /// Search radius for conjugator searches.
        #[arg(long = "inner-radius", default_value_t = 4)]
        inner_radius: usize,
        /// Exponent bound for infinite-order vertices in enumerations.
        #[arg(long = "exp-bound", default_value_t = 2)]
        exp_bound: i64,
        /// Seed for the sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chamber and poset balls of the right-angled building.
    Building {
        #[command(flatten)]
        graph: GraphArg,
        /// Ball radius in syllables.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Exponent bound for infinite-order vertices.
        #[arg(long = "exp-bound", default_value_t = 2)]
        exp_bound: i64,
        /// Emit chamber and poset data.
        #[arg(long)]
        emit: bool,
        /// Verify the distance/gallery axiom, class sizes and flag links.
        #[arg(long)]
        check: bool,
    },
    /// Apply a finite symmetry (graph symmetry + vertex isomorphisms).
    Act {
        #[command(flatten)]
        graph: GraphArg,
        /// Permutation as `a=b,c=d,...`; unlisted vertices stay fixed.
        #[arg(long)]
        perm: Option<String>,
        /// Vertex isomorphism `v:k`, repeatable.
        #[arg(long = "viso")]
        visos: Vec<String>,
        /// Chamber target: a word.
        #[arg(long)]
        chamber: Option<String>,
        /// Coset target: `<word> | <t1> <t2> ...`.
        #[arg(long)]
        coset: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = if cli.jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        cli.jobs
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    match pool.install(|| run(cli.command)) {
        Ok(report) => {
            print!("{}", render(&report));
            if report.is_ok() {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}

/// Renders a report with its summary line; an emitted graph keeps its
/// format parseable by turning the summary into a comment.
fn render(report: &Report) -> String {
    let mut out = String::new();
    for line in report.lines() {
        out.push_str(line);
        out.push('\n');
    }
    let emitting = report.lines().iter().any(|l| l.starts_with("vertex "));
    if emitting && report.is_ok() {
        out.push_str("# OK\n");
    } else {
        out.push_str(&report.summary());
        out.push('\n');
    }
    out
}

fn load_graph(arg: &GraphArg) -> Result<DefiningGraph, String> {
    let text = std::fs::read_to_string(&arg.graph)
        .map_err(|e| format!("cannot read {}: {e}", arg.graph.display()))?;
    DefiningGraph::parse(&text).map_err(|e| format!("{}: {e}", arg.graph.display()))
}

fn run(command: Command) -> Result<Report, String> {
    match command {
        Command::Nf { graph, word } => {
            let g = load_graph(&graph)?;
            let w = g.parse_word(&word).map_err(|e| e.to_string())?;
            let mut report = Report::new();
            report.line(g.format_word(&w));
            Ok(report)
        }
        Command::Sil { graph } => {
            let g = load_graph(&graph)?;
            let mut report = Report::new();
            let sils = g.find_sils();
            if sils.is_empty() {
                report.line("no SILs found");
            } else {
                for s in &sils {
                    report.line(format!(
                        "sil {} {} | {}",
                        g.name(s.v),
                        g.name(s.w),
                        names(&g, &s.component)
                    ));
                }
                report.line(format!("{} SIL witness(es)", sils.len()));
            }
            Ok(report)
        }
        Command::Tilde { graph, emit } => {
            let g = load_graph(&graph)?;
            let t = TildeGraph::build(&g);
            let mut report = Report::new();
            if emit {
                for line in t.graph().to_string().lines() {
                    report.line(line);
                }
            } else {
                report.line(format!(
                    "tilde vertices {} edges {}",
                    t.graph().vertex_count(),
                    t.graph().edge_count()
                ));
                for (i, d) in t.descriptors().iter().enumerate() {
                    report.line(format!(
                        "vertex_info {} = ({}, {})",
                        t.graph().name(VertexId(i as u32)),
                        g.name(d.vertex),
                        names(&g, &d.component)
                    ));
                }
            }
            Ok(report)
        }
        Command::Aut { graph, gens, word } => {
            let g = load_graph(&graph)?;
            let mut aut = Automorphism::identity(&g);
            for spec in &gens {
                let gen = parse_generator(&g, spec)?;
                aut = aut.compose(&g, &gen);
            }
            let mut report = Report::new();
            for line in aut.format(&g).lines() {
                report.line(line);
            }
            if let Some(word) = word {
                let w = g.parse_word(&word).map_err(|e| e.to_string())?;
                report.line(format!("image {}", g.format_word(&aut.apply(&g, &w))));
            }
            Ok(report)
        }
        Command::Verify {
            graph,
            all,
            phi,
            normality,
            injectivity,
            outpc,
            homsample,
            len,
            inner_radius,
            exp_bound,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let none_selected = !(phi || normality || injectivity || outpc || homsample);
            let all = all || none_selected;
            Ok(verify(
                &g,
                VerifySelection {
                    phi: all || phi,
                    normality: all || normality,
                    injectivity: all || injectivity,
                    outpc: all || outpc,
                    homsample: all || homsample,
                    explicit: !all,
                },
                len,
                inner_radius,
                exp_bound,
                seed,
            ))
        }
        Command::Building {
            graph,
            radius,
            exp_bound,
            emit,
            check,
        } => {
            let g = load_graph(&graph)?;
            let ball = ChamberBall::build(&g, radius, exp_bound);
            let poset = PosetBall::build(&g, radius, exp_bound);
            let mut report = Report::new();
            report.line(format!(
                "chambers {} poset_elements {} radius {radius} exp_bound {exp_bound}",
                ball.chambers().len(),
                poset.elements().len()
            ));
            if emit {
                for line in ball.export().lines() {
                    report.line(line);
                }
                for line in poset.export().lines() {
                    report.line(line);
                }
            }
            if check {
                let axiom = verify_building_axiom(&ball);
                prefix_into(&mut report, "axiom", &axiom);
                let classes = verify_s_classes(&ball);
                prefix_into(&mut report, "classes", &classes);
                let flag = link_flag_check(&poset);
                prefix_into(&mut report, "links", &flag);
            }
            Ok(report)
        }
        Command::Act {
            graph,
            perm,
            visos,
            chamber,
            coset,
        } => {
            let g = load_graph(&graph)?;
            let sigma = parse_sigma(&g, perm.as_deref(), &visos)?;
            let mut report = Report::new();
            match (chamber, coset) {
                (Some(word), None) => {
                    let w = g.parse_word(&word).map_err(|e| e.to_string())?;
                    report.line(format!(
                        "chamber {}",
                        g.format_word(&sigma.apply_chamber(&g, &w))
                    ));
                }
                (None, Some(spec)) => {
                    let cv = parse_coset(&g, &spec)?;
                    let moved = sigma.apply_coset(&g, &cv);
                    report.line(format!(
                        "coset {} | {}",
                        g.format_word(&moved.rep),
                        names(&g, &moved.spherical)
                    ));
                }
                _ => return Err("act needs exactly one of --chamber or --coset".into()),
            }
            Ok(report)
        }
    }
}

struct VerifySelection {
    phi: bool,
    normality: bool,
    injectivity: bool,
    outpc: bool,
    homsample: bool,
    /// Individually requested checks turn refusals into failures; the
    /// full suite notes them and moves on.
    explicit: bool,
}

fn verify(
    g: &DefiningGraph,
    sel: VerifySelection,
    len: usize,
    inner_radius: usize,
    exp_bound: i64,
    seed: u64,
) -> Report {
    let mut report = Report::new();
    let sils = g.find_sils();
    if sils.is_empty() {
        report.line("sils: none");
    } else {
        report.line(format!("sils: {} witness(es)", sils.len()));
    }
    let t = TildeGraph::build(g);

    if sel.phi {
        let phi_report = t.verify_phi_well_defined();
        if sils.is_empty() {
            prefix_into(&mut report, "phi-relations", &phi_report);
        } else {
            // On SIL graphs the edge rule over-approximates commutation;
            // violations are informational.
            report.line(format!(
                "phi-relations: {} violation(s) with SILs present (informational)",
                phi_report.violations()
            ));
            for line in phi_report.lines() {
                let text = line.strip_prefix("FAIL ").unwrap_or(line);
                report.line(format!("phi-relations: {text}"));
            }
        }
    }
    if sel.normality {
        match t.verify_normality() {
            Ok(r) => prefix_into(&mut report, "normality", &r),
            Err(e) => refusal(&mut report, "normality", &e.to_string(), sel.explicit),
        }
    }
    if sel.injectivity {
        match t.verify_injectivity_sample(len, exp_bound) {
            Ok(r) => prefix_into(&mut report, "injectivity", &r),
            Err(e) => refusal(&mut report, "injectivity", &e.to_string(), sel.explicit),
        }
    }
    if sel.outpc {
        match out_pc_abelian_test(g, inner_radius, exp_bound) {
            Ok(r) => {
                let verdict = match &r.verdict {
                    OutPcVerdict::AbelianConsistent => "abelian-consistent".to_string(),
                    OutPcVerdict::NonAbelian { witness: (a, b) } => format!(
                        "non-abelian (witness {} , {})",
                        a.name(g),
                        b.name(g)
                    ),
                    OutPcVerdict::Inconclusive => "inconclusive".to_string(),
                };
                report.line(format!(
                    "outpc: {verdict} over {} pairs ({} commutators searched)",
                    r.pairs_checked, r.commutators_searched
                ));
                let consistent = match &r.verdict {
                    OutPcVerdict::AbelianConsistent => r.sil_witnesses.is_empty(),
                    OutPcVerdict::NonAbelian { .. } => !r.sil_witnesses.is_empty(),
                    OutPcVerdict::Inconclusive => false,
                };
                if consistent {
                    report.line("outpc: verdict matches the SIL dichotomy");
                } else {
                    report.violation("outpc: verdict does not match the SIL dichotomy");
                }
            }
            Err(e) => refusal(&mut report, "outpc", &e.to_string(), sel.explicit),
        }
    }
    if sel.homsample {
        match t.verify_phi_homomorphism_sample(seed, 25, 4) {
            Ok(r) => prefix_into(&mut report, "homsample", &r),
            Err(e) => refusal(&mut report, "homsample", &e.to_string(), sel.explicit),
        }
    }
    report
}

fn refusal(report: &mut Report, check: &str, reason: &str, explicit: bool) {
    if explicit {
        report.violation(format!("{check}: refused: {reason}"));
    } else {
        report.line(format!("{check}: skipped: {reason}"));
    }
}

fn prefix_into(report: &mut Report, prefix: &str, sub: &Report) {
    for line in sub.lines() {
        if let Some(rest) = line.strip_prefix("FAIL ") {
            report.violation(format!("{prefix}: {rest}"));
        } else {
            report.line(format!("{prefix}: {line}"));
        }
    }
    report.line(format!("{prefix}: {}", sub.summary()));
}

fn names(g: &DefiningGraph, set: &VertexSet) -> String {
    let list: Vec<&str> = set.iter().map(|&v| g.name(v)).collect();
    format!("{{{}}}", list.join(" "))
}

fn parse_generator(g: &DefiningGraph, spec: &str) -> Result<Automorphism, String> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| format!("generator spec `{spec}` needs a kind prefix"))?;
    let build = || -> Result<Automorphism, String> {
        match kind {
            "pc" => {
                let (v, member) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("pc spec `{spec}` needs `pc:<v>:<member>`"))?;
                let v = g.vertex_id(v.trim()).map_err(|e| e.to_string())?;
                let member = g.vertex_id(member.trim()).map_err(|e| e.to_string())?;
                let component = g
                    .components_outside_star(v)
                    .into_iter()
                    .find(|c| c.contains(&member))
                    .ok_or_else(|| {
                        format!(
                            "vertex `{}` is not outside the star of `{}`",
                            g.name(member),
                            g.name(v)
                        )
                    })?;
                Automorphism::partial_conjugation(g, v, &component).map_err(|e| e.to_string())
            }
            "inner" => {
                let w = g.parse_word(rest).map_err(|e| e.to_string())?;
                Ok(Automorphism::inner(g, &w))
            }
            "viso" => {
                let (v, k) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("viso spec `{spec}` needs `viso:<v>:<k>`"))?;
                let v = g.vertex_id(v.trim()).map_err(|e| e.to_string())?;
                let k: i64 = k.trim().parse().map_err(|_| format!("bad exponent in `{spec}`"))?;
                Automorphism::vertex_iso(g, v, k).map_err(|e| e.to_string())
            }
            "sym" => {
                let perm = parse_perm(g, rest)?;
                Automorphism::graph_symmetry(g, &perm).map_err(|e| e.to_string())
            }
            "trans" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 4 {
                    return Err(format!(
                        "trans spec `{spec}` needs `trans:<v>:<w>:<left|right>:<k>`"
                    ));
                }
                let v = g.vertex_id(parts[0].trim()).map_err(|e| e.to_string())?;
                let w = g.vertex_id(parts[1].trim()).map_err(|e| e.to_string())?;
                let side = match parts[2].trim() {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    other => return Err(format!("bad side `{other}` in `{spec}`")),
                };
                let k: i64 = parts[3]
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad exponent in `{spec}`"))?;
                Automorphism::transvection(g, v, w, side, k).map_err(|e| e.to_string())
            }
            other => Err(format!("unknown generator kind `{other}`")),
        }
    };
    build()
}

fn parse_perm(g: &DefiningGraph, text: &str) -> Result<Vec<VertexId>, String> {
    let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for pair in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (a, b) = pair
            .split_once('=')
            .ok_or_else(|| format!("permutation entry `{pair}` needs `<a>=<b>`"))?;
        let a = g.vertex_id(a.trim()).map_err(|e| e.to_string())?;
        let b = g.vertex_id(b.trim()).map_err(|e| e.to_string())?;
        if map.insert(a, b).is_some() {
            return Err(format!("vertex `{}` mapped twice", g.name(a)));
        }
    }
    Ok(g
        .vertex_ids()
        .map(|v| map.get(&v).copied().unwrap_or(v))
        .collect())
}

fn parse_sigma(
    g: &DefiningGraph,
    perm: Option<&str>,
    visos: &[String],
) -> Result<SigmaElement, String> {
    let perm = match perm {
        Some(text) => parse_perm(g, text)?,
        None => g.vertex_ids().collect(),
    };
    let mut exponents = vec![1i64; g.vertex_count()];
    for spec in visos {
        let (v, k) = spec
            .split_once(':')
            .ok_or_else(|| format!("viso spec `{spec}` needs `<v>:<k>`"))?;
        let v = g.vertex_id(v.trim()).map_err(|e| e.to_string())?;
        exponents[v.index()] = k
            .trim()
            .parse()
            .map_err(|_| format!("bad exponent in `{spec}`"))?;
    }
    SigmaElement::new(g, perm, exponents).map_err(|e| e.to_string())
}

fn parse_coset(g: &DefiningGraph, spec: &str) -> Result<CosetVertex, String> {
    let (word, t) = spec
        .split_once('|')
        .ok_or_else(|| format!("coset spec `{spec}` needs `<word> | <names>`"))?;
    let rep_raw: GroupWord = g.parse_word(word.trim()).map_err(|e| e.to_string())?;
    let mut spherical = VertexSet::new();
    for name in t.split_whitespace() {
        spherical.insert(g.vertex_id(name).map_err(|e| e.to_string())?);
    }
    let rep = coset_rep(g, &rep_raw, &spherical).map_err(|e| e.to_string())?;
    Ok(CosetVertex { rep, spherical })
}
