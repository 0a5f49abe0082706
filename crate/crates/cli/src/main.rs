mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graphtop::category::{
    cat_bracket, cri_bracket, gcat_bracket, strong_cat_bracket, tcat_bracket, verify_cover, BracketEvaluator,
    CategoryBracket, CategoryOptions, CoverMode,
};
use graphtop::census::{classify_homotopy, CensusReport};
use graphtop::cohomology::{betti, poincare_polynomial, trim_betti, CohomologyBasis};
use graphtop::complex::euler_characteristic;
use graphtop::curvature::{betti_curvature, category_curvature, euler_curvature_with, CurvatureReport, Method};
use graphtop::curvature::{DEFAULT_DEGREE_CAP, DEFAULT_SAMPLES};
use graphtop::fixtures;
use graphtop::homotopy::{
    contraction_witness, homotopic_bounded, reduce, removable_vertices, verify_certificate, Budget, HomotopyCertificate,
    Verdict,
};
use graphtop::io::{to_edge_list, to_graph6, to_json, GraphDocument};
use graphtop::morse::{crit_exact, crit_upper, index_profile, morse_check};
use graphtop::report::invariant_report;
use graphtop::{Error, SimpleGraph};
use serde_json::{json, Value};

use input::{load_cover, load_graph, load_ordering};

#[derive(Parser)]
#[command(name = "graphtop", version, about = "Topological invariants of finite simple graphs")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of graphs a homotopy search may visit.
    #[arg(long, global = true)]
    budget_states: Option<usize>,
    /// Extra vertices a homotopy search may add above the larger graph.
    #[arg(long, global = true)]
    budget_extra_vertices: Option<usize>,
    /// Largest vertex count for the exact subset dynamic programme.
    #[arg(long, global = true)]
    dp_limit: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every invariant in one report.
    Invariants {
        graph: String,
        /// Include wall-clock time (makes the output vary between runs).
        #[arg(long)]
        timing: bool,
    },
    /// Decide contractibility; exits 1 when the graph is not contractible.
    Contractible { graph: String },
    /// Greedy collapse to a core, with the removal certificate.
    Reduce { graph: String },
    /// Minimal number of critical points over all orderings.
    Crit {
        graph: String,
        /// Above the DP limit, report the best random greedy ordering as an upper bound.
        #[arg(long)]
        heuristic: bool,
    },
    /// Cup length bracket and Betti numbers.
    Cup { graph: String },
    /// Category brackets.
    Category {
        graph: String,
        /// Extra cover files to try.
        #[arg(long)]
        cover: Vec<String>,
    },
    /// Index-expectation curvature.
    Curvature {
        graph: String,
        /// `euler`, `betti:K` or `category`.
        #[arg(long, default_value = "euler")]
        which: String,
        /// `exact` or `mc:SAMPLES`.
        #[arg(long, default_value = "exact")]
        method: String,
    },
    /// Poincaré-Hopf check of one ordering.
    PhCheck {
        graph: String,
        /// JSON file, `random:SEED` or `named:NAME`.
        #[arg(long)]
        ordering: String,
    },
    /// Morse condition and Morse inequalities for one ordering.
    MorseCheck {
        graph: String,
        #[arg(long)]
        ordering: String,
    },
    /// Verify a cover; exits 1 if invalid, 2 if undecided.
    CoverVerify {
        graph: String,
        /// JSON file or `named:NAME`.
        #[arg(long)]
        cover: String,
        #[arg(long, value_enum, default_value_t = Mode::InItself)]
        mode: Mode,
    },
    /// Bounded search for a homotopy between two graphs.
    Homotopic { first: String, second: String },
    /// Replay a homotopy certificate.
    CertificateVerify { file: PathBuf },
    /// Census of connected graphs of one order.
    Census {
        #[arg(long)]
        order: usize,
        /// Write the full report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in example graphs.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "in-G", alias = "in-g")]
    InG,
    InItself,
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Emit {
        name: String,
        #[arg(long, value_enum, default_value_t = EmitFormat::Json)]
        format: EmitFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Json,
    Graph6,
    Edges,
}

/// What a command produced: the JSON form, the text form and the exit code.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, code: 0 }
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

const VERIFIED_NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;
const INPUT_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            // Size limits are budget problems; everything else is bad input.
            let (kind, code) = match &e {
                Error::OverLimit { .. } => ("over-limit", UNKNOWN),
                _ => ("input", INPUT_ERROR),
            };
            let hint = match &e {
                Error::OverLimit { what: "critical point dynamic programme", .. } => {
                    Some("raise --dp-limit or pass --heuristic for an upper bound")
                }
                Error::OverLimit { what: "exact curvature subset enumeration", .. } => Some("use --method mc:SAMPLES"),
                _ => None,
            };
            if cli.json {
                let v = json!({ "error": { "kind": kind, "message": e.to_string(), "hint": hint } });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                eprintln!("error: {e}");
                if let Some(h) = hint {
                    eprintln!("hint: {h}");
                }
            }
            ExitCode::from(code)
        }
    }
}

fn options(cli: &Cli) -> CategoryOptions {
    let mut o = CategoryOptions {
        seed: cli.seed,
        budget: budget(cli),
        ..CategoryOptions::default()
    };
    if let Some(d) = cli.dp_limit {
        o.dp_limit = d;
    }
    o
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(s) = cli.budget_states {
        b.max_states = s;
    }
    if let Some(x) = cli.budget_extra_vertices {
        b.max_extra_vertices = x;
    }
    b
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn run(cli: &Cli) -> graphtop::Result<Outcome> {
    let opts = options(cli);
    match &cli.command {
        Command::Invariants { graph, timing } => {
            let doc = load_graph(graph)?;
            let r = invariant_report(graph, &doc, &opts, *timing);
            let mut text = format!(
                "graph        {} ({} vertices, {} edges)\ncertificate  {}\nf-vector     {:?}\neuler        {}\nbetti        {:?}\npoincare     {}\ncup          {}\ncrit         {}{}\ncontractible {}\ntcat         {}\ncat          {}\ncri          {}\n",
                r.input.source,
                r.input.order,
                r.input.size,
                r.input.certificate,
                r.fvector,
                r.euler,
                r.betti,
                r.poincare,
                range(r.cup.lower, r.cup.upper),
                r.crit.value(),
                if r.crit.is_exact() { "" } else { " (upper bound)" },
                r.contractible,
                show_bracket(&r.tcat),
                show_bracket(&r.cat),
                show_bracket(&r.cri),
            );
            if let Some(ms) = r.elapsed_ms {
                text += &format!("elapsed      {ms} ms\n");
            }
            Ok(Outcome::ok(to_value(&r), text))
        }
        Command::Contractible { graph } => {
            let g = load_graph(graph)?.graph;
            match contraction_witness(&g) {
                Some(order) => Ok(Outcome::ok(
                    json!({ "contractible": true, "removal_order": order }),
                    format!("contractible; removal order {order:?}\n"),
                )),
                None => {
                    let (core, _) = reduce(&g);
                    let removable = removable_vertices(&g);
                    let b = trim_betti(&betti(&g));
                    let v = json!({
                        "contractible": false,
                        "refutation": {
                            "euler": euler_characteristic(&g),
                            "betti": b,
                            "removable_vertices": removable,
                            "greedy_core": to_value(&core),
                            "core_order": core.order(),
                        }
                    });
                    let text = format!(
                        "not contractible: collapse search exhausted; euler {}, betti {:?}, removable vertices {:?}, greedy core has {} vertices\n",
                        euler_characteristic(&g),
                        b,
                        removable,
                        core.order()
                    );
                    Ok(Outcome::ok(v, text).with_code(VERIFIED_NEGATIVE))
                }
            }
        }
        Command::Reduce { graph } => {
            let g = load_graph(graph)?.graph;
            let (core, cert) = reduce(&g);
            let text = format!(
                "core: {} vertices, {} edges, graph6 {}\nremoved {} vertices\n{}",
                core.order(),
                core.size(),
                to_graph6(&core),
                cert.moves.len(),
                to_edge_list(&core)
            );
            Ok(Outcome::ok(json!({ "core": to_value(&core), "certificate": to_value(&cert) }), text))
        }
        Command::Crit { graph, heuristic } => {
            let g = load_graph(graph)?.graph;
            match crit_exact(&g, opts.dp_limit) {
                Ok((c, f)) => Ok(Outcome::ok(
                    json!({ "kind": "exact", "value": c, "ordering": to_value(&f) }),
                    format!("crit = {c}\nordering {:?}\n", f.order()),
                )),
                Err(Error::OverLimit { size, limit, .. }) if *heuristic => {
                    let (c, f) = crit_upper(&g, opts.heuristic_restarts, opts.seed);
                    let v = json!({ "kind": "upper-bound", "value": c, "ordering": to_value(&f), "order": size, "dp_limit": limit });
                    Ok(Outcome::ok(v, format!("crit <= {c} (heuristic upper bound, not a minimum)\nordering {:?}\n", f.order())))
                }
                Err(e) => Err(e),
            }
        }
        Command::Cup { graph } => {
            let g = load_graph(graph)?.graph;
            let basis = CohomologyBasis::new(&g);
            let b = trim_betti(&basis.betti());
            let cup = basis.cup_length(opts.max_products);
            let text = format!(
                "betti {:?} ({})\ncup length {}\n",
                b,
                poincare_polynomial(&b),
                range(cup.lower, cup.upper)
            );
            Ok(Outcome::ok(json!({ "betti": b, "cup": to_value(&cup) }), text))
        }
        Command::Category { graph, cover } => {
            let doc = load_graph(graph)?;
            let mut o = opts.clone();
            o.covers.extend(doc.metadata.covers.values().cloned());
            for c in cover {
                o.covers.push(load_cover(c, &doc)?);
            }
            let g = &doc.graph;
            let rows = [
                ("tcat", tcat_bracket(g, &o)),
                ("gcat", gcat_bracket(g, &o)),
                ("cat", cat_bracket(g, &o)),
                ("Cat", strong_cat_bracket(g, &o)),
                ("cri", cri_bracket(g, &o)),
            ];
            let text: String = rows.iter().map(|(n, b)| format!("{n:<5} {}\n", show_bracket(b))).collect();
            let v: serde_json::Map<String, Value> = rows.iter().map(|(n, b)| (n.to_string(), to_value(b))).collect();
            Ok(Outcome::ok(Value::Object(v), text))
        }
        Command::Curvature { graph, which, method } => {
            let g = load_graph(graph)?.graph;
            let method: Method = method.parse()?;
            let r = curvature(&g, which, method, &opts)?;
            let mut text = String::new();
            for (v, x) in &r.values {
                text += &format!("{v:>4}  {}\n", show_curvature(x));
            }
            text += &format!("sum   {}\n", show_curvature(&r.sum));
            Ok(Outcome::ok(to_value(&r), text))
        }
        Command::PhCheck { graph, ordering } => {
            let doc = load_graph(graph)?;
            let g = &doc.graph;
            let f = load_ordering(ordering, &doc)?;
            let profile = index_profile(g, &f, false);
            let mut below = Vec::new();
            let mut partial = 0;
            let mut prefix_ok = true;
            let mut text = String::from("vertex  index  partial  sublevel-euler\n");
            for r in &profile {
                below.push(r.vertex);
                partial += r.index;
                let chi = euler_characteristic(&g.induced_by_labels(&below)?);
                prefix_ok &= chi == partial;
                text += &format!("{:>6}  {:>5}  {:>7}  {:>14}\n", r.vertex, r.index, partial, chi);
            }
            let chi = euler_characteristic(g);
            let holds = prefix_ok && partial == chi;
            text += &format!("sum of indices {partial}, euler {chi}: {}\n", if holds { "holds" } else { "FAILS" });
            let v = json!({ "holds": holds, "euler": chi, "index_sum": partial, "profile": to_value(&profile) });
            Ok(Outcome::ok(v, text).with_code(if holds { 0 } else { VERIFIED_NEGATIVE }))
        }
        Command::MorseCheck { graph, ordering } => {
            let doc = load_graph(graph)?;
            let f = load_ordering(ordering, &doc)?;
            let r = morse_check(&doc.graph, &f);
            let mut text = format!(
                "morse: {}\ncritical counts c_k {:?}\nbetti {:?}\nweak inequalities {}\nstrong inequalities {}\neuler identity {}\n",
                r.is_morse, r.counts, r.betti, r.weak_inequalities, r.strong_inequalities, r.euler_identity
            );
            for (v, why) in &r.failures {
                text += &format!("  vertex {v}: {why}\n");
            }
            let code = if r.is_morse { 0 } else { VERIFIED_NEGATIVE };
            Ok(Outcome::ok(to_value(&r), text).with_code(code))
        }
        Command::CoverVerify { graph, cover, mode } => {
            let doc = load_graph(graph)?;
            let c = load_cover(cover, &doc)?;
            let mode = match mode {
                Mode::InG => CoverMode::InHost,
                Mode::InItself => CoverMode::InItself,
            };
            let r = verify_cover(&doc.graph, &c, mode, &opts.budget)?;
            let mut text = format!("valid: {}\nmembers: {:?}\n", r.valid, r.members);
            if !r.uncovered_vertices.is_empty() {
                text += &format!("uncovered vertices: {:?}\n", r.uncovered_vertices);
            }
            if !r.uncovered_edges.is_empty() {
                text += &format!("uncovered edges: {:?}\n", r.uncovered_edges);
            }
            let code = if r.valid {
                0
            } else if r.covers() && r.inconclusive() {
                UNKNOWN
            } else {
                VERIFIED_NEGATIVE
            };
            Ok(Outcome::ok(to_value(&r), text).with_code(code))
        }
        Command::Homotopic { first, second } => {
            let g = load_graph(first)?.graph;
            let h = load_graph(second)?.graph;
            Ok(match homotopic_bounded(&g, &h, &opts.budget) {
                Verdict::Equivalent(cert) => Outcome::ok(
                    json!({ "verdict": "equivalent", "certificate": to_value(&cert) }),
                    format!("homotopic; certificate with {} moves\n", cert.moves.len()),
                ),
                Verdict::Distinct(w) => Outcome::ok(
                    json!({ "verdict": "distinct", "witness": to_value(&w) }),
                    format!("not homotopic: {}\n", serde_json::to_string(&w).unwrap()),
                )
                .with_code(VERIFIED_NEGATIVE),
                Verdict::Unknown { explored } => Outcome::ok(
                    json!({ "verdict": "unknown", "explored": explored, "budget": to_value(&opts.budget) }),
                    format!("unknown: budget exhausted after {explored} graphs\n"),
                )
                .with_code(UNKNOWN),
            })
        }
        Command::CertificateVerify { file } => {
            let cert: HomotopyCertificate = serde_json::from_str(&std::fs::read_to_string(file)?)?;
            Ok(match verify_certificate(&cert) {
                Ok(out) => Outcome::ok(
                    json!({ "valid": true, "end": to_value(&out.end), "marked_end": out.marked_end }),
                    format!(
                        "valid: {} moves, end graph {} vertices, graph6 {}\n",
                        cert.moves.len(),
                        out.end.order(),
                        to_graph6(&out.end)
                    ),
                ),
                Err(e) => Outcome::ok(json!({ "valid": false, "reason": e.to_string() }), format!("invalid: {e}\n"))
                    .with_code(VERIFIED_NEGATIVE),
            })
        }
        Command::Census { order, out } => {
            let r = classify_homotopy(*order, &opts.budget)?;
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&r).unwrap())?;
            }
            let text = census_text(&r);
            let summary = json!({
                "order": r.order,
                "graphs": r.graphs,
                "homotopy_types": r.homotopy_types(),
                "types_lower": r.types_lower,
                "types_upper": r.types_upper,
                "cells": r.cells.len(),
            });
            let code = if r.homotopy_types().is_some() { 0 } else { UNKNOWN };
            let v = if out.is_some() { summary } else { to_value(&r) };
            Ok(Outcome::ok(v, text).with_code(code))
        }
        Command::Fixtures { action } => match action {
            FixtureAction::List => {
                let names = fixtures::list();
                Ok(Outcome::ok(json!(names), names.iter().map(|n| format!("{n}\n")).collect()))
            }
            FixtureAction::Emit { name, format } => {
                let doc = fixtures::document(name)?;
                let text = match format {
                    EmitFormat::Json => to_json(&doc) + "\n",
                    EmitFormat::Graph6 => to_graph6(&doc.graph) + "\n",
                    EmitFormat::Edges => to_edge_list(&doc.graph),
                };
                Ok(Outcome::ok(emit_json(&doc), text))
            }
        },
    }
}

fn emit_json(doc: &GraphDocument) -> Value {
    serde_json::from_str(&to_json(doc)).expect("documents serialise")
}

fn curvature(g: &SimpleGraph, which: &str, method: Method, opts: &CategoryOptions) -> graphtop::Result<CurvatureReport> {
    let seed = opts.seed;
    match which {
        "euler" => Ok(match method {
            Method::Exact => euler_curvature_with(g, DEFAULT_DEGREE_CAP, DEFAULT_SAMPLES, seed),
            Method::MonteCarlo { samples } => graphtop::curvature::euler_curvature_mc(g, samples, seed),
        }),
        "category" => category_curvature(g, &BracketEvaluator::new(opts.clone(), false), method, seed),
        other => {
            let k = other
                .strip_prefix("betti:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| Error::Document(format!("unknown curvature {other:?}; use euler, betti:K or category")))?;
            betti_curvature(g, k, method, seed)
        }
    }
}

fn range(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("[{lo}, {hi}]")
    }
}

fn show_bracket(b: &CategoryBracket) -> String {
    let name = |m| to_value(&m).as_str().unwrap_or_default().to_string();
    let methods = if b.lower_method == b.upper_method {
        name(b.lower_method)
    } else {
        format!("{} / {}", name(b.lower_method), name(b.upper_method))
    };
    format!("[{}, {}]  {}", b.lower, b.upper, methods)
}

fn show_curvature(v: &graphtop::curvature::CurvatureValue) -> String {
    use graphtop::curvature::CurvatureValue::*;
    match v {
        Exact { value } => value.to_string(),
        Bracket { lower, upper } => format!("[{lower}, {upper}]"),
        MonteCarlo { mean, radius, samples } => format!("{mean:.5} ± {radius:.5} ({samples} samples)"),
        MonteCarloBracket {
            lower_mean,
            upper_mean,
            radius,
            samples,
        } => format!("[{lower_mean:.5}, {upper_mean:.5}] ± {radius:.5} ({samples} samples)"),
    }
}

fn census_text(r: &CensusReport) -> String {
    let mut text = format!("order {}: {} connected graphs\n", r.order, r.graphs);
    match r.homotopy_types() {
        Some(h) => text += &format!("homotopy types: {h}\n"),
        None => text += &format!("homotopy types: between {} and {} (unresolved cells)\n", r.types_lower, r.types_upper),
    }
    text += "euler  betti        cup     classes  graphs\n";
    for c in &r.cells {
        let graphs: usize = c.classes.iter().map(|k| k.members).sum();
        text += &format!(
            "{:>5}  {:<11}  {:<6}  {:>7}  {:>6}\n",
            c.key.euler,
            format!("{:?}", c.key.betti),
            range(c.key.cup.0, c.key.cup.1),
            c.classes.len(),
            graphs
        );
    }
    text
}
