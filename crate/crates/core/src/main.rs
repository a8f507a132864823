use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use covgraph::covering::{is_covering, Endpoint, GraphMorphism};
use covgraph::freegroup::{CosetSpace, Index};
use covgraph::fundamental::{FundamentalGroup, Labelling};
use covgraph::graph::{is_connected, Graph, Walk};
use covgraph::io::{self, report, GraphDoc, GraphRef, LabellingDoc, MorphismDoc, SubgroupDoc};
use covgraph::reconstruct::reconstruct;
use covgraph::selftest;
use covgraph::skewprod::{ck_skeleton_check, gross_tucker, quotient_graph, relative_skew_product};
use covgraph::Error;

/// Coverings of directed graphs: fundamental groups, skew products and
/// reconstruction.
#[derive(Debug, Parser)]
#[command(name = "covgraph", version)]
struct Cli {
    /// Print machine-readable JSON instead of the text summary.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a graph file and report every violation.
    Validate { graph: PathBuf },
    /// Spanning tree, generators and representative loops of π₁.
    Pi1 {
        graph: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// The canonical labelling of the breadth-first tree at a base vertex.
    Label {
        graph: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// Covering maps given as morphism files.
    Cover {
        #[command(subcommand)]
        command: CoverCommand,
    },
    /// Build a relative skew product.
    Skew {
        graph: PathBuf,
        labelling: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
    },
    /// Quotient of a graph by a finite group action.
    Quotient {
        graph: PathBuf,
        action: PathBuf,
        #[arg(long)]
        require_free: bool,
    },
    /// Decompose a free action as a skew product over the quotient.
    GrossTucker { graph: PathBuf, action: PathBuf },
    /// Rebuild a covering as a skew product and certify the isomorphism.
    Reconstruct {
        morphism: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// Fiber bijections and unique lifting of directed paths in a skew product.
    CkCheck {
        graph: PathBuf,
        labelling: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        #[arg(long, default_value_t = 4)]
        pathlen: usize,
    },
    /// Graphviz DOT text.
    Dot { graph: PathBuf },
    /// Run the built-in property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per criterion (default: the full suite).
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum CoverCommand {
    /// Is the morphism a covering?
    Check { morphism: PathBuf },
    /// Lift a walk in the base through a covering.
    Lift {
        morphism: PathBuf,
        #[arg(long)]
        walk: String,
        #[arg(long)]
        anchor: String,
        #[arg(long, value_enum)]
        end: End,
    },
    /// The induced subgroup p_*π₁(F, v) and its index.
    Subgroup {
        morphism: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// Number of sheets.
    Sheets { morphism: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum End {
    Source,
    Range,
}

/// What a command prints and whether its checks held.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, passed: true }
    }
}

enum Failure {
    /// Unreadable or invalid input.
    Input(String),
    /// A certificate that should hold did not.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IsomorphismFailure(_) | Error::Internal(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_at<T: serde::de::DeserializeOwned + io::Versioned>(path: &Path) -> Result<T, Failure> {
    Ok(io::parse(&read(path)?, &path.display().to_string())?)
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_at::<GraphDoc>(path)?.to_graph()?)
}

fn load_morphism(path: &Path) -> Result<GraphMorphism, Failure> {
    Ok(parse_at::<MorphismDoc>(path)?.to_morphism()?)
}

fn load_labelling(path: &Path, g: &Graph) -> Result<Labelling, Failure> {
    let doc: LabellingDoc = parse_at(path)?;
    if let Some(GraphRef::Path(p)) = &doc.graph {
        let referenced = path.parent().unwrap_or(Path::new(".")).join(p);
        if &load_graph(&referenced)? != g {
            return Err(Failure::Input(format!(
                "{}: the graph it refers to differs from the given graph",
                path.display()
            )));
        }
    }
    Ok(doc.to_labelling(g)?)
}

fn load_cosets(path: &Path) -> Result<CosetSpace, Failure> {
    Ok(parse_at::<SubgroupDoc>(path)?.to_cosets()?)
}

fn vertex(g: &Graph, name: &str) -> Result<usize, Failure> {
    Ok(g.vertex(name)?)
}

fn covering_of(m: &GraphMorphism) -> Result<covgraph::covering::Covering, Failure> {
    is_covering(m).map_err(|e| Failure::Input(Error::from(e).to_string()))
}

fn json_text<T: serde::Serialize>(doc: &T) -> String {
    io::to_json(doc) + "\n"
}

fn validate(path: &Path, as_json: bool) -> CmdResult {
    let doc: GraphDoc = parse_at(path)?;
    let (violations, summary) = match doc.to_graph() {
        Ok(g) => (Vec::new(), Some((g.vertex_count(), g.edge_count(), is_connected(&g)))),
        Err(Error::InvalidGraph(vs)) => (vs.iter().map(ToString::to_string).collect::<Vec<_>>(), None),
        Err(e) => return Err(e.into()),
    };
    let passed = violations.is_empty();
    let text = if as_json {
        let mut doc = json!({ "format_version": io::FORMAT_VERSION, "valid": passed, "violations": violations });
        if let Some((v, e, c)) = summary {
            doc["vertices"] = json!(v);
            doc["edges"] = json!(e);
            doc["connected"] = json!(c);
        }
        json_text(&doc)
    } else if let Some((v, e, c)) = summary {
        format!("valid: {v} vertices, {e} edges, {}\n", if c { "connected" } else { "not connected" })
    } else {
        let mut out = format!("invalid: {} violation(s)\n", violations.len());
        for v in &violations {
            let _ = writeln!(out, "  {v}");
        }
        out
    };
    Ok(Outcome { text, passed })
}

fn pi1(path: &Path, base: &str, as_json: bool) -> CmdResult {
    let g = load_graph(path)?;
    let pi1 = FundamentalGroup::at(&g, vertex(&g, base)?)?;
    let tree: Vec<&str> = pi1.tree().edges().iter().map(|&e| g.edge_name(e)).collect();
    let gens: Vec<(String, String, String)> = (0..pi1.rank())
        .map(|i| {
            (
                pi1.free_group().generator_name(i).to_string(),
                g.edge_name(pi1.edge_of_generator(i)).to_string(),
                pi1.representative_loop(&g, i).display(&g),
            )
        })
        .collect();
    if as_json {
        let generators: Vec<_> =
            gens.iter().map(|(n, e, l)| json!({ "name": n, "edge": e, "loop": l })).collect();
        return Ok(Outcome::ok(json_text(&json!({
            "format_version": io::FORMAT_VERSION,
            "base": base,
            "tree_edges": tree,
            "rank": pi1.rank(),
            "generators": generators,
        }))));
    }
    let mut out = format!("base: {base}\ntree: {}\nrank: {}\n", tree.join(" "), pi1.rank());
    for (n, _, l) in &gens {
        let _ = writeln!(out, "{n}: {l}");
    }
    Ok(Outcome::ok(out))
}

fn label(path: &Path, base: &str) -> CmdResult {
    let g = load_graph(path)?;
    let pi1 = FundamentalGroup::at(&g, vertex(&g, base)?)?;
    Ok(Outcome::ok(json_text(&LabellingDoc::from_labelling(&g, &pi1.canonical_labelling(&g)))))
}

fn cover(command: &CoverCommand, as_json: bool) -> CmdResult {
    match command {
        CoverCommand::Check { morphism } => {
            let m = load_morphism(morphism)?;
            match is_covering(&m) {
                Ok(p) => {
                    let sheets = p.sheets().ok();
                    let text = if as_json {
                        json_text(&json!({ "format_version": io::FORMAT_VERSION, "covering": true, "sheets": sheets }))
                    } else {
                        match sheets {
                            Some(n) => format!("covering: {n} sheet(s)\n"),
                            None => "covering (graphs not connected; sheet count undefined)\n".to_string(),
                        }
                    };
                    Ok(Outcome::ok(text))
                }
                Err(fail) => {
                    let text = if as_json {
                        json_text(&json!({
                            "format_version": io::FORMAT_VERSION,
                            "covering": false,
                            "vertex": fail.vertex,
                            "reason": fail.reason,
                        }))
                    } else {
                        format!("not a covering: {fail}\n")
                    };
                    Ok(Outcome { text, passed: false })
                }
            }
        }
        CoverCommand::Lift { morphism, walk, anchor, end } => {
            let p = covering_of(&load_morphism(morphism)?)?;
            let a = Walk::parse(p.codomain(), walk)?;
            let anchor = vertex(p.domain(), anchor)?;
            let end = match end {
                End::Source => Endpoint::Source,
                End::Range => Endpoint::Range,
            };
            let lifted = p.lift_walk(&a, anchor, end)?.display(p.domain());
            Ok(Outcome::ok(if as_json {
                json_text(&json!({ "format_version": io::FORMAT_VERSION, "walk": lifted }))
            } else {
                lifted + "\n"
            }))
        }
        CoverCommand::Subgroup { morphism, base } => {
            let p = covering_of(&load_morphism(morphism)?)?;
            let v = vertex(p.domain(), base)?;
            let pi1 = FundamentalGroup::at(p.codomain(), p.morphism().vertex(v))?;
            let h = p.induced_subgroup(v, &pi1)?;
            let index = match h.index() {
                Index::Finite(n) => json!(n),
                Index::Infinite => json!("infinite"),
            };
            let doc = SubgroupDoc::from_subgroup_graph(&h);
            if as_json {
                return Ok(Outcome::ok(json_text(&json!({
                    "format_version": io::FORMAT_VERSION,
                    "subgroup": SubgroupDoc { format_version: None, ..doc },
                    "index": index,
                    "rank": h.rank(),
                }))));
            }
            let mut out = format!("index: {}\nrank: {}\ngenerators:\n", h.index(), h.rank());
            for w in doc.generators.unwrap_or_default() {
                let _ = writeln!(out, "  {w}");
            }
            Ok(Outcome::ok(out))
        }
        CoverCommand::Sheets { morphism } => {
            let p = covering_of(&load_morphism(morphism)?)?;
            let n = p.sheets()?;
            Ok(Outcome::ok(if as_json {
                json_text(&json!({ "format_version": io::FORMAT_VERSION, "sheets": n }))
            } else {
                format!("{n}\n")
            }))
        }
    }
}

fn graph_listing(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertex_names() {
        let _ = writeln!(out, "  vertex {v}");
    }
    for (e, s, d) in g.edge_triples() {
        let _ = writeln!(out, "  edge {e}: {s} -> {d}");
    }
    out
}

fn skew(graph: &Path, labelling: &Path, subgroup: &Path, as_json: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let c = load_labelling(labelling, &g)?;
    let q = load_cosets(subgroup)?;
    let sp = relative_skew_product(&g, &c, &q)?;
    if as_json {
        return Ok(Outcome::ok(json_text(&report::skew(&sp))));
    }
    let p = sp.product();
    let mut out = format!(
        "skew product: {} vertices, {} edges over {} coset(s): {}\nprojection: covering, fiber size {}\n",
        p.vertex_count(),
        p.edge_count(),
        q.len(),
        q.names().join(" "),
        q.len()
    );
    out.push_str(&graph_listing(p));
    Ok(Outcome::ok(out))
}

fn quotient(graph: &Path, action: &Path, require_free: bool, as_json: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let a = parse_at::<io::ActionDoc>(action)?.to_action(&g)?;
    let q = quotient_graph(&a, require_free)?;
    let free = a.is_free();
    if as_json {
        return Ok(Outcome::ok(json_text(&report::quotient(&q, free))));
    }
    let mut out = format!(
        "quotient: {} vertices, {} edges; action is {}\n",
        q.graph().vertex_count(),
        q.graph().edge_count(),
        if free { "free" } else { "not free" }
    );
    out.push_str(&graph_listing(q.graph()));
    Ok(Outcome::ok(out))
}

fn gross_tucker_cmd(graph: &Path, action: &Path, as_json: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let a = parse_at::<io::ActionDoc>(action)?.to_action(&g)?;
    let gt = gross_tucker(&a)?;
    let passed = gt.is_isomorphism && gt.is_equivariant;
    let text = if as_json {
        json_text(&report::gross_tucker(&gt))
    } else {
        let q = gt.quotient.graph();
        let mut out = format!("quotient: {} vertices, {} edges\n", q.vertex_count(), q.edge_count());
        let group = gt.labelling.group();
        for e in 0..q.edge_count() {
            let _ = writeln!(out, "  d({}) = {}", q.edge_name(e), group.format_element(gt.labelling.value(e)));
        }
        let verdict = |b: bool| if b { "pass" } else { "FAIL" };
        let _ = writeln!(out, "isomorphism: {}", verdict(gt.is_isomorphism));
        let _ = writeln!(out, "equivariance: {}", verdict(gt.is_equivariant));
        out
    };
    Ok(Outcome { text, passed })
}

fn reconstruct_cmd(morphism: &Path, base: &str, as_json: bool) -> CmdResult {
    let p = covering_of(&load_morphism(morphism)?)?;
    let v = vertex(p.domain(), base)?;
    let r = reconstruct(&p, v)?;
    let passed = r.all_checks_pass();
    if as_json {
        return Ok(Outcome { text: json_text(&report::reconstruction(&r)), passed });
    }
    let verdict = |b: bool| if b { "pass" } else { "FAIL" };
    let mut out = String::new();
    let _ = writeln!(out, "base: {base} over {}", p.codomain().vertex_name(p.morphism().vertex(v)));
    let _ = writeln!(out, "sheets: {}", r.sheets);
    let _ = writeln!(out, "index: {}", r.index);
    let _ = writeln!(out, "rank of H: {}", r.subgroup.rank());
    let _ = writeln!(out, "cosets: {}", r.cosets.names().join(" "));
    let _ = writeln!(out, "phi isomorphism: pass");
    let _ = writeln!(out, "projection commutes: pass");
    let _ = writeln!(out, "theta bijective: {}", verdict(r.theta_bijective));
    let _ = writeln!(out, "sheets = index: {}", verdict(r.sheets == r.index));
    let f = p.domain();
    let (vm, _) = r.phi.named_maps();
    for z in f.vertex_names() {
        let _ = writeln!(out, "  {z} -> {}", vm[z]);
    }
    Ok(Outcome { text: out, passed })
}

fn ck_check(graph: &Path, labelling: &Path, subgroup: &Path, pathlen: usize, as_json: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let c = load_labelling(labelling, &g)?;
    let q = load_cosets(subgroup)?;
    let r = ck_skeleton_check(&g, &c, &q, pathlen)?;
    let text = if as_json {
        json_text(&report::skeleton(&r, pathlen))
    } else {
        let mut out = format!(
            "{}: {} product vertices, {} paths of length 1..={pathlen}, {} lifts checked\n",
            if r.passed() { "pass" } else { "FAIL" },
            r.vertices_checked,
            r.paths_checked,
            r.lifts_checked
        );
        for v in &r.violations {
            let _ = writeln!(out, "  {v}");
        }
        out
    };
    Ok(Outcome { text, passed: r.passed() })
}

fn selftest_cmd(seed: u64, cases: Option<usize>, as_json: bool) -> CmdResult {
    let results = selftest::run(&selftest::Config { seed, cases });
    let passed = results.iter().all(|r| r.passed());
    let text = if as_json {
        let items: Vec<_> = results
            .iter()
            .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed(), "cases": r.cases, "failures": r.failures }))
            .collect();
        json_text(&json!({ "format_version": io::FORMAT_VERSION, "passed": passed, "criteria": items }))
    } else {
        let mut out = String::new();
        for r in &results {
            let _ = writeln!(out, "{}", r.line());
            for f in &r.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        out
    };
    Ok(Outcome { text, passed })
}

fn run(cli: &Cli) -> CmdResult {
    let j = cli.json;
    match &cli.command {
        Command::Validate { graph } => validate(graph, j),
        Command::Pi1 { graph, base } => pi1(graph, base, j),
        Command::Label { graph, base } => label(graph, base),
        Command::Cover { command } => cover(command, j),
        Command::Skew { graph, labelling, subgroup } => skew(graph, labelling, subgroup, j),
        Command::Quotient { graph, action, require_free } => quotient(graph, action, *require_free, j),
        Command::GrossTucker { graph, action } => gross_tucker_cmd(graph, action, j),
        Command::Reconstruct { morphism, base } => reconstruct_cmd(morphism, base, j),
        Command::CkCheck { graph, labelling, subgroup, pathlen } => ck_check(graph, labelling, subgroup, *pathlen, j),
        Command::Dot { graph } => {
            let g = load_graph(graph)?;
            let name = graph.file_stem().and_then(|s| s.to_str()).unwrap_or("G");
            Ok(Outcome::ok(io::to_dot(&g, name)))
        }
        Command::Selftest { seed, cases } => selftest_cmd(*seed, *cases, j),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
