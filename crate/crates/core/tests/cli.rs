use std::path::PathBuf;
use std::process::{Command, Output};

use covgraph::io::{self, GraphDoc, LabellingDoc, MorphismDoc, SubgroupDoc};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn covgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = covgraph(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn reparse<T: serde::de::DeserializeOwned + io::Versioned>(v: &Value) -> T {
    io::parse(&v.to_string(), "emitted").unwrap()
}

#[test]
fn sheets_of_the_double_loop() {
    let o = covgraph(&["cover", "sheets", &fixture("c2_to_l1.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn skew_by_the_whole_group_renames_the_base() {
    let v = json(&[
        "skew",
        &fixture("l1.json"),
        &fixture("l1_labelling.json"),
        "--subgroup",
        &fixture("free_x_whole.json"),
    ]);
    let product: GraphDoc = reparse(&v["product"]);
    let base: GraphDoc = reparse(&v["base"]);
    assert_eq!(product.vertices, base.vertices.iter().map(|u| format!("({u}|H)")).collect::<Vec<_>>());
    for (p, b) in product.edges.iter().zip(&base.edges) {
        assert_eq!(p.id, format!("({}|H)", b.id));
        assert_eq!(p.src, format!("({}|H)", b.src));
        assert_eq!(p.dst, format!("({}|H)", b.dst));
    }
    assert_eq!(v["fiber_size"], 1);
}

#[test]
fn reconstructing_a_non_covering_is_an_input_error() {
    let o = covgraph(&["reconstruct", &fixture("not_covering.json"), "--base", "a"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a covering"));
    assert!(o.stdout.is_empty());
}

#[test]
fn failed_checks_exit_with_one() {
    assert_eq!(code(&covgraph(&["cover", "check", &fixture("not_covering.json")])), 1);
    assert_eq!(code(&covgraph(&["validate", &fixture("invalid_graph.json")])), 1);
    assert_eq!(code(&covgraph(&["validate", &fixture("d2.json")])), 0);
}

#[test]
fn malformed_json_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"vertices\": [\"u\"],\n  \"edges\": [,]\n}\n").unwrap();
    let o = covgraph(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));

    std::fs::write(&path, r#"{"vertices": [], "edges": [], "colour": 1}"#).unwrap();
    assert_eq!(code(&covgraph(&["validate", path.to_str().unwrap()])), 2);
    std::fs::write(&path, r#"{"format_version": 2, "vertices": [], "edges": []}"#).unwrap();
    assert_eq!(code(&covgraph(&["validate", path.to_str().unwrap()])), 2);
    assert_eq!(code(&covgraph(&["validate", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn labelling_graph_reference_must_match() {
    let o = covgraph(&[
        "skew",
        &fixture("d2.json"),
        &fixture("l1_labelling.json"),
        "--subgroup",
        &fixture("free_x_whole.json"),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_base_vertex_is_an_input_error() {
    assert_eq!(code(&covgraph(&["pi1", &fixture("d2.json"), "--base", "nope"])), 2);
}

#[test]
fn lift_along_the_figure_eight_cover() {
    let m = fixture("d2_to_b2.json");
    let o = covgraph(&["cover", "lift", &m, "--walk", "x y x'", "--anchor", "1", "--end", "source"]);
    assert_eq!(stdout(&o), "x1 y0 x1'\n");
    let o = covgraph(&["cover", "lift", &m, "--walk", "x y", "--anchor", "1", "--end", "range"]);
    assert_eq!(stdout(&o), "x0 y1\n");
}

#[test]
fn quotient_requires_freeness_only_when_asked() {
    let (g, a) = (fixture("b2.json"), fixture("b2_flip.json"));
    assert_eq!(code(&covgraph(&["quotient", &g, &a])), 0);
    assert_eq!(code(&covgraph(&["quotient", &g, &a, "--require-free"])), 2);
}

#[test]
fn emitted_documents_reparse() {
    let label = json(&["label", &fixture("d2.json"), "--base", "0"]);
    let doc: LabellingDoc = reparse(&label);
    let g = io::parse::<GraphDoc>(&std::fs::read_to_string(fixture("d2.json")).unwrap(), "d2").unwrap();
    doc.to_labelling(&g.to_graph().unwrap()).unwrap();

    let r = json(&["reconstruct", &fixture("d2_to_b2.json"), "--base", "0"]);
    let phi: MorphismDoc = reparse(&r["phi"]);
    phi.to_morphism().unwrap();
    let sub: SubgroupDoc = reparse(&r["subgroup"]);
    assert_eq!(sub.to_cosets().unwrap().len(), 2);
    let product: GraphDoc = reparse(&r["product"]);
    product.to_graph().unwrap();
    assert!(r["checks"].as_object().unwrap().values().all(|c| c == &Value::Bool(true)));

    let s = json(&[
        "skew",
        &fixture("l1.json"),
        &fixture("l1_labelling.json"),
        "--subgroup",
        &fixture("free_x_squares.json"),
    ]);
    let proj: MorphismDoc = reparse(&s["projection"]);
    let lab: LabellingDoc = reparse(&s["labelling"]);
    let base: GraphDoc = reparse(&s["base"]);
    lab.to_labelling(&base.to_graph().unwrap()).unwrap();
    covgraph::covering::is_covering(&proj.to_morphism().unwrap()).unwrap();

    let q = json(&["quotient", &fixture("c2.json"), &fixture("c2_rotation.json")]);
    let map: MorphismDoc = reparse(&q["map"]);
    map.to_morphism().unwrap();

    let gt = json(&["gross-tucker", &fixture("c2.json"), &fixture("c2_rotation.json")]);
    let lab: LabellingDoc = reparse(&gt["labelling"]);
    let quotient: GraphDoc = reparse(&gt["quotient"]);
    lab.to_labelling(&quotient.to_graph().unwrap()).unwrap();
    assert_eq!(gt["isomorphism"], true);
    assert_eq!(gt["equivariant"], true);

    let sub = json(&["cover", "subgroup", &fixture("c3_to_l1.json"), "--base", "0"]);
    let h: SubgroupDoc = reparse(&sub["subgroup"]);
    assert_eq!(h.to_cosets().unwrap().len(), 3);
    assert_eq!(sub["index"], 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let runs: Vec<Vec<String>> = vec![
        vec!["--json".into(), "reconstruct".into(), fixture("d2_to_b2.json"), "--base".into(), "1".into()],
        vec!["pi1".into(), fixture("d2.json"), "--base".into(), "1".into()],
        vec!["ck-check".into(), fixture("l1.json"), fixture("l1_labelling.json"), "--subgroup".into(), fixture("free_x_squares.json")],
        vec!["selftest".into(), "--seed".into(), "5".into(), "--cases".into(), "2".into()],
        vec!["dot".into(), fixture("d2.json")],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = covgraph(&args);
        let b = covgraph(&args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

/// Accepts the DOT subset the exporter targets: a named digraph whose body
/// holds node statements and edge statements with one quoted attribute.
fn check_dot(text: &str) -> Result<(usize, usize), String> {
    fn quoted(s: &str) -> Option<(String, &str)> {
        let mut chars = s.strip_prefix('"')?.char_indices();
        let mut out = String::new();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => out.push(chars.next()?.1),
                '"' => return Some((out, &s[i + 2..])),
                _ => out.push(c),
            }
        }
        None
    }
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty")?;
    let rest = header.strip_prefix("digraph ").ok_or("missing digraph keyword")?;
    let (_, rest) = quoted(rest).ok_or("graph name is not quoted")?;
    if rest != " {" {
        return Err(format!("bad header {header:?}"));
    }
    let (mut nodes, mut edges) = (std::collections::BTreeSet::new(), 0);
    let mut closed = false;
    for line in lines {
        if closed {
            return Err("text after closing brace".into());
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_prefix("  ").and_then(|l| l.strip_suffix(';')).ok_or(format!("bad line {line:?}"))?;
        let (from, rest) = quoted(stmt).ok_or(format!("bad node id in {line:?}"))?;
        if rest.is_empty() {
            nodes.insert(from);
            continue;
        }
        let rest = rest.strip_prefix(" -> ").ok_or(format!("bad edge in {line:?}"))?;
        let (to, rest) = quoted(rest).ok_or(format!("bad target in {line:?}"))?;
        let attr = rest.strip_prefix(" [label=").and_then(|r| r.strip_suffix(']')).ok_or(format!("bad attr {line:?}"))?;
        let (_, tail) = quoted(attr).ok_or(format!("bad label in {line:?}"))?;
        if !tail.is_empty() || !nodes.contains(&from) || !nodes.contains(&to) {
            return Err(format!("bad edge statement {line:?}"));
        }
        edges += 1;
    }
    if !closed {
        return Err("unterminated graph".into());
    }
    Ok((nodes.len(), edges))
}

#[test]
fn dot_output_parses_for_every_fixture() {
    for (name, v, e) in [("l1.json", 1, 1), ("b2.json", 1, 2), ("d2.json", 2, 4), ("c2.json", 2, 2)] {
        let o = covgraph(&["dot", &fixture(name)]);
        assert_eq!(code(&o), 0);
        assert_eq!(check_dot(&stdout(&o)), Ok((v, e)), "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    std::fs::write(
        &path,
        r#"{"vertices": ["a \"b\"", "c\\d"], "edges": [{"id": "(e|xH)", "src": "a \"b\"", "dst": "c\\d"}]}"#,
    )
    .unwrap();
    assert_eq!(check_dot(&stdout(&covgraph(&["dot", path.to_str().unwrap()]))), Ok((2, 1)));
}

#[test]
fn dot_checker_rejects_broken_text() {
    assert!(check_dot("digraph \"g\" {\n  \"a\" -> \"b\" [label=\"e\"];\n}\n").is_err());
    assert!(check_dot("digraph \"g\" {\n  \"a\";\n").is_err());
    assert!(check_dot("graph \"g\" {\n}\n").is_err());
}

#[test]
fn short_selftest_passes() {
    let o = covgraph(&["selftest", "--cases", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 8);
}
