//! Finite directed multigraphs and the walk algebra on their underlying
//! undirected graphs.
//!
//! Vertices and edges are addressed by dense indices into the
//! lexicographically sorted id lists, so index order is id order and every
//! traversal below is deterministic.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result, Violation};

/// A finite directed multigraph `(E⁰, E¹, r, s)`; loops and parallel edges allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = (0..self.edge_count())
            .map(|e| {
                format!(
                    "{}:{}->{}",
                    self.edges[e], self.vertices[self.src[e]], self.vertices[self.dst[e]]
                )
            })
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Validates a raw description. All violations are collected, not just the first.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut violations = Vec::new();

        let mut vertex_list: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &vertex_list {
            if !seen.insert(v.clone()) {
                violations.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        vertex_list.sort();
        vertex_list.dedup();

        let mut edge_list: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(id, s, d)| (id.into(), s.into(), d.into()))
            .collect();
        let mut seen = HashSet::new();
        for (id, s, d) in &edge_list {
            if !seen.insert(id.clone()) {
                violations.push(Violation::DuplicateEdge(id.clone()));
            }
            for endpoint in [s, d] {
                if vertex_list.binary_search(endpoint).is_err() {
                    violations.push(Violation::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: endpoint.clone(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidGraph(violations));
        }
        edge_list.sort();

        let vertex_index: HashMap<String, usize> = vertex_list
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut out_edges = vec![Vec::new(); vertex_list.len()];
        let mut in_edges = vec![Vec::new(); vertex_list.len()];
        let mut ids = Vec::with_capacity(edge_list.len());
        let mut src = Vec::with_capacity(edge_list.len());
        let mut dst = Vec::with_capacity(edge_list.len());
        for (i, (id, s, d)) in edge_list.into_iter().enumerate() {
            let (s, d) = (vertex_index[&s], vertex_index[&d]);
            out_edges[s].push(i);
            in_edges[d].push(i);
            ids.push(id);
            src.push(s);
            dst.push(d);
        }
        let edge_index = ids.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();

        Ok(Graph {
            vertices: vertex_list,
            edges: ids,
            src,
            dst,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edges[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edges
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<usize> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// `s(e)`
    pub fn source(&self, e: usize) -> usize {
        self.src[e]
    }

    /// `r(e)`
    pub fn range(&self, e: usize) -> usize {
        self.dst[e]
    }

    /// `s⁻¹(v)` in edge order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// `r⁻¹(v)` in edge order.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Edges touching `v` in either direction, in edge order; loops appear once.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out_edges[v]
            .iter()
            .chain(&self.in_edges[v])
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn step_source(&self, step: Step) -> usize {
        match step.dir {
            Direction::Forward => self.src[step.edge],
            Direction::Reverse => self.dst[step.edge],
        }
    }

    pub fn step_range(&self, step: Step) -> usize {
        match step.dir {
            Direction::Forward => self.dst[step.edge],
            Direction::Reverse => self.src[step.edge],
        }
    }

    /// `(id, src, dst)` triples in edge order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&str, &str, &str)> + '_ {
        (0..self.edge_count()).map(move |e| {
            (
                self.edges[e].as_str(),
                self.vertices[self.src[e]].as_str(),
                self.vertices[self.dst[e]].as_str(),
            )
        })
    }

    /// Renames vertices and edges; names missing from the maps are kept.
    pub fn relabel(
        &self,
        vertex_names: &HashMap<String, String>,
        edge_names: &HashMap<String, String>,
    ) -> Result<Graph> {
        let rename = |m: &HashMap<String, String>, x: &str| m.get(x).cloned().unwrap_or_else(|| x.to_string());
        Graph::new(
            self.vertices.iter().map(|v| rename(vertex_names, v)),
            self.edge_triples().map(|(e, s, d)| {
                (rename(edge_names, e), rename(vertex_names, s), rename(vertex_names, d))
            }),
        )
    }
}

/// Connectivity of the underlying undirected graph. The empty graph is not connected.
pub fn is_connected(g: &Graph) -> bool {
    if g.vertex_count() == 0 {
        return false;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for e in g.out_edges(v).iter().chain(g.in_edges(v)) {
            for w in [g.source(*e), g.range(*e)] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
    }
    reached == g.vertex_count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

/// An edge traversed forwards (`e`) or backwards (`e⁻¹`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub dir: Direction,
}

impl Step {
    pub fn forward(edge: usize) -> Step {
        Step { edge, dir: Direction::Forward }
    }

    pub fn reverse(edge: usize) -> Step {
        Step { edge, dir: Direction::Reverse }
    }

    pub fn inverse(self) -> Step {
        Step { edge: self.edge, dir: self.dir.flip() }
    }

    /// True for `e e⁻¹` and `e⁻¹ e`.
    pub fn cancels(self, next: Step) -> bool {
        self.edge == next.edge && self.dir != next.dir
    }
}

/// A composable sequence of steps with an explicit source vertex, so the
/// empty walk at `v` is representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    source: usize,
    steps: Vec<Step>,
}

impl Walk {
    pub fn empty(at: usize) -> Walk {
        Walk { source: at, steps: Vec::new() }
    }

    /// Checks that `source` exists and that consecutive steps compose.
    pub fn new(g: &Graph, source: usize, steps: Vec<Step>) -> Result<Walk> {
        if source >= g.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{source}")));
        }
        let mut at = source;
        for (i, step) in steps.iter().enumerate() {
            if step.edge >= g.edge_count() {
                return Err(Error::UnknownEdge(format!("#{}", step.edge)));
            }
            if g.step_source(*step) != at {
                return Err(Error::NotComposable(format!(
                    "step {i} ({}) starts at {:?} but the walk is at {:?}",
                    format_step(g, *step),
                    g.vertex_name(g.step_source(*step)),
                    g.vertex_name(at)
                )));
            }
            at = g.step_range(*step);
        }
        Ok(Walk { source, steps })
    }

    /// A nonempty walk; its source is the source of the first step.
    pub fn from_steps(g: &Graph, steps: Vec<Step>) -> Result<Walk> {
        let first = steps
            .first()
            .ok_or_else(|| Error::MalformedWalk("empty step list needs an anchor vertex".into()))?;
        if first.edge >= g.edge_count() {
            return Err(Error::UnknownEdge(format!("#{}", first.edge)));
        }
        Walk::new(g, g.step_source(*first), steps)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn range(&self, g: &Graph) -> usize {
        self.steps.last().map_or(self.source, |s| g.step_range(*s))
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// The vertices visited, `len() + 1` of them.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        std::iter::once(self.source)
            .chain(self.steps.iter().map(|s| g.step_range(*s)))
            .collect()
    }

    /// Parses the text syntax: `e f' g` or `@v` for the empty walk at `v`.
    pub fn parse(g: &Graph, text: &str) -> Result<Walk> {
        let text = text.trim();
        if let Some(anchor) = text.strip_prefix('@') {
            if anchor.split_whitespace().count() != 1 {
                return Err(Error::MalformedWalk(format!("bad empty walk {text:?}")));
            }
            return Ok(Walk::empty(g.vertex(anchor)?));
        }
        let steps = text
            .split_whitespace()
            .map(|tok| parse_step(g, tok))
            .collect::<Result<Vec<_>>>()?;
        if steps.is_empty() {
            return Err(Error::MalformedWalk(
                "an empty walk must be written @<vertex>".into(),
            ));
        }
        Walk::from_steps(g, steps)
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.steps.is_empty() {
            return format!("@{}", g.vertex_name(self.source));
        }
        self.steps
            .iter()
            .map(|s| format_step(g, *s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn parse_step(g: &Graph, tok: &str) -> Result<Step> {
    if let Some(base) = tok.strip_suffix('\'') {
        if let Ok(e) = g.edge(base) {
            return Ok(Step::reverse(e));
        }
    }
    g.edge(tok).map(Step::forward)
}

pub fn format_step(g: &Graph, step: Step) -> String {
    match step.dir {
        Direction::Forward => g.edge_name(step.edge).to_string(),
        Direction::Reverse => format!("{}'", g.edge_name(step.edge)),
    }
}

/// Free reduction by a single stack pass.
pub fn reduce_walk(w: &Walk) -> Walk {
    let mut stack: Vec<Step> = Vec::with_capacity(w.steps.len());
    for &step in &w.steps {
        match stack.last() {
            Some(&top) if top.cancels(step) => {
                stack.pop();
            }
            _ => stack.push(step),
        }
    }
    Walk { source: w.source, steps: stack }
}

/// Traverses `w` backwards.
pub fn inverse_walk(g: &Graph, w: &Walk) -> Walk {
    Walk {
        source: w.range(g),
        steps: w.steps.iter().rev().map(|s| s.inverse()).collect(),
    }
}

/// Plain concatenation, requiring `r(a) = s(b)`.
pub fn concat(g: &Graph, a: &Walk, b: &Walk) -> Result<Walk> {
    let range = a.range(g);
    if range != b.source {
        return Err(Error::EndpointMismatch {
            range: g.vertex_name(range).to_string(),
            source_vertex: g.vertex_name(b.source).to_string(),
        });
    }
    let mut steps = a.steps.clone();
    steps.extend_from_slice(&b.steps);
    Ok(Walk { source: a.source, steps })
}

/// The reduced product `ab`.
pub fn concat_reduce(g: &Graph, a: &Walk, b: &Walk) -> Result<Walk> {
    concat(g, a, b).map(|w| reduce_walk(&w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_smallest_loop_graph() {
        let g = fixtures::l1();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.source(0), g.range(0));
    }

    #[test]
    fn validate_reports_dangling_endpoint() {
        let err = Graph::new(["u"], [("e", "z", "u")]).unwrap_err();
        match err {
            Error::InvalidGraph(v) => assert_eq!(
                v,
                vec![Violation::DanglingEndpoint { edge: "e".into(), vertex: "z".into() }]
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_reports_duplicate_ids() {
        let err = Graph::new(["u"], [("e", "u", "u"), ("e", "u", "u")]).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(ref v) if v == &vec![Violation::DuplicateEdge("e".into())]));
        let err = Graph::new(["u", "u"], Vec::<(&str, &str, &str)>::new()).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(ref v) if v == &vec![Violation::DuplicateVertex("u".into())]));
    }

    #[test]
    fn validate_collects_every_violation() {
        let err = Graph::new(["u"], [("e", "a", "b"), ("e", "u", "u")]).unwrap_err();
        let Error::InvalidGraph(v) = err else { panic!() };
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&fixtures::l1()));
        assert!(is_connected(&fixtures::cycle(2)));
        let two = Graph::new(["u", "w"], [("e", "u", "u"), ("f", "w", "w")]).unwrap();
        assert!(!is_connected(&two));
        let empty = Graph::new(Vec::<&str>::new(), Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(!is_connected(&empty));
    }

    #[test]
    fn reduce_identity_and_single_cancellation() {
        let g = fixtures::l1();
        let u = g.vertex("u").unwrap();
        assert_eq!(reduce_walk(&Walk::empty(u)), Walk::empty(u));
        let w = Walk::parse(&g, "e e'").unwrap();
        assert_eq!(reduce_walk(&w), Walk::empty(u));
    }

    #[test]
    fn reduction_of_nested_cancellations_keeps_anchor() {
        let g = fixtures::cycle(2);
        let w = Walk::parse(&g, "e0 e1 e1' e0'").unwrap();
        let r = reduce_walk(&w);
        assert!(r.is_empty());
        assert_eq!(r.source(), g.vertex("0").unwrap());
    }

    #[test]
    fn concat_identity_and_inverse() {
        let g = fixtures::b2();
        let u = g.vertex("u").unwrap();
        let w = Walk::parse(&g, "x y y' x' y").unwrap();
        assert_eq!(concat_reduce(&g, &Walk::empty(u), &w).unwrap(), reduce_walk(&w));
        let inv = inverse_walk(&g, &w);
        assert_eq!(concat_reduce(&g, &w, &inv).unwrap(), Walk::empty(u));
    }

    #[test]
    fn concat_rejects_endpoint_mismatch() {
        let g = fixtures::cycle(2);
        let a = Walk::parse(&g, "e0").unwrap();
        let b = Walk::parse(&g, "e0").unwrap();
        assert!(matches!(concat_reduce(&g, &a, &b), Err(Error::EndpointMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        let g = fixtures::l1();
        let u = g.vertex("u").unwrap();
        assert_eq!(inverse_walk(&g, &Walk::empty(u)), Walk::empty(u));
        let w = Walk::parse(&g, "e").unwrap();
        assert_eq!(inverse_walk(&g, &w).display(&g), "e'");
    }

    #[test]
    fn parse_rejects_non_composable() {
        let g = fixtures::cycle(2);
        assert!(matches!(Walk::parse(&g, "e0 e0"), Err(Error::NotComposable(_))));
        assert!(matches!(Walk::parse(&g, ""), Err(Error::MalformedWalk(_))));
        assert!(matches!(Walk::parse(&g, "@9"), Err(Error::UnknownVertex(_))));
        assert!(matches!(Walk::parse(&g, "q"), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn walk_text_round_trips() {
        let g = fixtures::d2();
        for text in ["@1", "x0 x1 y0", "y1' x0'", "x0"] {
            assert_eq!(Walk::parse(&g, text).unwrap().display(&g), text);
        }
    }

    #[test]
    fn ids_are_ordered_lexicographically() {
        let g = Graph::new(["b", "a"], [("z", "a", "b"), ("m", "b", "a")]).unwrap();
        assert_eq!(g.vertex_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(g.edge_names(), &["m".to_string(), "z".to_string()]);
        assert_eq!(g.incident_edges(0), vec![0, 1]);
    }
}
