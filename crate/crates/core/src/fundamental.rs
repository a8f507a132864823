//! Spanning trees, tree walks and the identification of `π₁(E, u)` with the
//! free group on the edges outside a spanning tree.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::freegroup::{FreeGroup, FreeWord, Group, GroupElement, Letter};
use crate::graph::{concat_reduce, inverse_walk, is_connected, reduce_walk, Direction, Graph, Step, Walk};

/// A spanning tree of the underlying undirected graph, rooted at `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    in_tree: Vec<bool>,
    // Step taken from the parent to reach each vertex; `None` at the root.
    parent: Vec<Option<Step>>,
}

impl SpanningTree {
    /// Breadth-first tree from `root`. Each dequeued vertex scans its incident
    /// edges in edge-id order and claims unvisited neighbours.
    pub fn bfs(g: &Graph, root: usize) -> Result<SpanningTree> {
        if root >= g.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        if !is_connected(g) {
            return Err(Error::NotConnected);
        }
        let mut in_tree = vec![false; g.edge_count()];
        let mut parent = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in g.incident_edges(v) {
                let step = if g.source(e) == v { Step::forward(e) } else { Step::reverse(e) };
                let w = g.step_range(step);
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    parent[w] = Some(step);
                    queue.push_back(w);
                }
            }
        }
        Ok(SpanningTree { root, in_tree, parent })
    }

    /// A tree from an explicit edge set; checks it spans and is acyclic.
    pub fn from_edges(g: &Graph, root: usize, edges: &[usize]) -> Result<SpanningTree> {
        if root >= g.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        let mut in_tree = vec![false; g.edge_count()];
        for &e in edges {
            if e >= g.edge_count() {
                return Err(Error::UnknownEdge(format!("#{e}")));
            }
            in_tree[e] = true;
        }
        let count = in_tree.iter().filter(|&&b| b).count();
        if count + 1 != g.vertex_count() {
            return Err(Error::InvalidTree(format!(
                "{count} edges cannot span {} vertices",
                g.vertex_count()
            )));
        }
        let mut parent = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in g.incident_edges(v).into_iter().filter(|&e| in_tree[e]) {
                let step = if g.source(e) == v { Step::forward(e) } else { Step::reverse(e) };
                let w = g.step_range(step);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(step);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            // |V| - 1 edges that fail to connect must contain a cycle.
            return Err(Error::InvalidTree("edges do not connect every vertex".into()));
        }
        Ok(SpanningTree { root, in_tree, parent })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| self.in_tree[e]).collect()
    }

    /// `a_v`: the tree walk from the root to `v`.
    pub fn path_from_root(&self, g: &Graph, v: usize) -> Walk {
        let mut steps = Vec::new();
        let mut at = v;
        while let Some(step) = self.parent[at] {
            steps.push(step);
            at = g.step_source(step);
        }
        steps.reverse();
        Walk::new(g, self.root, steps).expect("parent pointers compose")
    }

    /// The unique reduced walk inside the tree from `from` to `to`.
    pub fn tree_walk(&self, g: &Graph, from: usize, to: usize) -> Result<Walk> {
        for v in [from, to] {
            if v >= g.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let back = inverse_walk(g, &self.path_from_root(g, from));
        concat_reduce(g, &back, &self.path_from_root(g, to))
    }
}

/// An assignment of a group element to every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    group: Group,
    values: Vec<GroupElement>,
}

impl Labelling {
    pub fn new(g: &Graph, group: Group, values: Vec<GroupElement>) -> Result<Labelling> {
        if values.len() != g.edge_count() {
            return Err(Error::InvalidLabelling(format!(
                "{} values for {} edges",
                values.len(),
                g.edge_count()
            )));
        }
        for (e, v) in values.iter().enumerate() {
            group
                .check(v)
                .map_err(|err| Error::InvalidLabelling(format!("edge {:?}: {err}", g.edge_name(e))))?;
        }
        Ok(Labelling { group, values })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn value(&self, e: usize) -> &GroupElement {
        &self.values[e]
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }
}

fn generator_name(edge: &str) -> String {
    let mut out = String::from("g_");
    for ch in edge.chars() {
        if ch == '%' || ch == '\'' || ch.is_whitespace() {
            let mut buf = [0u8; 4];
            for b in ch.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        } else {
            out.push(ch);
        }
    }
    out
}

/// `π₁(E, root)` presented as the free group on the non-tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalGroup {
    tree: SpanningTree,
    group: FreeGroup,
    generator_of_edge: Vec<Option<usize>>,
    edge_of_generator: Vec<usize>,
}

impl FundamentalGroup {
    /// One generator `g_<edge>` per non-tree edge, in edge order. Characters
    /// that cannot appear in generator names are escaped as `%XX`.
    pub fn new(g: &Graph, tree: SpanningTree) -> Result<FundamentalGroup> {
        let edge_of_generator: Vec<usize> = (0..g.edge_count()).filter(|&e| !tree.contains(e)).collect();
        let mut generator_of_edge = vec![None; g.edge_count()];
        for (i, &e) in edge_of_generator.iter().enumerate() {
            generator_of_edge[e] = Some(i);
        }
        let group = FreeGroup::new(edge_of_generator.iter().map(|&e| generator_name(g.edge_name(e))))?;
        Ok(FundamentalGroup { tree, group, generator_of_edge, edge_of_generator })
    }

    /// Convenience: the breadth-first tree at `root` and its fundamental group.
    pub fn at(g: &Graph, root: usize) -> Result<FundamentalGroup> {
        FundamentalGroup::new(g, SpanningTree::bfs(g, root)?)
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.tree.root
    }

    pub fn free_group(&self) -> &FreeGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn generator_of_edge(&self, e: usize) -> Option<usize> {
        self.generator_of_edge[e]
    }

    pub fn edge_of_generator(&self, i: usize) -> usize {
        self.edge_of_generator[i]
    }

    /// `a_{s(e)} e a_{r(e)}⁻¹`, reduced, for the edge behind generator `i`.
    pub fn representative_loop(&self, g: &Graph, i: usize) -> Walk {
        let e = self.edge_of_generator[i];
        self.edge_loop(g, e)
    }

    /// `a_{s(e)} e a_{r(e)}⁻¹` for any edge.
    pub fn edge_loop(&self, g: &Graph, e: usize) -> Walk {
        let to_source = self.tree.path_from_root(g, g.source(e));
        let back = inverse_walk(g, &self.tree.path_from_root(g, g.range(e)));
        let mut steps = to_source.steps().to_vec();
        steps.push(Step::forward(e));
        steps.extend_from_slice(back.steps());
        reduce_walk(&Walk::new(g, self.tree.root, steps).expect("tree loop composes"))
    }

    /// Reads a walk: `g_e^{±1}` for each non-tree step, nothing for tree steps.
    pub fn walk_to_word(&self, w: &Walk) -> FreeWord {
        FreeWord::from_letters(w.steps().iter().filter_map(|s| {
            self.generator_of_edge[s.edge].map(|i| Letter::new(i, s.dir == Direction::Reverse))
        }))
    }

    /// The reduced loop at the root spelling `w`.
    pub fn loop_of_word(&self, g: &Graph, w: &FreeWord) -> Result<Walk> {
        self.group.check(w)?;
        let mut acc = Walk::empty(self.tree.root);
        for l in w.letters() {
            let lp = self.representative_loop(g, l.generator);
            let lp = if l.inverse { inverse_walk(g, &lp) } else { lp };
            acc = concat_reduce(g, &acc, &lp)?;
        }
        Ok(acc)
    }

    /// `c_{u,T}`: trivial on tree edges, `g_e` elsewhere.
    pub fn canonical_labelling(&self, g: &Graph) -> Labelling {
        let values = (0..g.edge_count())
            .map(|e| {
                GroupElement::Word(match self.generator_of_edge[e] {
                    Some(i) => self.group.generator_word(i),
                    None => FreeWord::identity(),
                })
            })
            .collect();
        Labelling { group: Group::Free(self.group.clone()), values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn awkward_edge_names_are_escaped() {
        let g = Graph::new(["u"], [("a b", "u", "u"), ("c'", "u", "u"), ("50%", "u", "u")]).unwrap();
        let pi1 = FundamentalGroup::at(&g, 0).unwrap();
        assert_eq!(pi1.free_group().names(), &["g_50%25", "g_a%20b", "g_c%27"]);
    }

    #[test]
    fn single_vertex_tree_is_empty() {
        let g = fixtures::l1();
        let t = SpanningTree::bfs(&g, 0).unwrap();
        assert!(t.edges().is_empty());
    }

    #[test]
    fn c2_tree_prefers_first_edge() {
        let g = fixtures::cycle(2);
        let t = SpanningTree::bfs(&g, g.vertex("0").unwrap()).unwrap();
        assert_eq!(t.edges(), vec![g.edge("e0").unwrap()]);
        let w = t.tree_walk(&g, 0, 1).unwrap();
        assert_eq!(w.display(&g), "e0");
        assert!(t.tree_walk(&g, 1, 1).unwrap().is_empty());
        assert_eq!(t.tree_walk(&g, 1, 0).unwrap().display(&g), "e0'");
    }

    #[test]
    fn bfs_rejects_disconnected_and_unknown_root() {
        let two = Graph::new(["a", "b"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert!(matches!(SpanningTree::bfs(&two, 0), Err(Error::NotConnected)));
        assert!(matches!(SpanningTree::bfs(&fixtures::l1(), 3), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn explicit_trees_are_validated() {
        let g = fixtures::cycle(3);
        assert!(SpanningTree::from_edges(&g, 0, &[0, 1]).is_ok());
        assert!(SpanningTree::from_edges(&g, 0, &[0]).is_err());
        // a loop plus an edge on a 3-vertex graph cannot span
        let h = Graph::new(["a", "b", "c"], [("l", "a", "a"), ("p", "a", "b"), ("q", "b", "c")]).unwrap();
        assert!(SpanningTree::from_edges(&h, 0, &[0, 1]).is_err());
    }

    #[test]
    fn pi1_of_fixtures() {
        let l1 = fixtures::l1();
        let p = FundamentalGroup::at(&l1, 0).unwrap();
        assert_eq!(p.free_group().names(), &["g_e"]);
        assert_eq!(p.representative_loop(&l1, 0).display(&l1), "e");

        let b2 = fixtures::b2();
        let p = FundamentalGroup::at(&b2, 0).unwrap();
        assert_eq!(p.free_group().names(), &["g_x", "g_y"]);

        let c2 = fixtures::cycle(2);
        let p = FundamentalGroup::at(&c2, 0).unwrap();
        assert_eq!(p.free_group().names(), &["g_e1"]);
        assert_eq!(p.representative_loop(&c2, 0).display(&c2), "e0 e1");
    }

    #[test]
    fn canonical_labelling_examples() {
        let b2 = fixtures::b2();
        let p = FundamentalGroup::at(&b2, 0).unwrap();
        let c = p.canonical_labelling(&b2);
        let f = p.free_group();
        assert_eq!(c.value(b2.edge("x").unwrap()), &GroupElement::Word(f.parse_word("g_x").unwrap()));
        assert_eq!(c.value(b2.edge("y").unwrap()), &GroupElement::Word(f.parse_word("g_y").unwrap()));

        let c2 = fixtures::cycle(2);
        let p = FundamentalGroup::at(&c2, 0).unwrap();
        let c = p.canonical_labelling(&c2);
        assert_eq!(c.value(0), &GroupElement::Word(FreeWord::identity()));
        assert_eq!(c.value(1), &GroupElement::Word(p.free_group().parse_word("g_e1").unwrap()));
    }

    #[test]
    fn walk_to_word_examples() {
        let c2 = fixtures::cycle(2);
        let p = FundamentalGroup::at(&c2, 0).unwrap();
        let tree_only = Walk::parse(&c2, "e0 e0'").unwrap();
        assert!(p.walk_to_word(&tree_only).is_identity());
        let lp = Walk::parse(&c2, "e0 e1").unwrap();
        assert_eq!(p.free_group().format_word(&p.walk_to_word(&lp)), "g_e1");
    }

    #[test]
    fn loop_of_word_examples() {
        let l1 = fixtures::l1();
        let p = FundamentalGroup::at(&l1, 0).unwrap();
        assert_eq!(p.loop_of_word(&l1, &FreeWord::identity()).unwrap(), Walk::empty(0));
        let ge = p.free_group().parse_word("g_e").unwrap();
        assert_eq!(p.loop_of_word(&l1, &ge).unwrap().display(&l1), "e");

        let c2 = fixtures::cycle(2);
        let p = FundamentalGroup::at(&c2, 0).unwrap();
        let w = p.free_group().parse_word("g_e1").unwrap();
        assert_eq!(p.loop_of_word(&c2, &w).unwrap().display(&c2), "e0 e1");
        let w2 = p.free_group().parse_word("g_e1 g_e1'").unwrap();
        assert!(p.loop_of_word(&c2, &w2).unwrap().is_empty());
    }

    #[test]
    fn loop_of_word_rejects_foreign_words() {
        let l1 = fixtures::l1();
        let p = FundamentalGroup::at(&l1, 0).unwrap();
        let foreign = FreeGroup::new(["a", "b"]).unwrap().parse_word("b").unwrap();
        assert!(matches!(p.loop_of_word(&l1, &foreign), Err(Error::GeneratorMismatch(_))));
    }
}
