//! Combinatorial checks on `E ×_c (G/H)`: fiber bijections at every vertex
//! and unique lifting of directed paths with a prescribed range.

use std::collections::HashSet;

use super::relative_skew_product;
use crate::error::Result;
use crate::freegroup::CosetSpace;
use crate::fundamental::Labelling;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonReport {
    pub vertices_checked: usize,
    pub paths_checked: usize,
    pub lifts_checked: usize,
    pub violations: Vec<String>,
}

impl SkeletonReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lift counts per coset: for each `q`, the start vertices of partial lifts
/// with their multiplicities.
type Lifts = Vec<Vec<(usize, usize)>>;

struct PathWalker<'a> {
    base: &'a Graph,
    product: &'a Graph,
    cosets: &'a CosetSpace,
    /// Product in-edges of each product vertex, keyed and sorted by base edge.
    in_lifts: Vec<Vec<(usize, usize)>>,
    max_len: usize,
    path: Vec<usize>,
    paths: usize,
    lifts: usize,
    violations: Vec<String>,
}

impl PathWalker<'_> {
    /// Extends the current path backwards by every edge entering `at`.
    fn extend(&mut self, at: usize, state: &Lifts) {
        if self.path.len() == self.max_len {
            return;
        }
        for &e in self.base.in_edges(at) {
            let next: Lifts = state
                .iter()
                .map(|partial| {
                    let mut out: Vec<(usize, usize)> = Vec::new();
                    for &(x, count) in partial {
                        let row = &self.in_lifts[x];
                        let from = row.partition_point(|&(b, _)| b < e);
                        for &(_, y) in row[from..].iter().take_while(|&&(b, _)| b == e) {
                            out.push((self.product.source(y), count));
                        }
                    }
                    out
                })
                .collect();
            self.path.push(e);
            self.paths += 1;
            for (q, partial) in next.iter().enumerate() {
                self.lifts += 1;
                let total: usize = partial.iter().map(|p| p.1).sum();
                if total != 1 {
                    let names: Vec<&str> = self.path.iter().rev().map(|&e| self.base.edge_name(e)).collect();
                    let end = self.base.range(self.path[0]);
                    self.violations.push(format!(
                        "path {} has {total} lifts ending at ({}|{})",
                        names.join(" "),
                        self.base.vertex_name(end),
                        self.cosets.name(q)
                    ));
                }
            }
            self.extend(self.base.source(e), &next);
            self.path.pop();
        }
    }
}

pub fn ck_skeleton_check(g: &Graph, c: &Labelling, cosets: &CosetSpace, max_len: usize) -> Result<SkeletonReport> {
    let sp = relative_skew_product(g, c, cosets)?;
    let product = sp.product();
    let group = c.group();
    let mut violations = Vec::new();

    for v in 0..g.vertex_count() {
        for q in 0..cosets.len() {
            let x = sp.vertex(v, q);
            let name = product.vertex_name(x);
            let mut images = HashSet::new();
            for &e in g.out_edges(v) {
                let t = cosets.act(&group.inverse(c.value(e))?, q)?;
                let image = sp.edge(e, t);
                if product.source(image) != x {
                    violations.push(format!("{} does not start at {name}", product.edge_name(image)));
                }
                images.insert(image);
            }
            if images.len() != g.out_edges(v).len() || images.len() != product.out_edges(x).len() {
                violations.push(format!("out-edges of {name} are not in bijection with those of its base vertex"));
            }
            let mut images = HashSet::new();
            for &e in g.in_edges(v) {
                let image = sp.edge(e, q);
                if product.range(image) != x {
                    violations.push(format!("{} does not end at {name}", product.edge_name(image)));
                }
                images.insert(image);
            }
            if images.len() != g.in_edges(v).len() || images.len() != product.in_edges(x).len() {
                violations.push(format!("in-edges of {name} are not in bijection with those of its base vertex"));
            }
        }
    }

    let proj_edge = sp.projection().morphism().edge_map();
    let mut walker = PathWalker {
        base: g,
        product,
        cosets,
        in_lifts: (0..product.vertex_count())
            .map(|x| {
                let mut row: Vec<(usize, usize)> = product.in_edges(x).iter().map(|&y| (proj_edge[y], y)).collect();
                row.sort_unstable();
                row
            })
            .collect(),
        max_len,
        path: Vec::new(),
        paths: 0,
        lifts: 0,
        violations: Vec::new(),
    };
    for w in 0..g.vertex_count() {
        let start: Lifts = (0..cosets.len()).map(|q| vec![(sp.vertex(w, q), 1)]).collect();
        walker.extend(w, &start);
    }
    violations.append(&mut walker.violations);

    Ok(SkeletonReport {
        vertices_checked: product.vertex_count(),
        paths_checked: walker.paths,
        lifts_checked: walker.lifts,
        violations,
    })
}
