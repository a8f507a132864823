//! Seeded generators for graphs, labellings, subgroups and finite groups.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::error::Result;
use crate::freegroup::{FiniteGroup, FiniteSubgroup, FreeGroup, FreeWord, Group, GroupElement, Letter, SubgroupGraph};
use crate::fundamental::{Labelling, SpanningTree};
use crate::graph::{Graph, Step, Walk};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Upper bound on the index of random subgroups.
    pub max_index: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_vertices: 12, max_edges: 24, max_index: 12 }
    }
}

/// A connected graph: a random spanning tree with random orientations, plus
/// extra edges between arbitrary endpoints (loops and parallels allowed).
pub fn connected_graph(rng: &mut impl Rng, bounds: Bounds) -> Graph {
    let n = rng.gen_range(1..=bounds.max_vertices.max(1));
    let min_edges = (n - 1).max(1);
    let m = rng.gen_range(min_edges..=bounds.max_edges.max(min_edges));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let name = |i: usize| format!("v{}", order[i]);
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (s, t) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        edges.push((s, t));
    }
    while edges.len() < m {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    Graph::new(
        (0..n).map(name),
        edges
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| (format!("e{k}"), name(s), name(t))),
    )
    .expect("generated graphs are valid")
}

/// A subgroup of index at most `max_index`, read off random permutations of
/// `1..=max_index` points restricted to the orbit of point 0.
pub fn finite_index_subgroup(rng: &mut impl Rng, group: &FreeGroup, max_index: usize) -> Result<SubgroupGraph> {
    let k = rng.gen_range(1..=max_index.max(1));
    let perms: Vec<Vec<usize>> = (0..group.rank()).map(|_| permutation(rng, k)).collect();
    SubgroupGraph::from_permutations(group, &perms, 0)
}

pub fn permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A reduced word of length at most `max_len`.
pub fn word(rng: &mut impl Rng, group: &FreeGroup, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len && group.rank() > 0 {
        let l = Letter::new(rng.gen_range(0..group.rank()), rng.gen_bool(0.5));
        if letters.last().is_some_and(|&last| last == l.inv()) {
            continue;
        }
        letters.push(l);
    }
    FreeWord::from_letters(letters)
}

/// A walk of length at most `max_len` from a random vertex, not necessarily
/// reduced. Graphs without edges give empty walks.
pub fn walk(rng: &mut impl Rng, g: &Graph, max_len: usize) -> Walk {
    let start = rng.gen_range(0..g.vertex_count());
    let len = rng.gen_range(0..=max_len);
    let mut at = start;
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let incident = g.incident_edges(at);
        if incident.is_empty() {
            break;
        }
        let e = *incident.choose(rng).unwrap();
        let mut options = Vec::with_capacity(2);
        if g.source(e) == at {
            options.push(Step::forward(e));
        }
        if g.range(e) == at {
            options.push(Step::reverse(e));
        }
        let step = *options.choose(rng).unwrap();
        at = g.step_range(step);
        steps.push(step);
    }
    Walk::new(g, start, steps).expect("generated walks compose")
}

/// A uniformly shuffled Kruskal tree rooted at `root`.
pub fn spanning_tree(rng: &mut impl Rng, g: &Graph, root: usize) -> Result<SpanningTree> {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for e in order {
        let (a, b) = (find(&mut parent, g.source(e)), find(&mut parent, g.range(e)));
        if a != b {
            parent[a] = b;
            chosen.push(e);
        }
    }
    SpanningTree::from_edges(g, root, &chosen)
}

/// Words of length at most 4 for free groups, uniform elements for finite ones.
pub fn labelling(rng: &mut impl Rng, g: &Graph, group: &Group) -> Labelling {
    let values = (0..g.edge_count())
        .map(|_| match group {
            Group::Free(f) => GroupElement::Word(word(rng, f, 4)),
            Group::Finite(fg) => GroupElement::Element(rng.gen_range(0..fg.order())),
        })
        .collect();
    Labelling::new(g, group.clone(), values).expect("generated labellings are valid")
}

fn cycle_perm(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| (i + k) % n).collect()
}

fn dihedral(n: usize) -> FiniteGroup {
    let reflect: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(&[cycle_perm(n, 1), reflect])
}

/// Direct product of cyclic groups acting on disjoint blocks of points.
fn abelian(orders: &[usize]) -> FiniteGroup {
    let total: usize = orders.iter().sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for &n in orders {
        let mut p: Vec<usize> = (0..total).collect();
        for i in 0..n {
            p[offset + i] = offset + (i + 1) % n;
        }
        gens.push(p);
        offset += n;
    }
    FiniteGroup::from_permutations(&gens)
}

/// Small finite groups used for fuzzing, all of order at most 12.
pub fn group_catalog() -> Vec<(String, FiniteGroup)> {
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push((format!("Z{n}"), FiniteGroup::cyclic(n)));
    }
    for n in 3..=6 {
        out.push((format!("D{n}"), dihedral(n)));
    }
    out.push(("Z2xZ2".into(), abelian(&[2, 2])));
    out.push(("Z2xZ4".into(), abelian(&[2, 4])));
    out.push(("Z2xZ6".into(), abelian(&[2, 6])));
    out.push(("Z3xZ3".into(), abelian(&[3, 3])));
    out.push(("Z2xZ2xZ2".into(), abelian(&[2, 2, 2])));
    out.push(("A4".into(), FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])));
    out
}

pub fn finite_group(rng: &mut impl Rng, max_order: usize) -> (String, FiniteGroup) {
    let fits: Vec<_> = group_catalog().into_iter().filter(|(_, g)| g.order() <= max_order).collect();
    fits.choose(rng).cloned().expect("the catalog has groups of every order bound ≥ 1")
}

pub fn subgroup(rng: &mut impl Rng, group: &FiniteGroup) -> FiniteSubgroup {
    group.all_subgroups().choose(rng).cloned().expect("the trivial subgroup always exists")
}
