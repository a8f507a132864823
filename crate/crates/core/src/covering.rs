//! Graph morphisms, coverings and everything that follows from unique walk
//! lifting: the induced subgroup `p_*π₁(F, v)`, the fiber–coset bijection θ
//! and the sheet count.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, FreeWord, GroupElement, SubgroupGraph};
use crate::fundamental::{FundamentalGroup, SpanningTree};
use crate::graph::{inverse_walk, is_connected, Direction, Graph, Step, Walk};

/// A vertex map and an edge map commuting with source and range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    domain: Graph,
    codomain: Graph,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(domain: Graph, codomain: Graph, vertex_map: Vec<usize>, edge_map: Vec<usize>) -> Result<GraphMorphism> {
        let mut failures = Vec::new();
        if vertex_map.len() != domain.vertex_count() || edge_map.len() != domain.edge_count() {
            return Err(Error::NotAMorphism(vec!["maps are not total on the domain".into()]));
        }
        if let Some(v) = vertex_map.iter().position(|&t| t >= codomain.vertex_count()) {
            failures.push(format!("vertex {:?} maps outside the codomain", domain.vertex_name(v)));
        }
        if let Some(e) = edge_map.iter().position(|&t| t >= codomain.edge_count()) {
            failures.push(format!("edge {:?} maps outside the codomain", domain.edge_name(e)));
        }
        if failures.is_empty() {
            for e in 0..domain.edge_count() {
                let pe = edge_map[e];
                if codomain.source(pe) != vertex_map[domain.source(e)] {
                    failures.push(format!("edge {:?}: s(p(e)) != p(s(e))", domain.edge_name(e)));
                }
                if codomain.range(pe) != vertex_map[domain.range(e)] {
                    failures.push(format!("edge {:?}: r(p(e)) != p(r(e))", domain.edge_name(e)));
                }
            }
        }
        if !failures.is_empty() {
            return Err(Error::NotAMorphism(failures));
        }
        Ok(GraphMorphism { domain, codomain, vertex_map, edge_map })
    }

    /// Builds a morphism from id-keyed maps; unknown or missing ids are failures.
    pub fn from_names(
        domain: Graph,
        codomain: Graph,
        vertex_map: &BTreeMap<String, String>,
        edge_map: &BTreeMap<String, String>,
    ) -> Result<GraphMorphism> {
        let mut failures = Vec::new();
        let mut resolve = |from: &Graph, to: &Graph, map: &BTreeMap<String, String>, kind: &str, vertices: bool| {
            let names = if vertices { from.vertex_names() } else { from.edge_names() };
            let mut out = Vec::with_capacity(names.len());
            for name in names {
                let image = map.get(name).map(|t| if vertices { to.vertex(t) } else { to.edge(t) });
                match image {
                    Some(Ok(t)) => out.push(t),
                    Some(Err(_)) => {
                        failures.push(format!("{kind} {name:?} maps to unknown {kind} {:?}", map[name]));
                        out.push(usize::MAX);
                    }
                    None => {
                        failures.push(format!("{kind} {name:?} is not mapped"));
                        out.push(usize::MAX);
                    }
                }
            }
            for key in map.keys() {
                let known = if vertices { from.vertex(key).is_ok() } else { from.edge(key).is_ok() };
                if !known {
                    failures.push(format!("map mentions unknown domain {kind} {key:?}"));
                }
            }
            out
        };
        let vm = resolve(&domain, &codomain, vertex_map, "vertex", true);
        let em = resolve(&domain, &codomain, edge_map, "edge", false);
        if !failures.is_empty() {
            return Err(Error::NotAMorphism(failures));
        }
        GraphMorphism::new(domain, codomain, vm, em)
    }

    pub fn identity(g: &Graph) -> GraphMorphism {
        GraphMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).collect(),
        }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge(&self, e: usize) -> usize {
        self.edge_map[e]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn map_walk(&self, w: &Walk) -> Walk {
        let steps = w
            .steps()
            .iter()
            .map(|s| Step { edge: self.edge_map[s.edge], dir: s.dir })
            .collect();
        Walk::new(&self.codomain, self.vertex_map[w.source()], steps).expect("morphisms preserve composability")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMorphism) -> Result<GraphMorphism> {
        if self.codomain != other.domain {
            return Err(Error::NotAMorphism(vec!["composition: codomain and domain differ".into()]));
        }
        GraphMorphism::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            self.edge_map.iter().map(|&e| other.edge_map[e]).collect(),
        )
    }

    /// Name-keyed maps, for serialisation.
    pub fn named_maps(&self) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let vm = (0..self.domain.vertex_count())
            .map(|v| (self.domain.vertex_name(v).to_string(), self.codomain.vertex_name(self.vertex_map[v]).to_string()))
            .collect();
        let em = (0..self.domain.edge_count())
            .map(|e| (self.domain.edge_name(e).to_string(), self.codomain.edge_name(self.edge_map[e]).to_string()))
            .collect();
        (vm, em)
    }
}

/// True iff both maps are bijections.
pub fn verify_isomorphism(m: &GraphMorphism) -> bool {
    fn bijective(map: &[usize], target: usize) -> bool {
        if map.len() != target {
            return false;
        }
        let mut hit = vec![false; target];
        map.iter().all(|&t| !std::mem::replace(&mut hit[t], true))
    }
    bijective(&m.vertex_map, m.codomain.vertex_count()) && bijective(&m.edge_map, m.codomain.edge_count())
}

/// Why a morphism is not a covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotCovering {
    pub vertex: Option<String>,
    pub reason: String,
}

impl fmt::Display for NotCovering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.vertex {
            Some(v) => write!(f, "at vertex {v:?}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl From<NotCovering> for Error {
    fn from(n: NotCovering) -> Error {
        Error::NotACovering(n.to_string())
    }
}

/// A morphism together with its local bijections, which drive lifting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    morphism: GraphMorphism,
    // [domain vertex][codomain edge] -> domain edge
    out_lift: Vec<HashMap<usize, usize>>,
    in_lift: Vec<HashMap<usize, usize>>,
}

/// Checks local bijectivity at every domain vertex (in id order), then
/// surjectivity.
pub fn is_covering(p: &GraphMorphism) -> std::result::Result<Covering, NotCovering> {
    let (f, e) = (&p.domain, &p.codomain);
    let mut out_lift = Vec::with_capacity(f.vertex_count());
    let mut in_lift = Vec::with_capacity(f.vertex_count());
    for v in 0..f.vertex_count() {
        let pv = p.vertex_map[v];
        let fail = |reason: String| NotCovering { vertex: Some(f.vertex_name(v).to_string()), reason };
        for (side, here, there, table) in [
            ("s", f.out_edges(v), e.out_edges(pv), &mut out_lift),
            ("r", f.in_edges(v), e.in_edges(pv), &mut in_lift),
        ] {
            if here.len() != there.len() {
                return Err(fail(format!(
                    "|{side}⁻¹({})| = {} but |{side}⁻¹({})| = {}",
                    f.vertex_name(v),
                    here.len(),
                    e.vertex_name(pv),
                    there.len()
                )));
            }
            let mut lift = HashMap::new();
            for &d in here {
                if let Some(other) = lift.insert(p.edge_map[d], d) {
                    return Err(fail(format!(
                        "edges {:?} and {:?} both map to {:?}",
                        f.edge_name(other),
                        f.edge_name(d),
                        e.edge_name(p.edge_map[d])
                    )));
                }
            }
            table.push(lift);
        }
    }
    let mut hit_v = vec![false; e.vertex_count()];
    p.vertex_map.iter().for_each(|&v| hit_v[v] = true);
    if let Some(v) = hit_v.iter().position(|h| !h) {
        return Err(NotCovering { vertex: None, reason: format!("vertex {:?} is not in the image", e.vertex_name(v)) });
    }
    let mut hit_e = vec![false; e.edge_count()];
    p.edge_map.iter().for_each(|&x| hit_e[x] = true);
    if let Some(x) = hit_e.iter().position(|h| !h) {
        return Err(NotCovering { vertex: None, reason: format!("edge {:?} is not in the image", e.edge_name(x)) });
    }
    Ok(Covering { morphism: p.clone(), out_lift, in_lift })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Range,
}

impl Covering {
    pub fn morphism(&self) -> &GraphMorphism {
        &self.morphism
    }

    pub fn domain(&self) -> &Graph {
        &self.morphism.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.morphism.codomain
    }

    /// The domain edge over `e` leaving `v`, or entering it.
    pub fn lift_edge(&self, v: usize, e: usize, end: Endpoint) -> Option<usize> {
        match end {
            Endpoint::Source => self.out_lift[v].get(&e).copied(),
            Endpoint::Range => self.in_lift[v].get(&e).copied(),
        }
    }

    /// `p⁻¹(u)` in id order.
    pub fn fiber(&self, u: usize) -> Vec<usize> {
        (0..self.domain().vertex_count())
            .filter(|&v| self.morphism.vertex_map[v] == u)
            .collect()
    }

    /// The unique walk over `a` whose source (or range) is `anchor`.
    pub fn lift_walk(&self, a: &Walk, anchor: usize, end: Endpoint) -> Result<Walk> {
        let (f, e) = (self.domain(), self.codomain());
        if anchor >= f.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{anchor}")));
        }
        let target = match end {
            Endpoint::Source => a.source(),
            Endpoint::Range => a.range(e),
        };
        if self.morphism.vertex_map[anchor] != target {
            return Err(Error::AnchorMismatch(format!(
                "p({}) = {} but the walk's {} is {}",
                f.vertex_name(anchor),
                e.vertex_name(self.morphism.vertex_map[anchor]),
                if end == Endpoint::Source { "source" } else { "range" },
                e.vertex_name(target)
            )));
        }
        if end == Endpoint::Range {
            let up = self.lift_walk(&inverse_walk(e, a), anchor, Endpoint::Source)?;
            return Ok(inverse_walk(f, &up));
        }
        let mut at = anchor;
        let mut steps = Vec::with_capacity(a.len());
        for s in a.steps() {
            let lifted = match s.dir {
                Direction::Forward => self.out_lift[at][&s.edge],
                Direction::Reverse => self.in_lift[at][&s.edge],
            };
            let step = Step { edge: lifted, dir: s.dir };
            at = f.step_range(step);
            steps.push(step);
        }
        Walk::new(f, anchor, steps)
    }

    /// Common fiber size over a connected base.
    pub fn sheets(&self) -> Result<usize> {
        if !is_connected(self.domain()) || !is_connected(self.codomain()) {
            return Err(Error::NotConnected);
        }
        let mut counts = vec![0usize; self.codomain().vertex_count()];
        for &u in &self.morphism.vertex_map {
            counts[u] += 1;
        }
        let n = counts[0];
        if counts.iter().any(|&c| c != n) {
            return Err(Error::Internal(format!("fiber sizes differ: {counts:?}")));
        }
        Ok(n)
    }

    /// `p_*π₁(F, v) ≤ π₁(E, p(v))`, with `π₁(E, p(v))` presented by `pi1`.
    pub fn induced_subgroup(&self, v: usize, pi1: &FundamentalGroup) -> Result<SubgroupGraph> {
        let (f, e) = (self.domain(), self.codomain());
        if !is_connected(f) || !is_connected(e) {
            return Err(Error::NotConnected);
        }
        if v >= f.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        if pi1.root() != self.morphism.vertex_map[v] {
            return Err(Error::BasePointMismatch(format!(
                "tree is rooted at {} but p({}) = {}",
                e.vertex_name(pi1.root()),
                f.vertex_name(v),
                e.vertex_name(self.morphism.vertex_map[v])
            )));
        }
        let upstairs = FundamentalGroup::at(f, v)?;
        let images: Vec<FreeWord> = (0..upstairs.rank())
            .map(|i| pi1.walk_to_word(&self.morphism.map_walk(&upstairs.representative_loop(f, i))))
            .collect();
        SubgroupGraph::from_generators(pi1.free_group(), &images)
    }

    /// θ for a given walk `a` from `w` to `v`: the coset `p(a)·H`.
    pub fn theta_along(&self, a: &Walk, v: usize, pi1: &FundamentalGroup, cosets: &CosetSpace) -> Result<usize> {
        let f = self.domain();
        if a.range(f) != v {
            return Err(Error::EndpointMismatch {
                range: f.vertex_name(a.range(f)).to_string(),
                source_vertex: f.vertex_name(v).to_string(),
            });
        }
        if self.morphism.vertex_map[a.source()] != self.morphism.vertex_map[v] {
            return Err(Error::NotInFiber(f.vertex_name(a.source()).to_string()));
        }
        let word = pi1.walk_to_word(&self.morphism.map_walk(a));
        cosets.act(&GroupElement::Word(word), cosets.identity())
    }
}

/// θ: `p⁻¹(p(v)) → π₁(E, p(v)) / p_*π₁(F, v)`, using walks inside the
/// breadth-first spanning tree of `F` at `v`.
#[derive(Debug, Clone)]
pub struct Theta<'a> {
    covering: &'a Covering,
    base: usize,
    tree: SpanningTree,
    pi1: &'a FundamentalGroup,
    cosets: &'a CosetSpace,
}

impl<'a> Theta<'a> {
    pub fn new(covering: &'a Covering, base: usize, pi1: &'a FundamentalGroup, cosets: &'a CosetSpace) -> Result<Theta<'a>> {
        let tree = SpanningTree::bfs(covering.domain(), base)?;
        Ok(Theta { covering, base, tree, pi1, cosets })
    }

    pub fn apply(&self, w: usize) -> Result<usize> {
        let f = self.covering.domain();
        if w >= f.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{w}")));
        }
        if self.covering.morphism.vertex_map[w] != self.covering.morphism.vertex_map[self.base] {
            return Err(Error::NotInFiber(f.vertex_name(w).to_string()));
        }
        let a = self.tree.tree_walk(f, w, self.base)?;
        self.covering.theta_along(&a, self.base, self.pi1, self.cosets)
    }

    /// θ on the whole fiber, in id order.
    pub fn table(&self) -> Result<Vec<(usize, usize)>> {
        let u = self.covering.morphism.vertex_map[self.base];
        self.covering
            .fiber(u)
            .into_iter()
            .map(|w| self.apply(w).map(|q| (w, q)))
            .collect()
    }

    /// θ is injective and hits every coset.
    pub fn is_bijective(&self) -> Result<bool> {
        let table = self.table()?;
        let mut hit = vec![false; self.cosets.len()];
        for (_, q) in &table {
            if std::mem::replace(&mut hit[*q], true) {
                return Ok(false);
            }
        }
        Ok(hit.iter().all(|h| *h))
    }
}
