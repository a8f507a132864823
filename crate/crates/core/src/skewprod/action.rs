//! Right actions of finite groups on graphs by automorphisms, and quotients.

use std::collections::BTreeMap;

use crate::covering::GraphMorphism;
use crate::error::{Error, Result};
use crate::freegroup::{FiniteGroup, FiniteSubgroup};
use crate::graph::Graph;

/// A right action `x ↦ x·h`. Tables are indexed `[h][x]`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FiniteGroup,
    graph: Graph,
    vertex_action: Vec<Vec<usize>>,
    edge_action: Vec<Vec<usize>>,
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
}

impl GroupAction {
    /// Checks that every element acts by a graph automorphism, that the
    /// identity acts trivially and that `(x·a)·b = x·(ab)`.
    pub fn new(
        group: FiniteGroup,
        graph: Graph,
        vertex_action: Vec<Vec<usize>>,
        edge_action: Vec<Vec<usize>>,
    ) -> Result<GroupAction> {
        let n = group.order();
        if vertex_action.len() != n || edge_action.len() != n {
            return Err(Error::NotAnAction("one table per group element is required".into()));
        }
        for h in 0..n {
            let hn = group.name(h);
            if vertex_action[h].len() != graph.vertex_count() || !is_permutation(&vertex_action[h]) {
                return Err(Error::NotAnAction(format!("{hn} does not permute the vertices")));
            }
            if edge_action[h].len() != graph.edge_count() || !is_permutation(&edge_action[h]) {
                return Err(Error::NotAnAction(format!("{hn} does not permute the edges")));
            }
            for e in 0..graph.edge_count() {
                let image = edge_action[h][e];
                if graph.source(image) != vertex_action[h][graph.source(e)]
                    || graph.range(image) != vertex_action[h][graph.range(e)]
                {
                    return Err(Error::NotAnAction(format!(
                        "{hn} does not commute with the endpoints of {}",
                        graph.edge_name(e)
                    )));
                }
            }
        }
        let id = group.identity();
        let fixes = |t: &[usize]| t.iter().enumerate().all(|(x, &y)| x == y);
        if !fixes(&vertex_action[id]) || !fixes(&edge_action[id]) {
            return Err(Error::NotAnAction("the identity does not act trivially".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = group.multiply(a, b);
                for (table, what) in [(&vertex_action, "vertex"), (&edge_action, "edge")] {
                    for x in 0..table[a].len() {
                        if table[b][table[a][x]] != table[ab][x] {
                            return Err(Error::NotAnAction(format!(
                                "(x·{})·{} differs from x·({}) on a {what}",
                                group.name(a),
                                group.name(b),
                                group.name(ab)
                            )));
                        }
                    }
                }
            }
        }
        Ok(GroupAction { group, graph, vertex_action, edge_action })
    }

    /// Builds an action from name-keyed tables `element -> {x -> x·element}`.
    /// Missing entries for the identity default to the identity map.
    pub fn from_names(
        group: FiniteGroup,
        graph: Graph,
        vertex_action: &BTreeMap<String, BTreeMap<String, String>>,
        edge_action: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<GroupAction> {
        for name in vertex_action.keys().chain(edge_action.keys()) {
            group.element(name)?;
        }
        let table = |maps: &BTreeMap<String, BTreeMap<String, String>>,
                     count: usize,
                     name_of: &dyn Fn(usize) -> String,
                     index_of: &dyn Fn(&str) -> Result<usize>|
         -> Result<Vec<Vec<usize>>> {
            (0..group.order())
                .map(|h| {
                    let Some(map) = maps.get(group.name(h)) else {
                        if h == group.identity() {
                            return Ok((0..count).collect());
                        }
                        return Err(Error::NotAnAction(format!("no table for {}", group.name(h))));
                    };
                    (0..count)
                        .map(|x| {
                            let key = name_of(x);
                            let image = map.get(&key).ok_or_else(|| {
                                Error::NotAnAction(format!("{} has no image under {}", key, group.name(h)))
                            })?;
                            index_of(image)
                        })
                        .collect()
                })
                .collect()
        };
        let vt = table(
            vertex_action,
            graph.vertex_count(),
            &|x| graph.vertex_name(x).to_string(),
            &|n| graph.vertex(n),
        )?;
        let et = table(
            edge_action,
            graph.edge_count(),
            &|x| graph.edge_name(x).to_string(),
            &|n| graph.edge(n),
        )?;
        GroupAction::new(group.clone(), graph.clone(), vt, et)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `v·h`.
    pub fn vertex_image(&self, h: usize, v: usize) -> usize {
        self.vertex_action[h][v]
    }

    /// `e·h`.
    pub fn edge_image(&self, h: usize, e: usize) -> usize {
        self.edge_action[h][e]
    }

    /// Describes a non-identity element fixing a vertex or an edge, if any.
    pub fn fixed_point(&self) -> Option<String> {
        let id = self.group.identity();
        for h in (0..self.group.order()).filter(|&h| h != id) {
            if let Some(v) = (0..self.graph.vertex_count()).find(|&v| self.vertex_action[h][v] == v) {
                return Some(format!("{} fixes vertex {}", self.group.name(h), self.graph.vertex_name(v)));
            }
            if let Some(e) = (0..self.graph.edge_count()).find(|&e| self.edge_action[h][e] == e) {
                return Some(format!("{} fixes edge {}", self.group.name(h), self.graph.edge_name(e)));
            }
        }
        None
    }

    pub fn is_free(&self) -> bool {
        self.fixed_point().is_none()
    }

    /// The action of a subgroup, as a group with its own element indices.
    pub fn restrict(&self, subgroup: &FiniteSubgroup) -> Result<GroupAction> {
        let (group, embedding) = subgroup.as_group(&self.group);
        let vt = embedding.iter().map(|&h| self.vertex_action[h].clone()).collect();
        let et = embedding.iter().map(|&h| self.edge_action[h].clone()).collect();
        GroupAction::new(group, self.graph.clone(), vt, et)
    }

    pub fn vertex_orbit(&self, v: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.vertex_action.iter().map(|t| t[v]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn edge_orbit(&self, e: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.edge_action.iter().map(|t| t[e]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }
}

/// The orbit graph `X/G` and the quotient map. Each orbit is named after its
/// least member.
#[derive(Debug, Clone)]
pub struct Quotient {
    map: GraphMorphism,
    vertex_reps: Vec<usize>,
    edge_reps: Vec<usize>,
}

impl Quotient {
    pub fn graph(&self) -> &Graph {
        self.map.codomain()
    }

    /// `X → X/G`.
    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    /// The least member of each vertex orbit, indexed by quotient vertex.
    pub fn vertex_representatives(&self) -> &[usize] {
        &self.vertex_reps
    }

    pub fn edge_representatives(&self) -> &[usize] {
        &self.edge_reps
    }
}

pub fn quotient_graph(action: &GroupAction, require_free: bool) -> Result<Quotient> {
    if require_free {
        if let Some(why) = action.fixed_point() {
            return Err(Error::NotFree(why));
        }
    }
    let x = action.graph();
    let vertex_rep: Vec<usize> = (0..x.vertex_count()).map(|v| action.vertex_orbit(v)[0]).collect();
    let edge_rep: Vec<usize> = (0..x.edge_count()).map(|e| action.edge_orbit(e)[0]).collect();
    let mut vreps: Vec<usize> = vertex_rep.clone();
    vreps.sort_unstable();
    vreps.dedup();
    let mut ereps: Vec<usize> = edge_rep.clone();
    ereps.sort_unstable();
    ereps.dedup();
    let graph = Graph::new(
        vreps.iter().map(|&v| x.vertex_name(v).to_string()),
        ereps.iter().map(|&e| {
            (
                x.edge_name(e).to_string(),
                x.vertex_name(vertex_rep[x.source(e)]).to_string(),
                x.vertex_name(vertex_rep[x.range(e)]).to_string(),
            )
        }),
    )?;
    let vertex_map = vertex_rep
        .iter()
        .map(|&r| graph.vertex(x.vertex_name(r)))
        .collect::<Result<Vec<_>>>()?;
    let edge_map = edge_rep
        .iter()
        .map(|&r| graph.edge(x.edge_name(r)))
        .collect::<Result<Vec<_>>>()?;
    let mut vertex_reps = vec![0; graph.vertex_count()];
    for &v in &vreps {
        vertex_reps[graph.vertex(x.vertex_name(v))?] = v;
    }
    let mut edge_reps = vec![0; graph.edge_count()];
    for &e in &ereps {
        edge_reps[graph.edge(x.edge_name(e))?] = e;
    }
    let map = GraphMorphism::new(x.clone(), graph, vertex_map, edge_map)?;
    Ok(Quotient { map, vertex_reps, edge_reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::is_covering;
    use crate::fixtures;

    fn rotation(n: usize) -> GroupAction {
        let g = fixtures::cycle(n);
        let z = FiniteGroup::cyclic(n);
        let vt = (0..n)
            .map(|h| (0..n).map(|v| g.vertex(&format!("{}", (v + h) % n)).unwrap()).collect())
            .collect();
        let et = (0..n)
            .map(|h| (0..n).map(|e| g.edge(&format!("e{}", (e + h) % n)).unwrap()).collect())
            .collect();
        GroupAction::new(z, g, vt, et).unwrap()
    }

    #[test]
    fn rotating_a_cycle_is_free_with_loop_quotient() {
        let a = rotation(4);
        assert!(a.is_free());
        let q = quotient_graph(&a, true).unwrap();
        assert_eq!(q.graph().vertex_count(), 1);
        assert_eq!(q.graph().edge_count(), 1);
        assert!(is_covering(q.map()).is_ok());
    }

    #[test]
    fn a_fixed_point_blocks_free_quotients() {
        let b2 = fixtures::b2();
        let z2 = FiniteGroup::cyclic(2);
        let x = b2.edge("x").unwrap();
        let y = b2.edge("y").unwrap();
        let mut swap = vec![0; 2];
        swap[x] = y;
        swap[y] = x;
        let a = GroupAction::new(z2, b2, vec![vec![0], vec![0]], vec![vec![0, 1], swap]).unwrap();
        assert!(!a.is_free());
        assert!(matches!(quotient_graph(&a, true), Err(Error::NotFree(_))));
        let q = quotient_graph(&a, false).unwrap();
        assert_eq!(q.graph().edge_names(), &["x"]);
    }

    #[test]
    fn non_actions_are_rejected() {
        let g = fixtures::cycle(3);
        let z3 = FiniteGroup::cyclic(3);
        let id: Vec<usize> = (0..3).collect();
        let shift: Vec<usize> = vec![1, 2, 0];
        // every element acting as the same rotation breaks the identity law
        let bad = GroupAction::new(z3.clone(), g.clone(), vec![shift.clone(); 3], vec![shift.clone(); 3]);
        assert!(matches!(bad, Err(Error::NotAnAction(_))));
        // edges not moving with their endpoints
        let bad = GroupAction::new(
            z3,
            g,
            vec![id.clone(), shift.clone(), vec![2, 0, 1]],
            vec![id.clone(), id.clone(), id],
        );
        assert!(matches!(bad, Err(Error::NotAnAction(_))));
    }

    #[test]
    fn restriction_keeps_the_action() {
        let a = rotation(6);
        let sub = a.group().subgroup(&[0, 3]).unwrap();
        let r = a.restrict(&sub).unwrap();
        assert_eq!(r.group().order(), 2);
        let q = quotient_graph(&r, true).unwrap();
        assert_eq!(q.graph().vertex_count(), 3);
    }
}
