//! Relative skew products `E ×_c (G/H)` and the constructions around them.
//!
//! The product has vertices `(v, q)` and edges `(e, q)` with
//! `r(e, q) = (r(e), q)` and `s(e, q) = (s(e), c(e)·q)`. Ids are written
//! `"(v|q)"` and `"(e|q)"` using the coset names of the [`CosetSpace`].

mod action;
mod cohomology;
mod gross_tucker;
mod skeleton;

pub use action::{quotient_graph, GroupAction, Quotient};
pub use cohomology::{coboundary_isomorphism, cohomologous, tree_change, CoboundaryIsomorphism};
pub use gross_tucker::{gross_tucker, GrossTucker};
pub use skeleton::{ck_skeleton_check, SkeletonReport};

pub use crate::covering::verify_isomorphism;

use crate::covering::{is_covering, Covering, GraphMorphism};
use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, FiniteGroup, FiniteSubgroup, Group, GroupElement};
use crate::fundamental::Labelling;
use crate::graph::Graph;

pub fn pair_id(x: &str, q: &str) -> String {
    format!("({x}|{q})")
}

#[derive(Debug, Clone)]
pub struct SkewProduct {
    base: Graph,
    labelling: Labelling,
    cosets: CosetSpace,
    projection: Covering,
    vertex_ids: Vec<Vec<usize>>,
    edge_ids: Vec<Vec<usize>>,
    vertex_pairs: Vec<(usize, usize)>,
    edge_pairs: Vec<(usize, usize)>,
}

/// Builds `E ×_c (G/H)` together with its projection, certified as a covering.
pub fn relative_skew_product(base: &Graph, c: &Labelling, cosets: &CosetSpace) -> Result<SkewProduct> {
    if c.group() != cosets.group() {
        return Err(Error::GroupMismatch("labelling and coset space use different groups".into()));
    }
    if c.values().len() != base.edge_count() {
        return Err(Error::InvalidLabelling("labelling does not match the base graph".into()));
    }
    let n = cosets.len();
    // act(c(e), q) for every edge and coset
    let mut shifted = vec![vec![0; n]; base.edge_count()];
    for (e, row) in shifted.iter_mut().enumerate() {
        for (q, slot) in row.iter_mut().enumerate() {
            *slot = cosets.act(c.value(e), q)?;
        }
    }
    let vertex_names: Vec<String> = (0..base.vertex_count())
        .flat_map(|v| (0..n).map(move |q| (v, q)))
        .map(|(v, q)| pair_id(base.vertex_name(v), cosets.name(q)))
        .collect();
    let edges: Vec<(String, String, String)> = (0..base.edge_count())
        .flat_map(|e| (0..n).map(move |q| (e, q)))
        .map(|(e, q)| {
            (
                pair_id(base.edge_name(e), cosets.name(q)),
                pair_id(base.vertex_name(base.source(e)), cosets.name(shifted[e][q])),
                pair_id(base.vertex_name(base.range(e)), cosets.name(q)),
            )
        })
        .collect();
    let product = Graph::new(vertex_names, edges)?;

    let mut vertex_ids = vec![vec![0; n]; base.vertex_count()];
    let mut vertex_pairs = vec![(0, 0); product.vertex_count()];
    for (v, row) in vertex_ids.iter_mut().enumerate() {
        for (q, slot) in row.iter_mut().enumerate() {
            let x = product.vertex(&pair_id(base.vertex_name(v), cosets.name(q)))?;
            *slot = x;
            vertex_pairs[x] = (v, q);
        }
    }
    let mut edge_ids = vec![vec![0; n]; base.edge_count()];
    let mut edge_pairs = vec![(0, 0); product.edge_count()];
    for (e, row) in edge_ids.iter_mut().enumerate() {
        for (q, slot) in row.iter_mut().enumerate() {
            let x = product.edge(&pair_id(base.edge_name(e), cosets.name(q)))?;
            *slot = x;
            edge_pairs[x] = (e, q);
        }
    }
    let vmap = vertex_pairs.iter().map(|p| p.0).collect();
    let emap = edge_pairs.iter().map(|p| p.0).collect();
    let morphism = GraphMorphism::new(product, base.clone(), vmap, emap)?;
    let projection = is_covering(&morphism)
        .map_err(|fail| Error::Internal(format!("skew projection is not a covering: {fail}")))?;

    Ok(SkewProduct {
        base: base.clone(),
        labelling: c.clone(),
        cosets: cosets.clone(),
        projection,
        vertex_ids,
        edge_ids,
        vertex_pairs,
        edge_pairs,
    })
}

/// `E ×_c G` for a finite group `G`, with the free right action
/// `(x, g)·h = (x, gh)`.
pub fn full_skew_product(base: &Graph, c: &Labelling) -> Result<(SkewProduct, GroupAction)> {
    let Group::Finite(group) = c.group() else {
        return Err(Error::GroupMismatch("full skew products need a finite group".into()));
    };
    let trivial = group.subgroup(&[group.identity()])?;
    let cosets = CosetSpace::from_finite(group, &trivial);
    let sp = relative_skew_product(base, c, &cosets)?;
    let element = |q: usize| match cosets.representative(q) {
        GroupElement::Element(g) => *g,
        GroupElement::Word(_) => unreachable!(),
    };
    let coset = |g: usize| cosets.coset_of_element(g).expect("finite coset space");
    let product = sp.product();
    let vertex_action = (0..group.order())
        .map(|h| {
            (0..product.vertex_count())
                .map(|x| {
                    let (v, q) = sp.vertex_pairs[x];
                    sp.vertex_ids[v][coset(group.multiply(element(q), h))]
                })
                .collect()
        })
        .collect();
    let edge_action = (0..group.order())
        .map(|h| {
            (0..product.edge_count())
                .map(|x| {
                    let (e, q) = sp.edge_pairs[x];
                    sp.edge_ids[e][coset(group.multiply(element(q), h))]
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(group.clone(), product.clone(), vertex_action, edge_action)?;
    if let Some(why) = action.fixed_point() {
        return Err(Error::Internal(format!("right translation is not free: {why}")));
    }
    Ok((sp, action))
}

impl SkewProduct {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn labelling(&self) -> &Labelling {
        &self.labelling
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn product(&self) -> &Graph {
        self.projection.domain()
    }

    /// The projection `(x, q) ↦ x` with its covering certificate.
    pub fn projection(&self) -> &Covering {
        &self.projection
    }

    pub fn vertex(&self, v: usize, q: usize) -> usize {
        self.vertex_ids[v][q]
    }

    pub fn edge(&self, e: usize, q: usize) -> usize {
        self.edge_ids[e][q]
    }

    /// `(v, q)` for a product vertex.
    pub fn vertex_pair(&self, x: usize) -> (usize, usize) {
        self.vertex_pairs[x]
    }

    pub fn edge_pair(&self, x: usize) -> (usize, usize) {
        self.edge_pairs[x]
    }
}

/// Result of comparing `(E ×_c G)/H` with `E ×_c (G/H)`.
#[derive(Debug, Clone)]
pub struct QuotientIdentity {
    pub full: SkewProduct,
    pub quotient: Quotient,
    pub relative: SkewProduct,
    /// The map induced by `(v, g) ↦ (v, gH)`.
    pub map: GraphMorphism,
    pub is_isomorphism: bool,
}

/// Builds both sides of `(E ×_c G)/H ≅ E ×_c (G/H)` and the comparison map.
pub fn quotient_identity(base: &Graph, c: &Labelling, subgroup: &FiniteSubgroup) -> Result<QuotientIdentity> {
    let Group::Finite(group) = c.group() else {
        return Err(Error::GroupMismatch("needs a finite group".into()));
    };
    let (full, action) = full_skew_product(base, c)?;
    let restricted = action.restrict(subgroup)?;
    let quotient = quotient_graph(&restricted, true)?;
    let cosets = CosetSpace::from_finite(group, subgroup);
    let relative = relative_skew_product(base, c, &cosets)?;
    let full_element = |q: usize| match full.cosets().representative(q) {
        GroupElement::Element(g) => *g,
        GroupElement::Word(_) => unreachable!(),
    };
    let vertex_map = quotient
        .vertex_representatives()
        .iter()
        .map(|&x| {
            let (v, q) = full.vertex_pair(x);
            relative.vertex(v, cosets.coset_of_element(full_element(q)).unwrap())
        })
        .collect();
    let edge_map = quotient
        .edge_representatives()
        .iter()
        .map(|&x| {
            let (e, q) = full.edge_pair(x);
            relative.edge(e, cosets.coset_of_element(full_element(q)).unwrap())
        })
        .collect();
    let map = GraphMorphism::new(quotient.graph().clone(), relative.product().clone(), vertex_map, edge_map)?;
    let is_isomorphism = verify_isomorphism(&map);
    Ok(QuotientIdentity { full, quotient, relative, map, is_isomorphism })
}

/// Helper for tests and fuzzing: a finite-group labelling from element indices.
pub fn finite_labelling(base: &Graph, group: &FiniteGroup, values: &[usize]) -> Result<Labelling> {
    Labelling::new(
        base,
        Group::Finite(group.clone()),
        values.iter().map(|&g| GroupElement::Element(g)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::freegroup::{FreeGroup, SubgroupGraph};

    #[test]
    fn trivial_quotient_reproduces_the_base() {
        let b2 = fixtures::b2();
        let f = FreeGroup::new(["a", "b"]).unwrap();
        let c = Labelling::new(
            &b2,
            Group::Free(f.clone()),
            vec![GroupElement::Word(f.parse_word("a").unwrap()), GroupElement::Word(f.parse_word("b a").unwrap())],
        )
        .unwrap();
        let q = CosetSpace::trivial(&Group::Free(f)).unwrap();
        let sp = relative_skew_product(&b2, &c, &q).unwrap();
        assert_eq!(sp.product().vertex_names(), &["(u|H)"]);
        assert_eq!(sp.product().edge_names(), &["(x|H)", "(y|H)"]);
        assert!(verify_isomorphism(sp.projection().morphism()));
    }

    #[test]
    fn loop_labelled_x_over_cosets_of_x_squared() {
        let l1 = fixtures::l1();
        let f = FreeGroup::new(["x"]).unwrap();
        let c = Labelling::new(&l1, Group::Free(f.clone()), vec![GroupElement::Word(f.parse_word("x").unwrap())]).unwrap();
        let h = SubgroupGraph::from_generators(&f, &[f.parse_word("x x").unwrap()]).unwrap();
        let q = CosetSpace::from_subgroup_graph(&h).unwrap();
        let sp = relative_skew_product(&l1, &c, &q).unwrap();
        let g = sp.product();
        let triples: Vec<_> = g.edge_triples().collect();
        assert_eq!(triples, vec![("(e|H)", "(u|xH)", "(u|H)"), ("(e|xH)", "(u|H)", "(u|xH)")]);
        assert_eq!(sp.projection().sheets().unwrap(), 2);
    }

    #[test]
    fn group_mismatch_is_reported() {
        let l1 = fixtures::l1();
        let f = FreeGroup::new(["x"]).unwrap();
        let other = FreeGroup::new(["y"]).unwrap();
        let c = Labelling::new(&l1, Group::Free(f), vec![GroupElement::Word(Default::default())]).unwrap();
        let q = CosetSpace::trivial(&Group::Free(other)).unwrap();
        assert!(matches!(relative_skew_product(&l1, &c, &q), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn full_skew_product_of_trivial_group_is_the_base() {
        let d2 = fixtures::d2();
        let g = FiniteGroup::cyclic(1);
        let c = finite_labelling(&d2, &g, &[0, 0, 0, 0]).unwrap();
        let (sp, action) = full_skew_product(&d2, &c).unwrap();
        assert_eq!(sp.product().vertex_count(), 2);
        assert!(verify_isomorphism(sp.projection().morphism()));
        assert_eq!(action.group().order(), 1);
    }

    #[test]
    fn full_skew_product_over_z2_is_a_two_cycle_with_swap() {
        let l1 = fixtures::l1();
        let z2 = FiniteGroup::cyclic(2);
        let c = finite_labelling(&l1, &z2, &[1]).unwrap();
        let (sp, action) = full_skew_product(&l1, &c).unwrap();
        let g = sp.product();
        let triples: Vec<_> = g.edge_triples().collect();
        assert_eq!(triples, vec![("(e|0)", "(u|1)", "(u|0)"), ("(e|1)", "(u|0)", "(u|1)")]);
        // the non-identity element swaps both vertices and both edges
        assert_eq!(action.vertex_image(1, 0), 1);
        assert_eq!(action.edge_image(1, 1), 0);
        assert!(action.fixed_point().is_none());
    }

    #[test]
    fn quotient_identity_for_a_non_normal_subgroup() {
        let s3 = FiniteGroup::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]);
        let b2 = fixtures::b2();
        let c = finite_labelling(&b2, &s3, &[1, 2]).unwrap();
        for h in s3.all_subgroups() {
            let qi = quotient_identity(&b2, &c, &h).unwrap();
            assert!(qi.is_isomorphism, "subgroup {:?}", h.elements());
            assert_eq!(qi.relative.product().vertex_count(), 6 / h.order());
        }
    }
}
