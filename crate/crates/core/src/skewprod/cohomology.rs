//! Cohomologous labellings `b(s(e))·c2(e) = c(e)·b(r(e))` and the induced
//! isomorphism of relative skew products.

use super::{relative_skew_product, verify_isomorphism, SkewProduct};
use crate::covering::GraphMorphism;
use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, GroupElement};
use crate::fundamental::{FundamentalGroup, Labelling, SpanningTree};
use crate::graph::{concat, inverse_walk, Graph, Step, Walk};

fn check_inputs(g: &Graph, c: &Labelling, c2: &Labelling, b: &[GroupElement]) -> Result<()> {
    if c.group() != c2.group() {
        return Err(Error::GroupMismatch("the two labellings use different groups".into()));
    }
    if c.values().len() != g.edge_count() || c2.values().len() != g.edge_count() {
        return Err(Error::InvalidLabelling("labelling does not match the graph".into()));
    }
    if b.len() != g.vertex_count() {
        return Err(Error::InvalidLabelling("b needs one value per vertex".into()));
    }
    for x in b {
        c.group().check(x)?;
    }
    Ok(())
}

/// Whether `b(s(e))·c2(e) = c(e)·b(r(e))` holds on every edge.
pub fn cohomologous(g: &Graph, c: &Labelling, c2: &Labelling, b: &[GroupElement]) -> Result<bool> {
    check_inputs(g, c, c2, b)?;
    let group = c.group();
    for e in 0..g.edge_count() {
        let left = group.multiply(&b[g.source(e)], c2.value(e))?;
        let right = group.multiply(c.value(e), &b[g.range(e)])?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct CoboundaryIsomorphism {
    /// `E ×_{c2} (G/H)`.
    pub source: SkewProduct,
    /// `E ×_c (G/H)`.
    pub target: SkewProduct,
    pub morphism: GraphMorphism,
    pub is_isomorphism: bool,
}

/// The map `(v, q) ↦ (v, b(v)·q)`, `(e, q) ↦ (e, b(r(e))·q)` from
/// `E ×_{c2} (G/H)` to `E ×_c (G/H)`. Fails with `NotAMorphism` when the
/// labellings are not cohomologous through `b`.
pub fn coboundary_isomorphism(
    g: &Graph,
    c: &Labelling,
    c2: &Labelling,
    b: &[GroupElement],
    cosets: &CosetSpace,
) -> Result<CoboundaryIsomorphism> {
    check_inputs(g, c, c2, b)?;
    let source = relative_skew_product(g, c2, cosets)?;
    let target = relative_skew_product(g, c, cosets)?;
    let domain = source.product();
    let vertex_map = (0..domain.vertex_count())
        .map(|x| {
            let (v, q) = source.vertex_pair(x);
            Ok(target.vertex(v, cosets.act(&b[v], q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let edge_map = (0..domain.edge_count())
        .map(|x| {
            let (e, q) = source.edge_pair(x);
            Ok(target.edge(e, cosets.act(&b[g.range(e)], q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let morphism = GraphMorphism::new(domain.clone(), target.product().clone(), vertex_map, edge_map)?;
    let is_isomorphism = verify_isomorphism(&morphism);
    Ok(CoboundaryIsomorphism { source, target, morphism, is_isomorphism })
}

/// Moves the canonical labelling of another spanning tree into the free
/// group of `pi1`.
///
/// With `γ` the `pi1` tree walk from its root `u` to the other root `u'` and
/// `a'` the other tree's root paths, returns
/// `c2(e) = [γ a'_{s(e)} e a'_{r(e)}⁻¹ γ⁻¹]` and `b(v) = [a_v a'_v⁻¹ γ⁻¹]`,
/// both read in `pi1`. Then `b(s(e))·c2(e) = c_{u,T}(e)·b(r(e))`.
pub fn tree_change(g: &Graph, pi1: &FundamentalGroup, other: &SpanningTree) -> Result<(Labelling, Vec<GroupElement>)> {
    let tree = pi1.tree();
    let gamma = tree.tree_walk(g, tree.root(), other.root())?;
    let gamma_back = inverse_walk(g, &gamma);
    let conjugate = |w: &Walk| -> Result<GroupElement> {
        let w = concat(g, &concat(g, &gamma, w)?, &gamma_back)?;
        Ok(GroupElement::Word(pi1.walk_to_word(&w)))
    };
    let values = (0..g.edge_count())
        .map(|e| {
            let into = other.path_from_root(g, g.source(e));
            let out = inverse_walk(g, &other.path_from_root(g, g.range(e)));
            let through = concat(g, &into, &Walk::new(g, g.source(e), vec![Step::forward(e)])?)?;
            conjugate(&concat(g, &through, &out)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let c2 = Labelling::new(g, crate::freegroup::Group::Free(pi1.free_group().clone()), values)?;
    let b = (0..g.vertex_count())
        .map(|v| {
            let a = tree.path_from_root(g, v);
            let back = inverse_walk(g, &other.path_from_root(g, v));
            let w = concat(g, &concat(g, &a, &back)?, &gamma_back)?;
            Ok(GroupElement::Word(pi1.walk_to_word(&w)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((c2, b))
}
