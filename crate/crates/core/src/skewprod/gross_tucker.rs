//! Recovering a graph with a free right action of `H` as `(X/H) ×_d H`.

use super::{finite_labelling, full_skew_product, quotient_graph, verify_isomorphism, GroupAction, Quotient, SkewProduct};
use crate::covering::GraphMorphism;
use crate::error::{Error, Result};
use crate::freegroup::GroupElement;
use crate::fundamental::Labelling;

#[derive(Debug, Clone)]
pub struct GrossTucker {
    pub quotient: Quotient,
    /// `d` on the edges of `X/H`, valued in the acting group.
    pub labelling: Labelling,
    /// `(X/H) ×_d H` with right translation.
    pub lifted: SkewProduct,
    pub lifted_action: GroupAction,
    /// `Φ: (X/H) ×_d H → X`.
    pub phi: GraphMorphism,
    pub is_isomorphism: bool,
    /// `Φ((q, g)·h) = Φ(q, g)·h` for all `h`.
    pub is_equivariant: bool,
}

pub fn gross_tucker(action: &GroupAction) -> Result<GrossTucker> {
    let quotient = quotient_graph(action, true)?;
    let x = action.graph();
    let group = action.group();
    let q = quotient.graph();
    let transversal = quotient.vertex_representatives();
    let orbit_of = |v: usize| quotient.map().vertex(v);

    // ẽ_f: the member of the orbit f ending at x_{r(f)}
    let mut lifted_edges = Vec::with_capacity(q.edge_count());
    let mut d = Vec::with_capacity(q.edge_count());
    for f in 0..q.edge_count() {
        let rep = quotient.edge_representatives()[f];
        let target = transversal[q.range(f)];
        let found: Vec<usize> = (0..group.order())
            .map(|h| action.edge_image(h, rep))
            .filter(|&e| x.range(e) == target)
            .collect();
        let [edge] = found[..] else {
            return Err(Error::Internal(format!(
                "edge orbit {} has {} members ending at the transversal",
                q.edge_name(f),
                found.len()
            )));
        };
        let start = transversal[q.source(f)];
        let hs: Vec<usize> = (0..group.order())
            .filter(|&h| action.vertex_image(h, start) == x.source(edge))
            .collect();
        let [h] = hs[..] else {
            return Err(Error::Internal(format!("no unique translate for edge orbit {}", q.edge_name(f))));
        };
        debug_assert_eq!(orbit_of(x.source(edge)), q.source(f));
        lifted_edges.push(edge);
        d.push(h);
    }
    let labelling = finite_labelling(q, group, &d)?;
    let (lifted, lifted_action) = full_skew_product(q, &labelling)?;

    let element = |coset: usize| match lifted.cosets().representative(coset) {
        GroupElement::Element(g) => *g,
        GroupElement::Word(_) => unreachable!(),
    };
    let product = lifted.product();
    let vertex_map: Vec<usize> = (0..product.vertex_count())
        .map(|p| {
            let (v, k) = lifted.vertex_pair(p);
            action.vertex_image(element(k), transversal[v])
        })
        .collect();
    let edge_map: Vec<usize> = (0..product.edge_count())
        .map(|p| {
            let (f, k) = lifted.edge_pair(p);
            action.edge_image(element(k), lifted_edges[f])
        })
        .collect();
    let phi = GraphMorphism::new(product.clone(), x.clone(), vertex_map, edge_map)?;
    let is_isomorphism = verify_isomorphism(&phi);
    let is_equivariant = (0..group.order()).all(|h| {
        (0..product.vertex_count())
            .all(|p| phi.vertex(lifted_action.vertex_image(h, p)) == action.vertex_image(h, phi.vertex(p)))
            && (0..product.edge_count())
                .all(|p| phi.edge(lifted_action.edge_image(h, p)) == action.edge_image(h, phi.edge(p)))
    });
    Ok(GrossTucker { quotient, labelling, lifted, lifted_action, phi, is_isomorphism, is_equivariant })
}
