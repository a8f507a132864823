//! Every connected covering `p: F → E` is a relative skew product
//! `E ×_c (π₁(E, p(v)) / p_*π₁(F, v))` for the canonical labelling `c`.

use std::collections::HashMap;

use crate::covering::{is_covering, Covering, Endpoint, GraphMorphism, Theta};
use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, Index, SubgroupGraph};
use crate::fundamental::{FundamentalGroup, Labelling, SpanningTree};
use crate::graph::{is_connected, Graph};
use crate::random::{self, Bounds};
use crate::skewprod::{relative_skew_product, verify_isomorphism, SkewProduct};

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub covering: Covering,
    pub base: usize,
    pub pi1: FundamentalGroup,
    pub labelling: Labelling,
    pub subgroup: SubgroupGraph,
    pub cosets: CosetSpace,
    pub product: SkewProduct,
    /// `F → E ×_c Q`.
    pub phi: GraphMorphism,
    /// For each vertex `z` of `F`, the source of the lift of `a_{p(z)}` ending at `z`.
    pub tau: Vec<usize>,
    /// θ on the fiber over `p(base)`, as `(vertex, coset)` pairs.
    pub theta: Vec<(usize, usize)>,
    pub sheets: usize,
    pub index: usize,
    pub theta_bijective: bool,
}

impl ReconstructionResult {
    pub fn tree(&self) -> &SpanningTree {
        self.pi1.tree()
    }

    /// All certificates hold. `reconstruct` only returns results where the
    /// isomorphism and commutation checks passed.
    pub fn all_checks_pass(&self) -> bool {
        self.sheets == self.index && self.theta_bijective
    }
}

pub fn reconstruct(p: &Covering, v: usize) -> Result<ReconstructionResult> {
    let (f, e) = (p.domain(), p.codomain());
    if !is_connected(f) || !is_connected(e) {
        return Err(Error::NotConnected);
    }
    if v >= f.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let pm = p.morphism();
    let u = pm.vertex(v);
    let pi1 = FundamentalGroup::at(e, u)?;
    let tree = pi1.tree().clone();
    let labelling = pi1.canonical_labelling(e);
    let subgroup = p.induced_subgroup(v, &pi1)?;
    let cosets = CosetSpace::from_subgroup_graph(&subgroup)?;
    let product = relative_skew_product(e, &labelling, &cosets)?;

    let theta = Theta::new(p, v, &pi1, &cosets)?;
    let theta_table = theta.table()?;
    let theta_bijective = theta.is_bijective()?;
    let mut theta_of = vec![usize::MAX; f.vertex_count()];
    for &(w, q) in &theta_table {
        theta_of[w] = q;
    }

    let tau = (0..f.vertex_count())
        .map(|z| {
            let a = tree.path_from_root(e, pm.vertex(z));
            let lifted = p.lift_walk(&a, z, Endpoint::Range)?;
            Ok(lifted.source())
        })
        .collect::<Result<Vec<_>>>()?;

    let vertex_map = (0..f.vertex_count())
        .map(|z| product.vertex(pm.vertex(z), theta_of[tau[z]]))
        .collect();
    let edge_map = (0..f.edge_count())
        .map(|x| product.edge(pm.edge(x), theta_of[tau[f.range(x)]]))
        .collect();
    let phi = GraphMorphism::new(f.clone(), product.product().clone(), vertex_map, edge_map)
        .map_err(|err| Error::IsomorphismFailure(format!("φ is not a graph morphism: {err}")))?;
    if !verify_isomorphism(&phi) {
        return Err(Error::IsomorphismFailure("φ is not bijective".into()));
    }
    let projected = phi.then(product.projection().morphism())?;
    if projected.vertex_map() != pm.vertex_map() || projected.edge_map() != pm.edge_map() {
        return Err(Error::IsomorphismFailure("projection ∘ φ differs from p".into()));
    }

    let sheets = p.sheets()?;
    let index = match subgroup.index() {
        Index::Finite(n) => n,
        Index::Infinite => return Err(Error::InfiniteIndex),
    };
    Ok(ReconstructionResult {
        covering: p.clone(),
        base: v,
        pi1,
        labelling,
        subgroup,
        cosets,
        product,
        phi,
        tau,
        theta: theta_table,
        sheets,
        index,
        theta_bijective,
    })
}

/// Outcome of one generated reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzCase {
    pub seed: u64,
    pub base_vertices: usize,
    pub base_edges: usize,
    pub sheets: usize,
    pub failure: Option<String>,
}

/// A random connected covering: a skew product of a random connected graph
/// over the cosets of a random finite-index subgroup, with a random base
/// vertex upstairs.
pub fn random_covering(seed: u64, bounds: Bounds) -> Result<(Covering, usize)> {
    let mut rng = random::rng(seed);
    let e = random::connected_graph(&mut rng, bounds);
    let root = rand::Rng::gen_range(&mut rng, 0..e.vertex_count());
    let pi1 = FundamentalGroup::at(&e, root)?;
    let c = pi1.canonical_labelling(&e);
    let h = random::finite_index_subgroup(&mut rng, pi1.free_group(), bounds.max_index)?;
    let q = CosetSpace::from_subgroup_graph(&h)?;
    let sp = relative_skew_product(&e, &c, &q)?;
    let covering = sp.projection().clone();
    let v = rand::Rng::gen_range(&mut rng, 0..covering.domain().vertex_count());
    Ok((covering, v))
}

fn run_case(seed: u64, bounds: Bounds) -> FuzzCase {
    let mut case = FuzzCase { seed, base_vertices: 0, base_edges: 0, sheets: 0, failure: None };
    let outcome = random_covering(seed, bounds).and_then(|(p, v)| {
        case.base_vertices = p.codomain().vertex_count();
        case.base_edges = p.codomain().edge_count();
        // re-certify from the bare morphism rather than trusting the projection
        let p = is_covering(p.morphism())?;
        reconstruct(&p, v)
    });
    match outcome {
        Ok(r) => {
            case.sheets = r.sheets;
            if r.sheets != r.index {
                case.failure = Some(format!("sheets {} but index {}", r.sheets, r.index));
            } else if !r.theta_bijective {
                case.failure = Some("fiber-to-coset map is not a bijection".into());
            }
        }
        Err(err) => case.failure = Some(err.to_string()),
    }
    case
}

/// Reconstructs `count` generated coverings with seeds `seed, seed+1, ...`.
pub fn roundtrip_fuzz(seed: u64, count: usize, bounds: Bounds) -> Vec<FuzzCase> {
    (0..count as u64).map(|i| run_case(seed.wrapping_add(i), bounds)).collect()
}

/// Checks that reconstruction commutes with renaming the vertices of `F`:
/// reconstructing a relabelled copy yields the same `φ` up to the renaming.
pub fn relabelling_is_stable(p: &Covering, v: usize, rename: impl Fn(&str) -> String) -> Result<bool> {
    let f = p.domain();
    let vertex_names: HashMap<String, String> =
        f.vertex_names().iter().map(|n| (n.clone(), rename(n))).collect();
    let renamed: Graph = f.relabel(&vertex_names, &Default::default())?;
    let m = p.morphism();
    let moved = GraphMorphism::new(
        renamed.clone(),
        p.codomain().clone(),
        (0..renamed.vertex_count())
            .map(|x| {
                let old = f.vertex(original(&vertex_names, renamed.vertex_name(x))).unwrap();
                m.vertex(old)
            })
            .collect(),
        (0..renamed.edge_count())
            .map(|x| m.edge(f.edge(renamed.edge_name(x)).unwrap()))
            .collect(),
    )?;
    let q = is_covering(&moved)?;
    let new_v = renamed.vertex(&vertex_names[f.vertex_name(v)])?;
    let a = reconstruct(p, v)?;
    let b = reconstruct(&q, new_v)?;
    if a.product.product() != b.product.product() {
        return Ok(false);
    }
    Ok((0..f.vertex_count()).all(|z| {
        let z2 = renamed.vertex(&vertex_names[f.vertex_name(z)]).unwrap();
        a.phi.vertex(z) == b.phi.vertex(z2)
    }) && (0..f.edge_count()).all(|x| a.phi.edge(x) == b.phi.edge(renamed.edge(f.edge_name(x)).unwrap())))
}

fn original<'a>(names: &'a HashMap<String, String>, new: &str) -> &'a str {
    names.iter().find(|(_, v)| v.as_str() == new).map(|(k, _)| k.as_str()).unwrap()
}
