//! JSON documents for graphs, labellings, subgroups, morphisms and actions.
//!
//! Every document carries `"format_version": 1` on output. On input the
//! field may be omitted; any other value is rejected. Unknown fields are
//! rejected so that typos surface as errors with a line and column.

mod dot;

pub use dot::to_dot;

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::covering::GraphMorphism;
use crate::error::{Error, Result};
use crate::freegroup::{CosetSpace, FiniteGroup, FiniteSubgroup, FreeGroup, Group, SubgroupGraph};
use crate::fundamental::Labelling;
use crate::graph::Graph;
use crate::skewprod::GroupAction;

pub const FORMAT_VERSION: u32 = 1;

fn version() -> Option<u32> {
    Some(FORMAT_VERSION)
}

/// Parses a document, reporting syntax and schema errors with their line and column.
pub fn parse<T: DeserializeOwned + Versioned>(text: &str, what: &str) -> Result<T> {
    let doc: T = serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))?;
    match doc.format_version() {
        None | Some(FORMAT_VERSION) => Ok(doc),
        Some(v) => Err(Error::Input(format!("{what}: unsupported format_version {v}, expected {FORMAT_VERSION}"))),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub trait Versioned {
    fn format_version(&self) -> Option<u32>;
}

macro_rules! versioned {
    ($($t:ty),*) => {$(
        impl Versioned for $t {
            fn format_version(&self) -> Option<u32> {
                self.format_version
            }
        }
    )*};
}

versioned!(GraphDoc, LabellingDoc, SubgroupDoc, MorphismDoc, ActionDoc);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> GraphDoc {
        GraphDoc {
            format_version: version(),
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edge_triples()
                .map(|(id, s, d)| EdgeDoc { id: id.into(), src: s.into(), dst: d.into() })
                .collect(),
        }
    }

    /// Nested copies inside other documents carry no version of their own.
    fn nested(g: &Graph) -> GraphDoc {
        GraphDoc { format_version: None, ..GraphDoc::from_graph(g) }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(
            self.vertices.iter().cloned(),
            self.edges.iter().map(|e| (e.id.clone(), e.src.clone(), e.dst.clone())),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGroupDoc {
    pub elements: Vec<String>,
    /// `table[i][j]` names the product `elements[i]·elements[j]`.
    pub table: Vec<Vec<String>>,
    pub identity: String,
}

impl FiniteGroupDoc {
    pub fn from_group(g: &FiniteGroup) -> FiniteGroupDoc {
        FiniteGroupDoc {
            elements: g.names().to_vec(),
            table: g.table().iter().map(|row| row.iter().map(|&c| g.name(c).to_string()).collect()).collect(),
            identity: g.name(g.identity()).to_string(),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let index = |name: &str| {
            self.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::NotAGroup(format!("unknown element {name:?}")))
        };
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|c| index(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(self.elements.clone(), table, index(&self.identity)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupDoc {
    Free(Vec<String>),
    Finite(FiniteGroupDoc),
}

impl GroupDoc {
    pub fn from_group(g: &Group) -> GroupDoc {
        match g {
            Group::Free(f) => GroupDoc::Free(f.names().to_vec()),
            Group::Finite(fg) => GroupDoc::Finite(FiniteGroupDoc::from_group(fg)),
        }
    }

    pub fn to_group(&self) -> Result<Group> {
        Ok(match self {
            GroupDoc::Free(names) => Group::Free(FreeGroup::new(names.iter().cloned())?),
            GroupDoc::Finite(doc) => Group::Finite(doc.to_group()?),
        })
    }
}

/// Either a path to a graph file or the graph itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Path(String),
    Inline(GraphDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabellingDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphRef>,
    pub group: GroupDoc,
    /// Edge id to element, in the group's textual syntax.
    pub values: BTreeMap<String, String>,
}

impl LabellingDoc {
    pub fn from_labelling(g: &Graph, c: &Labelling) -> LabellingDoc {
        LabellingDoc {
            format_version: version(),
            graph: None,
            group: GroupDoc::from_group(c.group()),
            values: (0..g.edge_count())
                .map(|e| (g.edge_name(e).to_string(), c.group().format_element(c.value(e))))
                .collect(),
        }
    }

    fn nested(g: &Graph, c: &Labelling) -> LabellingDoc {
        LabellingDoc { format_version: None, ..LabellingDoc::from_labelling(g, c) }
    }

    /// Reads the labelling over `g`. An inline graph, if present, must equal `g`;
    /// a path reference is left to the caller.
    pub fn to_labelling(&self, g: &Graph) -> Result<Labelling> {
        if let Some(GraphRef::Inline(doc)) = &self.graph {
            if &doc.to_graph()? != g {
                return Err(Error::InvalidLabelling("the embedded graph differs from the given graph".into()));
            }
        }
        let group = self.group.to_group()?;
        for key in self.values.keys() {
            g.edge(key).map_err(|_| Error::InvalidLabelling(format!("value for unknown edge {key:?}")))?;
        }
        let values = g
            .edge_names()
            .iter()
            .map(|e| {
                let text = self
                    .values
                    .get(e)
                    .ok_or_else(|| Error::InvalidLabelling(format!("edge {e:?} has no value")))?;
                group.parse_element(text)
            })
            .collect::<Result<Vec<_>>>()?;
        Labelling::new(g, group, values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    pub group: GroupDoc,
    /// Generating words, for subgroups of free groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    /// All elements, for subgroups of finite groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

impl SubgroupDoc {
    pub fn from_subgroup_graph(h: &SubgroupGraph) -> SubgroupDoc {
        let f = h.group();
        SubgroupDoc {
            format_version: version(),
            group: GroupDoc::Free(f.names().to_vec()),
            generators: Some(h.basis().iter().map(|w| f.format_word(w)).collect()),
            elements: None,
        }
    }

    pub fn from_finite(g: &FiniteGroup, h: &FiniteSubgroup) -> SubgroupDoc {
        SubgroupDoc {
            format_version: version(),
            group: GroupDoc::Finite(FiniteGroupDoc::from_group(g)),
            generators: None,
            elements: Some(h.elements().iter().map(|&a| g.name(a).to_string()).collect()),
        }
    }

    fn nested(self) -> SubgroupDoc {
        SubgroupDoc { format_version: None, ..self }
    }

    /// The coset space of the described subgroup.
    pub fn to_cosets(&self) -> Result<CosetSpace> {
        match (self.group.to_group()?, &self.generators, &self.elements) {
            (Group::Free(f), Some(gens), None) => {
                let words = gens.iter().map(|w| f.parse_word(w)).collect::<Result<Vec<_>>>()?;
                CosetSpace::from_subgroup_graph(&SubgroupGraph::from_generators(&f, &words)?)
            }
            (Group::Finite(g), None, Some(elems)) => {
                let subset = elems.iter().map(|e| g.element(e)).collect::<Result<Vec<_>>>()?;
                Ok(CosetSpace::from_finite(&g, &g.subgroup(&subset)?))
            }
            (Group::Free(_), _, _) => Err(Error::Input("a free-group subgroup needs \"generators\" only".into())),
            (Group::Finite(_), _, _) => Err(Error::Input("a finite subgroup needs \"elements\" only".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    pub domain: GraphDoc,
    pub codomain: GraphDoc,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

impl MorphismDoc {
    pub fn from_morphism(m: &GraphMorphism) -> MorphismDoc {
        let (vertex_map, edge_map) = m.named_maps();
        MorphismDoc {
            format_version: version(),
            domain: GraphDoc::nested(m.domain()),
            codomain: GraphDoc::nested(m.codomain()),
            vertex_map,
            edge_map,
        }
    }

    fn nested(m: &GraphMorphism) -> MorphismDoc {
        MorphismDoc { format_version: None, ..MorphismDoc::from_morphism(m) }
    }

    pub fn to_morphism(&self) -> Result<GraphMorphism> {
        GraphMorphism::from_names(self.domain.to_graph()?, self.codomain.to_graph()?, &self.vertex_map, &self.edge_map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u32>,
    pub group: FiniteGroupDoc,
    /// Element to `{vertex: vertex·element}`.
    pub vertex_action: BTreeMap<String, BTreeMap<String, String>>,
    pub edge_action: BTreeMap<String, BTreeMap<String, String>>,
}

impl ActionDoc {
    pub fn from_action(a: &GroupAction) -> ActionDoc {
        let g = a.group();
        let x = a.graph();
        ActionDoc {
            format_version: version(),
            group: FiniteGroupDoc::from_group(g),
            vertex_action: (0..g.order())
                .map(|h| {
                    let map = (0..x.vertex_count())
                        .map(|v| (x.vertex_name(v).to_string(), x.vertex_name(a.vertex_image(h, v)).to_string()))
                        .collect();
                    (g.name(h).to_string(), map)
                })
                .collect(),
            edge_action: (0..g.order())
                .map(|h| {
                    let map = (0..x.edge_count())
                        .map(|e| (x.edge_name(e).to_string(), x.edge_name(a.edge_image(h, e)).to_string()))
                        .collect();
                    (g.name(h).to_string(), map)
                })
                .collect(),
        }
    }

    pub fn to_action(&self, g: &Graph) -> Result<GroupAction> {
        GroupAction::from_names(self.group.to_group()?, g.clone(), &self.vertex_action, &self.edge_action)
    }
}

/// Output-only documents. They embed the input schemas above so that their
/// parts re-parse.
pub mod report {
    use super::*;
    use crate::reconstruct::ReconstructionResult;
    use crate::skewprod::{GrossTucker, Quotient, SkeletonReport, SkewProduct};

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct CosetDoc {
        pub name: String,
        pub representative: String,
    }

    pub fn cosets(q: &CosetSpace) -> Vec<CosetDoc> {
        (0..q.len())
            .map(|i| CosetDoc {
                name: q.name(i).to_string(),
                representative: q.group().format_element(q.representative(i)),
            })
            .collect()
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct SkewDoc {
        pub format_version: u32,
        pub base: GraphDoc,
        pub labelling: LabellingDoc,
        pub cosets: Vec<CosetDoc>,
        pub product: GraphDoc,
        pub projection: MorphismDoc,
        pub fiber_size: usize,
    }

    pub fn skew(sp: &SkewProduct) -> SkewDoc {
        SkewDoc {
            format_version: FORMAT_VERSION,
            base: GraphDoc::nested(sp.base()),
            labelling: LabellingDoc::nested(sp.base(), sp.labelling()),
            cosets: cosets(sp.cosets()),
            product: GraphDoc::nested(sp.product()),
            projection: MorphismDoc::nested(sp.projection().morphism()),
            fiber_size: sp.cosets().len(),
        }
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct QuotientDoc {
        pub format_version: u32,
        pub free: bool,
        pub quotient: GraphDoc,
        pub map: MorphismDoc,
    }

    pub fn quotient(q: &Quotient, free: bool) -> QuotientDoc {
        QuotientDoc {
            format_version: FORMAT_VERSION,
            free,
            quotient: GraphDoc::nested(q.graph()),
            map: MorphismDoc::nested(q.map()),
        }
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct GrossTuckerDoc {
        pub format_version: u32,
        pub quotient: GraphDoc,
        pub labelling: LabellingDoc,
        pub phi: MorphismDoc,
        pub isomorphism: bool,
        pub equivariant: bool,
    }

    pub fn gross_tucker(gt: &GrossTucker) -> GrossTuckerDoc {
        GrossTuckerDoc {
            format_version: FORMAT_VERSION,
            quotient: GraphDoc::nested(gt.quotient.graph()),
            labelling: LabellingDoc::nested(gt.quotient.graph(), &gt.labelling),
            phi: MorphismDoc::nested(&gt.phi),
            isomorphism: gt.is_isomorphism,
            equivariant: gt.is_equivariant,
        }
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct ChecksDoc {
        pub phi_isomorphism: bool,
        pub projection_commutes: bool,
        pub theta_bijective: bool,
        pub sheets_equal_index: bool,
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct ReconstructionDoc {
        pub format_version: u32,
        pub base: String,
        pub base_image: String,
        pub tree_edges: Vec<String>,
        pub labelling: LabellingDoc,
        pub subgroup: SubgroupDoc,
        pub sheets: usize,
        pub index: usize,
        pub subgroup_rank: usize,
        pub cosets: Vec<CosetDoc>,
        pub product: GraphDoc,
        pub phi: MorphismDoc,
        pub tau: BTreeMap<String, String>,
        pub theta: BTreeMap<String, String>,
        pub checks: ChecksDoc,
    }

    pub fn reconstruction(r: &ReconstructionResult) -> ReconstructionDoc {
        let f = r.covering.domain();
        let e = r.covering.codomain();
        ReconstructionDoc {
            format_version: FORMAT_VERSION,
            base: f.vertex_name(r.base).to_string(),
            base_image: e.vertex_name(r.covering.morphism().vertex(r.base)).to_string(),
            tree_edges: r.tree().edges().iter().map(|&x| e.edge_name(x).to_string()).collect(),
            labelling: LabellingDoc::nested(e, &r.labelling),
            subgroup: SubgroupDoc::from_subgroup_graph(&r.subgroup).nested(),
            sheets: r.sheets,
            index: r.index,
            subgroup_rank: r.subgroup.rank(),
            cosets: cosets(&r.cosets),
            product: GraphDoc::nested(r.product.product()),
            phi: MorphismDoc::nested(&r.phi),
            tau: (0..f.vertex_count())
                .map(|z| (f.vertex_name(z).to_string(), f.vertex_name(r.tau[z]).to_string()))
                .collect(),
            theta: r
                .theta
                .iter()
                .map(|&(w, q)| (f.vertex_name(w).to_string(), r.cosets.name(q).to_string()))
                .collect(),
            // reconstruct refuses to return unless both of these hold
            checks: ChecksDoc {
                phi_isomorphism: true,
                projection_commutes: true,
                theta_bijective: r.theta_bijective,
                sheets_equal_index: r.sheets == r.index,
            },
        }
    }

    #[derive(Debug, Clone, Serialize, Deserialize)]
    pub struct SkeletonDoc {
        pub format_version: u32,
        pub passed: bool,
        pub max_len: usize,
        pub vertices_checked: usize,
        pub paths_checked: usize,
        pub lifts_checked: usize,
        pub violations: Vec<String>,
    }

    pub fn skeleton(r: &SkeletonReport, max_len: usize) -> SkeletonDoc {
        SkeletonDoc {
            format_version: FORMAT_VERSION,
            passed: r.passed(),
            max_len,
            vertices_checked: r.vertices_checked,
            paths_checked: r.paths_checked,
            lifts_checked: r.lifts_checked,
            violations: r.violations.clone(),
        }
    }
}
