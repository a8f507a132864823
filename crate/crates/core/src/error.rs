use std::fmt;

use thiserror::Error;

/// A single problem found while validating a raw graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertex(String),
    DuplicateEdge(String),
    DanglingEndpoint { edge: String, vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex id {v:?}"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge id {e:?}"),
            Violation::DanglingEndpoint { edge, vertex } => {
                write!(f, "edge {edge:?} has endpoint {vertex:?} which is not a vertex")
            }
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {}", join(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("unknown edge {0:?}")]
    UnknownEdge(String),

    #[error("walk is not composable: {0}")]
    NotComposable(String),

    #[error("walk endpoints do not match: range {range:?} but next source {source_vertex:?}")]
    EndpointMismatch { range: String, source_vertex: String },

    #[error("graph is not connected")]
    NotConnected,

    #[error("malformed walk: {0}")]
    MalformedWalk(String),

    #[error("invalid generator name {0:?}")]
    InvalidGeneratorName(String),

    #[error("generator mismatch: {0}")]
    GeneratorMismatch(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("subgroup has infinite index")]
    InfiniteIndex,

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid labelling: {0}")]
    InvalidLabelling(String),

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("not a graph morphism: {}", join(.0))]
    NotAMorphism(Vec<String>),

    #[error("not a covering: {0}")]
    NotACovering(String),

    #[error("lift anchor mismatch: {0}")]
    AnchorMismatch(String),

    #[error("base point mismatch: {0}")]
    BasePointMismatch(String),

    #[error("vertex {0:?} is not in the fiber of the base vertex")]
    NotInFiber(String),

    #[error("not a group action: {0}")]
    NotAnAction(String),

    #[error("group action is not free: {0}")]
    NotFree(String),

    #[error("isomorphism check failed: {0}")]
    IsomorphismFailure(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
