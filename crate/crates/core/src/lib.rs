//! Coverings of finite directed multigraphs.
//!
//! The crate computes fundamental groups of graphs as free groups on the
//! edges outside a spanning tree, folds subgroups of free groups into
//! Stallings graphs, builds relative skew products `E ×_c (G/H)` from
//! voltage labellings, and reconstructs any connected covering `F → E` as
//! such a skew product with an explicit, machine-checked isomorphism.
//! Quotients by free group actions and the Gross–Tucker decomposition are
//! provided for finite groups.

pub mod covering;
pub mod error;
pub mod fixtures;
pub mod freegroup;
pub mod fundamental;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod random;
pub mod reconstruct;
pub mod selftest;
pub mod skewprod;

pub use error::{Error, Result};
