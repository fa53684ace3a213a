//! Exact combinatorics for minimum-degree removal thresholds.
//!
//! The crate bundles graph constructions, exact labeled-copy counting,
//! edge-disjoint packings, chromatic decompositions and cleanup pipelines, and
//! a vertex-sampling homomorphism tester, all at desk scale.

pub mod bitset;
pub mod budget;
pub mod constructions;
pub mod corpus;
pub mod counting;
pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
pub mod homomorphism;
pub mod invariants;
pub mod io;
pub mod packing;
pub mod partition;
pub mod rng;
pub mod tester;

pub use bitset::BitSet;
pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{build_graph, Edge, Graph, GraphBuilder};
pub use partition::VertexPartition;
