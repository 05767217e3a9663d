//! Chromatic homology over truncated polynomial algebras, computed from spanning trees.

pub mod checks;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod homology;
pub mod oracle;
pub mod poly;
pub mod snf;
pub mod st;
pub mod trees;

pub use error::{Error, GraphError, Result};
pub use graph::{EdgeSubset, OrderedGraph};
