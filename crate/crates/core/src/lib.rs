pub mod assignment;
pub mod corpus;
pub mod covers;
pub mod error;
pub mod exec;
pub mod field;
pub mod flow;
pub mod graph;
pub mod rank;
pub mod report;
pub mod sparsity;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeSubset, Graph, VertexSet};
