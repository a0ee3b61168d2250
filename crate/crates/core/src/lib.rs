//! Hamilton decompositions of dense regular multidigraphs and multigraphs.
//!
//! The library certifies robust expansion, runs the randomized
//! decomposition pipeline, and falls back to exact search on small inputs.
//! Every claimed decomposition is verified before it is returned.

mod bitset;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod hamilton;
pub mod pipeline;
pub mod harness;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{DigraphBuilder, EdgeInstance, GraphBuilder, MultiDigraph, Multigraph, Vertex};
