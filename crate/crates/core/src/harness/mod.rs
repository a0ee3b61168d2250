//! Generators, the independent verifier, statistics and file formats.

pub mod generate;
pub mod io;
pub mod stats;
pub mod verify;

pub use generate::{generate, Family, GeneratorSpec};
pub use io::AnyGraph;
pub use stats::{stats, GraphStats};
pub use verify::{
    verify_decomposition, verify_decomposition_undirected, verify_one_factorisation, VerifyReport,
    Violation,
};
