//! Deterministic graph surgeries used by the reductions: Eulerian
//! orientation, cycle decomposition of even multigraphs, k-factors, perfect
//! matchings and matching decompositions via proper edge colourings.

mod coloring;
mod factor;
mod matching;
mod orient;

pub use coloring::{matching_decompose, vizing_color, EdgeColoring, MatchingDecomposition};
pub use factor::{extract_factor, FactorInfeasible};
pub use matching::{maximum_matching, perfect_matching, NoPerfectMatching};
pub use orient::{balanced_orient, cycle_decompose_even, eulerian_orient, orient_cycles};
