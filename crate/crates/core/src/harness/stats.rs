use serde::{Deserialize, Serialize};

use super::io::AnyGraph;

/// Pure recount of basic parameters. `min_degree` / `max_degree` are the
/// semi-degrees δ⁰ and Δ⁰ for digraphs. `density` is the fraction of
/// possible (ordered, resp. unordered) pairs that carry an edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub directed: bool,
    pub n: usize,
    pub edges: usize,
    pub multiplicity: u32,
    pub regular: Option<usize>,
    pub min_degree: usize,
    pub max_degree: usize,
    pub distinct_pairs: usize,
    pub density: f64,
}

pub fn stats(g: &AnyGraph) -> GraphStats {
    let n = g.n();
    let (directed, edges, multiplicity, regular, min_degree, max_degree, distinct_pairs) = match g {
        AnyGraph::Directed(d) => (
            true,
            d.edge_count(),
            d.multiplicity(),
            d.is_regular(),
            d.min_semidegree(),
            d.max_semidegree(),
            d.pairs().count(),
        ),
        AnyGraph::Undirected(g) => (
            false,
            g.edge_count(),
            g.multiplicity(),
            g.is_regular(),
            g.min_degree(),
            g.max_degree(),
            g.pairs().count(),
        ),
    };
    let slots = if directed { n * n.saturating_sub(1) } else { n * n.saturating_sub(1) / 2 };
    GraphStats {
        directed,
        n,
        edges,
        multiplicity,
        regular,
        min_degree,
        max_degree,
        distinct_pairs,
        density: if slots == 0 { 0.0 } else { distinct_pairs as f64 / slots as f64 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{MultiDigraph, Multigraph};

    #[test]
    fn k5() {
        let s = stats(&Multigraph::complete(5, 1).into());
        assert_eq!((s.n, s.edges, s.multiplicity, s.regular), (5, 10, 1, Some(4)));
        assert_eq!(s.density, 1.0);
    }

    #[test]
    fn empty() {
        let s = stats(&MultiDigraph::empty(0).into());
        assert_eq!((s.n, s.edges, s.multiplicity, s.min_degree, s.max_degree), (0, 0, 0, 0, 0));
        assert_eq!(s.density, 0.0);
        let s = stats(&MultiDigraph::empty(4).into());
        assert_eq!((s.edges, s.regular), (0, Some(0)));
    }
}
