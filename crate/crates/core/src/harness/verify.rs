//! Independent checks for claimed decompositions. Nothing here trusts the
//! pipeline's bookkeeping: usage is recounted into a fresh matrix and
//! compared with the host.

use serde::{Deserialize, Serialize};

use crate::graph::{MultiDigraph, Multigraph, Vertex};

/// The first clause a candidate breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Violation {
    /// A part does not have exactly `n` vertices.
    NotSpanning { part: usize, len: usize, n: usize },
    VertexOutOfRange { part: usize, vertex: Vertex },
    RepeatedVertex { part: usize, vertex: Vertex },
    /// A consecutive pair is not an edge of the host at all.
    MissingEdge { part: usize, tail: Vertex, head: Vertex },
    /// The parts use a pair more often than the host provides it.
    Overused { tail: Vertex, head: Vertex, used: u32, available: u32 },
    /// Some copies of a host pair are not covered by any part.
    Underused { tail: Vertex, head: Vertex, used: u32, available: u32 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotSpanning { part, len, n } => {
                write!(f, "part {part} has {len} vertices, expected {n}")
            }
            Violation::VertexOutOfRange { part, vertex } => {
                write!(f, "part {part} names vertex {vertex}, which is out of range")
            }
            Violation::RepeatedVertex { part, vertex } => {
                write!(f, "part {part} visits vertex {vertex} twice")
            }
            Violation::MissingEdge { part, tail, head } => {
                write!(f, "part {part} uses ({tail}, {head}), which is not an edge")
            }
            Violation::Overused { tail, head, used, available } => {
                write!(f, "pair ({tail}, {head}) used {used} times, host has {available}")
            }
            Violation::Underused { tail, head, used, available } => {
                write!(f, "pair ({tail}, {head}) covered {used} times, host has {available}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub accepted: bool,
    pub parts: usize,
    pub violation: Option<Violation>,
}

impl VerifyReport {
    fn from(parts: usize, r: Result<(), Violation>) -> Self {
        VerifyReport {
            accepted: r.is_ok(),
            parts,
            violation: r.err(),
        }
    }
}

fn check_sequence(part: usize, seq: &[Vertex], n: usize, len: usize) -> Result<(), Violation> {
    if seq.len() != len {
        return Err(Violation::NotSpanning { part, len: seq.len(), n: len });
    }
    let mut seen = vec![false; n];
    for &v in seq {
        if v >= n {
            return Err(Violation::VertexOutOfRange { part, vertex: v });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Violation::RepeatedVertex { part, vertex: v });
        }
    }
    Ok(())
}

fn compare(n: usize, used: &[u32], host: impl Fn(Vertex, Vertex) -> u32, symmetric: bool) -> Result<(), Violation> {
    for u in 0..n {
        for v in 0..n {
            if u == v || (symmetric && v < u) {
                continue;
            }
            let (k, m) = (used[u * n + v], host(u, v));
            if k > m {
                return Err(Violation::Overused { tail: u, head: v, used: k, available: m });
            }
            if k < m {
                return Err(Violation::Underused { tail: u, head: v, used: k, available: m });
            }
        }
    }
    Ok(())
}

fn directed(host: &MultiDigraph, cycles: &[Vec<Vertex>]) -> Result<(), Violation> {
    let n = host.n();
    let mut used = vec![0u32; n * n];
    for (i, c) in cycles.iter().enumerate() {
        check_sequence(i, c, n, n)?;
        for j in 0..c.len() {
            let (u, v) = (c[j], c[(j + 1) % c.len()]);
            if u == v || !host.has_edge(u, v) {
                return Err(Violation::MissingEdge { part: i, tail: u, head: v });
            }
            used[u * n + v] += 1;
        }
    }
    compare(n, &used, |u, v| host.mult(u, v), false)
}

fn undirected(host: &Multigraph, cycles: &[Vec<Vertex>]) -> Result<(), Violation> {
    let n = host.n();
    let mut used = vec![0u32; n * n];
    for (i, c) in cycles.iter().enumerate() {
        check_sequence(i, c, n, n)?;
        for j in 0..c.len() {
            let (u, v) = (c[j], c[(j + 1) % c.len()]);
            if u == v || !host.has_edge(u, v) {
                return Err(Violation::MissingEdge { part: i, tail: u, head: v });
            }
            used[u.min(v) * n + u.max(v)] += 1;
        }
    }
    compare(n, &used, |u, v| host.mult(u, v), true)
}

/// Accepts iff every cycle is a spanning sequence of distinct vertices whose
/// consecutive pairs (cyclically) are host edges, and the cycles use every
/// edge copy of the host exactly once.
pub fn verify_decomposition(host: &MultiDigraph, cycles: &[Vec<Vertex>]) -> VerifyReport {
    VerifyReport::from(cycles.len(), directed(host, cycles))
}

/// Undirected analogue of [`verify_decomposition`]. On two vertices a cycle
/// `[u, v]` uses the pair `{u, v}` twice.
pub fn verify_decomposition_undirected(host: &Multigraph, cycles: &[Vec<Vertex>]) -> VerifyReport {
    VerifyReport::from(cycles.len(), undirected(host, cycles))
}

fn factorisation(g: &Multigraph, classes: &[Vec<(Vertex, Vertex)>]) -> Result<(), Violation> {
    let n = g.n();
    let mut used = vec![0u32; n * n];
    for (i, class) in classes.iter().enumerate() {
        if 2 * class.len() != n {
            return Err(Violation::NotSpanning { part: i, len: 2 * class.len(), n });
        }
        let flat: Vec<Vertex> = class.iter().flat_map(|&(u, v)| [u, v]).collect();
        check_sequence(i, &flat, n, n)?;
        for &(u, v) in class {
            if !g.has_edge(u, v) {
                return Err(Violation::MissingEdge { part: i, tail: u, head: v });
            }
            used[u.min(v) * n + u.max(v)] += 1;
        }
    }
    compare(n, &used, |u, v| g.mult(u, v), true)
}

/// Accepts iff every class is a perfect matching of `g` and the classes use
/// every edge copy exactly once. `NotSpanning` reports twice the class size.
pub fn verify_one_factorisation(g: &Multigraph, classes: &[Vec<(Vertex, Vertex)>]) -> VerifyReport {
    VerifyReport::from(classes.len(), factorisation(g, classes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_accepts_itself() {
        let d = MultiDigraph::cycle(6);
        let r = verify_decomposition(&d, &[vec![0, 1, 2, 3, 4, 5]]);
        assert!(r.accepted);
        // the same vertex order read backwards is not a cycle of d
        let r = verify_decomposition(&d, &[vec![5, 4, 3, 2, 1, 0]]);
        assert!(matches!(r.violation, Some(Violation::MissingEdge { .. })));
    }

    #[test]
    fn missing_cycle_is_underuse() {
        let d = MultiDigraph::complete(3, 1);
        assert!(verify_decomposition(&d, &[vec![0, 1, 2], vec![0, 2, 1]]).accepted);
        let r = verify_decomposition(&d, &[vec![0, 1, 2]]);
        assert_eq!(
            r.violation,
            Some(Violation::Underused { tail: 0, head: 2, used: 0, available: 1 })
        );
    }

    #[test]
    fn repeated_vertex_and_double_use() {
        let d = MultiDigraph::complete(4, 1);
        let r = verify_decomposition(&d, &[vec![0, 1, 0, 2]]);
        assert_eq!(r.violation, Some(Violation::RepeatedVertex { part: 0, vertex: 0 }));
        let r = verify_decomposition(&d, &[vec![0, 1, 2]]);
        assert!(matches!(r.violation, Some(Violation::NotSpanning { len: 3, .. })));
        let r = verify_decomposition(&d, &[vec![0, 1, 2, 3], vec![0, 1, 2, 3]]);
        assert!(matches!(r.violation, Some(Violation::Overused { .. })));
    }

    #[test]
    fn undirected_cases() {
        let two = Multigraph::from_multiplicities(2, [(0, 1, 2)]).unwrap();
        assert!(verify_decomposition_undirected(&two, &[vec![0, 1]]).accepted);
        let k5 = Multigraph::complete(5, 1);
        let ok = [vec![0, 1, 2, 3, 4], vec![0, 2, 4, 1, 3]];
        assert!(verify_decomposition_undirected(&k5, &ok).accepted);
        let bad = [vec![0, 1, 2, 3, 4], vec![4, 3, 2, 1, 0]];
        assert!(matches!(
            verify_decomposition_undirected(&k5, &bad).violation,
            Some(Violation::Overused { .. })
        ));
    }

    #[test]
    fn one_factorisations() {
        let k4 = Multigraph::complete(4, 1);
        let good = vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]];
        assert!(verify_one_factorisation(&k4, &good).accepted);
        let dup = vec![vec![(0, 1), (2, 3)], vec![(0, 1), (2, 3)], vec![(0, 3), (1, 2)]];
        assert!(matches!(
            verify_one_factorisation(&k4, &dup).violation,
            Some(Violation::Overused { .. })
        ));
        let short = vec![vec![(0, 1)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]];
        assert!(matches!(
            verify_one_factorisation(&k4, &short).violation,
            Some(Violation::NotSpanning { .. })
        ));
    }
}
