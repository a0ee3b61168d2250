use crate::error::{Error, Result};
use crate::graph::{DigraphBuilder, MultiDigraph, Multigraph, Vertex};

fn check_even(g: &Multigraph) -> Result<()> {
    for v in 0..g.n() {
        let d = g.degree(v);
        if d % 2 == 1 {
            return Err(Error::OddDegree { vertex: v, degree: d });
        }
    }
    Ok(())
}

/// Closed Euler circuits of every component with edges, as sequences of
/// traversed `(edge id, from, to)`. All degrees must be even.
// edge id, tail, head
type Arrival = (usize, Vertex, Vertex);

fn euler_circuits(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<Arrival>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push(id);
        adj[v].push(id);
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n];
    let mut circuits = Vec::new();
    for start in 0..n {
        let mut stack: Vec<(Vertex, Option<Arrival>)> = vec![(start, None)];
        let mut circuit = Vec::new();
        while let Some(&(v, arrived)) = stack.last() {
            while next[v] < adj[v].len() && used[adj[v][next[v]]] {
                next[v] += 1;
            }
            if let Some(&id) = adj[v].get(next[v]) {
                used[id] = true;
                let (a, b) = edges[id];
                let w = if a == v { b } else { a };
                stack.push((w, Some((id, v, w))));
            } else {
                stack.pop();
                if let Some(t) = arrived {
                    circuit.push(t);
                }
            }
        }
        if !circuit.is_empty() {
            circuit.reverse();
            circuits.push(circuit);
        }
    }
    circuits
}

fn instance_list(g: &Multigraph) -> Vec<(Vertex, Vertex)> {
    g.edge_instances().map(|e| (e.tail, e.head)).collect()
}

/// Orients every edge copy along an Euler circuit of its component, so that
/// `d⁺(v) = d⁻(v) = d(v)/2` at every vertex.
pub fn eulerian_orient(g: &Multigraph) -> Result<MultiDigraph> {
    check_even(g)?;
    let edges = instance_list(g);
    let mut b = DigraphBuilder::new(g.n());
    for circuit in euler_circuits(g.n(), &edges) {
        for (_, u, v) in circuit {
            b.add_edge(u, v)?;
        }
    }
    Ok(b.build())
}

/// Orientation with `|d⁺(v) − d⁻(v)| ≤ 1` everywhere, exact balance at
/// even-degree vertices. Odd vertices are paired through an auxiliary vertex
/// before taking Euler circuits.
pub fn balanced_orient(g: &Multigraph) -> Result<MultiDigraph> {
    let n = g.n();
    let mut edges = instance_list(g);
    let real = edges.len();
    let hub = n;
    for v in 0..n {
        if g.degree(v) % 2 == 1 {
            edges.push((v, hub));
        }
    }
    let mut b = DigraphBuilder::new(n);
    for circuit in euler_circuits(n + 1, &edges) {
        for (id, u, v) in circuit {
            if id < real {
                b.add_edge(u, v)?;
            }
        }
    }
    Ok(b.build())
}

/// Splits the edge multiset of an even multigraph into cycles. Cycles are
/// vertex sequences without the closing repeat; a 2-cycle `[u, v]` stands for
/// two parallel copies of `{u, v}`.
pub fn cycle_decompose_even(g: &Multigraph) -> Result<Vec<Vec<Vertex>>> {
    check_even(g)?;
    let n = g.n();
    let edges = instance_list(g);
    let mut cycles = Vec::new();
    let mut on_stack = vec![false; n];
    for circuit in euler_circuits(n, &edges) {
        let mut stack: Vec<Vertex> = vec![circuit[0].1];
        on_stack[circuit[0].1] = true;
        for &(_, _, w) in &circuit {
            if on_stack[w] {
                let mut cycle = Vec::new();
                while let Some(&top) = stack.last() {
                    if top == w {
                        break;
                    }
                    on_stack[top] = false;
                    cycle.push(top);
                    stack.pop();
                }
                cycle.push(w);
                cycle.reverse();
                cycles.push(cycle);
            } else {
                on_stack[w] = true;
                stack.push(w);
            }
        }
        for v in stack {
            on_stack[v] = false;
        }
    }
    Ok(cycles)
}

/// Turns each cycle into a consistently directed cycle.
pub fn orient_cycles(n: usize, cycles: &[Vec<Vertex>]) -> Result<MultiDigraph> {
    let mut b = DigraphBuilder::new(n);
    for c in cycles {
        if c.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "cycle {c:?} has fewer than two vertices"
            )));
        }
        for i in 0..c.len() {
            b.add_edge(c[i], c[(i + 1) % c.len()])?;
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn balanced(d: &MultiDigraph, g: &Multigraph) -> bool {
        (0..g.n()).all(|v| 2 * d.out_degree(v) == g.degree(v) && 2 * d.in_degree(v) == g.degree(v))
    }

    #[test]
    fn orient_four_cycle() {
        let g = Multigraph::cycle(4);
        let d = eulerian_orient(&g).unwrap();
        assert_eq!(d.is_regular(), Some(1));
        assert_eq!(d.forget_orientation(), g);
    }

    #[test]
    fn orient_double_edge() {
        let g = Multigraph::from_multiplicities(2, [(0, 1, 2)]).unwrap();
        let d = eulerian_orient(&g).unwrap();
        assert_eq!((d.mult(0, 1), d.mult(1, 0)), (1, 1));
    }

    #[test]
    fn orient_k5() {
        let g = Multigraph::complete(5, 1);
        let d = eulerian_orient(&g).unwrap();
        assert!(balanced(&d, &g));
        assert_eq!(d.is_regular(), Some(2));
        assert_eq!(d.forget_orientation(), g);
    }

    #[test]
    fn orient_rejects_odd() {
        let g = Multigraph::complete(4, 1);
        assert_eq!(
            eulerian_orient(&g),
            Err(Error::OddDegree { vertex: 0, degree: 3 })
        );
        assert!(cycle_decompose_even(&g).is_err());
    }

    #[test]
    fn balanced_orient_odd_graph() {
        let g = Multigraph::complete(4, 1);
        let d = balanced_orient(&g).unwrap();
        assert_eq!(d.forget_orientation(), g);
        for v in 0..4 {
            assert_eq!(d.out_degree(v).abs_diff(d.in_degree(v)), 1);
        }
    }

    #[test]
    fn disconnected_components() {
        let g = Multigraph::from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)]).unwrap();
        let d = eulerian_orient(&g).unwrap();
        assert!(balanced(&d, &g));
        assert_eq!(cycle_decompose_even(&g).unwrap().len(), 2);
    }

    #[test]
    fn cycle_decomposition_cases() {
        let two = Multigraph::from_multiplicities(2, [(0, 1, 2)]).unwrap();
        assert_eq!(cycle_decompose_even(&two).unwrap(), vec![vec![0, 1]]);

        let c4 = Multigraph::cycle(4);
        let cycles = cycle_decompose_even(&c4).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(orient_cycles(4, &cycles).unwrap().forget_orientation(), c4);

        let g = Multigraph::complete(5, 2);
        let cycles = cycle_decompose_even(&g).unwrap();
        let total: usize = cycles.iter().map(|c| c.len()).sum();
        assert_eq!(total, 20);
        let d = orient_cycles(5, &cycles).unwrap();
        assert_eq!(d.forget_orientation(), g);
        assert_eq!(d.is_regular(), Some(4));
    }

    #[test]
    fn orient_two_cycle() {
        let d = orient_cycles(3, &[vec![0, 2]]).unwrap();
        assert_eq!((d.mult(0, 2), d.mult(2, 0)), (1, 1));
    }

    fn arb_even_multigraph() -> impl Strategy<Value = Multigraph> {
        // unions of random closed walks are even
        (3usize..9, proptest::collection::vec(proptest::collection::vec(0usize..100, 3..8), 1..5))
            .prop_map(|(n, walks)| {
                let mut edges = Vec::new();
                for w in walks {
                    let mut vs: Vec<usize> = w.iter().map(|x| x % n).collect();
                    vs.dedup();
                    while vs.len() > 1 && vs.first() == vs.last() {
                        vs.pop();
                    }
                    if vs.len() < 2 {
                        continue;
                    }
                    for i in 0..vs.len() {
                        edges.push((vs[i], vs[(i + 1) % vs.len()]));
                    }
                }
                Multigraph::from_edges(n, edges).unwrap()
            })
    }

    proptest! {
        #[test]
        fn euler_orientation_is_exactly_balanced(g in arb_even_multigraph()) {
            let d = eulerian_orient(&g).unwrap();
            prop_assert!(balanced(&d, &g));
            prop_assert_eq!(d.forget_orientation(), g);
        }

        #[test]
        fn cycles_preserve_edges_and_balance(g in arb_even_multigraph()) {
            let cycles = cycle_decompose_even(&g).unwrap();
            for c in &cycles {
                prop_assert!(c.len() >= 2);
                let mut s = c.clone();
                s.sort_unstable();
                s.dedup();
                prop_assert_eq!(s.len(), c.len());
            }
            let d = orient_cycles(g.n(), &cycles).unwrap();
            prop_assert_eq!(d.forget_orientation(), g);
            for v in 0..d.n() {
                prop_assert_eq!(d.out_degree(v), d.in_degree(v));
            }
        }
    }
}
