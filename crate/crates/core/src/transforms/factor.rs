use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DigraphBuilder, MultiDigraph, Vertex};

/// No k-factor exists. The cut certifies it: the tails in `tails` must send
/// `k·|tails|` units, but can reach at most `k·|heads| + crossing` of them,
/// where `crossing` counts edges from `tails` to heads outside `heads`.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("no {k}-factor: max flow {achieved} < {required}")]
pub struct FactorInfeasible {
    pub k: usize,
    pub achieved: usize,
    pub required: usize,
    pub tails: Vec<Vertex>,
    pub heads: Vec<Vertex>,
    pub crossing: usize,
}

struct Dinic {
    graph: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<usize>,
    level: Vec<i64>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    // returns the id of the forward arc; its reverse is id ^ 1
    fn add(&mut self, u: usize, v: usize, c: usize) -> usize {
        let id = self.to.len();
        self.graph[u].push(id);
        self.to.push(v);
        self.cap.push(c);
        self.graph[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        id
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &id in &self.graph[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, f: usize) -> usize {
        if u == t {
            return f;
        }
        while self.iter[u] < self.graph[u].len() {
            let id = self.graph[u][self.iter[u]];
            let v = self.to[id];
            if self.cap[id] > 0 && self.level[u] < self.level[v] {
                let d = self.dfs(v, t, f.min(self.cap[id]));
                if d > 0 {
                    self.cap[id] -= d;
                    self.cap[id ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, usize::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }
}

/// A spanning `k`-regular sub-multidigraph of `d`, via a degree-constrained
/// flow network (source → tail copies → head copies → sink). Finds a factor
/// whenever one exists.
pub fn extract_factor(d: &MultiDigraph, k: usize) -> Result<MultiDigraph, FactorInfeasible> {
    let n = d.n();
    let source = 2 * n;
    let sink = 2 * n + 1;
    let mut net = Dinic::new(2 * n + 2);
    for v in 0..n {
        net.add(source, v, k);
        net.add(n + v, sink, k);
    }
    let arcs: Vec<(usize, Vertex, Vertex)> = d
        .pairs()
        .map(|(u, v, m)| (net.add(u, n + v, m as usize), u, v))
        .collect();
    let flow = net.max_flow(source, sink);
    if flow == n * k {
        let mut b = DigraphBuilder::new(n);
        for (id, u, v) in arcs {
            let used = net.cap[id ^ 1];
            if used > 0 {
                b.add_copies(u, v, used as u32).expect("pairs from d are valid");
            }
        }
        return Ok(b.build());
    }
    // residual reachability from the source gives a minimum cut
    net.bfs(source);
    let reached = |x: usize| net.level[x] >= 0;
    let tails: Vec<Vertex> = (0..n).filter(|&v| reached(v)).collect();
    let heads: Vec<Vertex> = (0..n).filter(|&v| reached(n + v)).collect();
    let crossing = tails
        .iter()
        .flat_map(|&u| {
            d.out_neighbours(u)
                .filter(|&v| !reached(n + v))
                .map(move |v| d.mult(u, v) as usize)
        })
        .sum();
    Err(FactorInfeasible {
        k,
        achieved: flow,
        required: n * k,
        tails,
        heads,
        crossing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn derangement(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        loop {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            if p.iter().enumerate().all(|(i, &j)| i != j) {
                return p;
            }
        }
    }

    #[test]
    fn one_factor_of_k4_is_a_derangement() {
        let d = MultiDigraph::complete(4, 1);
        let f = extract_factor(&d, 1).unwrap();
        assert_eq!(f.is_regular(), Some(1));
        assert!(f.is_subgraph_of(&d));
    }

    #[test]
    fn one_factor_of_cycle_is_itself() {
        let d = MultiDigraph::cycle(9);
        assert_eq!(extract_factor(&d, 1).unwrap(), d);
    }

    #[test]
    fn three_factor_of_random_six_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // six edge-disjoint derangements of 12 points
        let mut edges: Vec<(usize, usize)> = Vec::new();
        while edges.len() < 72 {
            let p = derangement(12, &mut rng);
            if p.iter().enumerate().all(|(i, &j)| !edges.contains(&(i, j))) {
                edges.extend(p.into_iter().enumerate());
            }
        }
        let d = MultiDigraph::from_edges(12, edges).unwrap();
        assert_eq!(d.is_regular(), Some(6));
        let f = extract_factor(&d, 3).unwrap();
        assert_eq!(f.is_regular(), Some(3));
        assert!(f.is_subgraph_of(&d));
    }

    #[test]
    fn infeasible_factor_reports_cut() {
        // vertices 0 and 1 both only point at 2
        let d = MultiDigraph::from_edges(3, [(0, 2), (1, 2), (2, 0)]).unwrap();
        let err = extract_factor(&d, 1).unwrap_err();
        assert_eq!(err.required, 3);
        assert!(err.achieved < 3);
        // the cut is tight: capacity equals the achieved flow
        let cut = (3 - err.tails.len()) + err.heads.len() + err.crossing;
        assert_eq!(cut, err.achieved);
        assert!(err.tails.len() > err.heads.len() + err.crossing);
    }

    #[test]
    fn factor_uses_multiplicities() {
        let d = MultiDigraph::complete(3, 2);
        let f = extract_factor(&d, 3).unwrap();
        assert_eq!(f.is_regular(), Some(3));
        assert!(f.is_subgraph_of(&d));
    }
}
