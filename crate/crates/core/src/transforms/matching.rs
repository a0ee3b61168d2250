use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Multigraph, Vertex};

const NONE: usize = usize::MAX;

/// A maximum matching leaves `exposed` unmatched, so no perfect matching exists.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum NoPerfectMatching {
    #[error("odd vertex count {0}")]
    OddOrder(usize),
    #[error("maximum matching has {matched} edges; vertex {exposed} stays exposed")]
    Deficient { matched: usize, exposed: Vertex },
}

struct Blossom<'a> {
    adj: &'a [Vec<Vertex>],
    n: usize,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.n];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    // Edmonds' search for an augmenting path from an exposed root.
    fn find_path(&mut self, root: usize) -> usize {
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..self.n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                q.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    q.push_back(m);
                }
            }
        }
        NONE
    }
}

/// Maximum matching of the underlying simple graph; `mate[v]` is `None` for
/// exposed vertices.
pub fn maximum_matching(g: &Multigraph) -> Vec<Option<Vertex>> {
    let n = g.n();
    let adj: Vec<Vec<Vertex>> = (0..n).map(|v| g.neighbours(v).collect()).collect();
    let mut st = Blossom {
        adj: &adj,
        n,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
    };
    // greedy start, then augment from each exposed vertex
    for (v, nbrs) in adj.iter().enumerate() {
        if st.mate[v] == NONE {
            if let Some(&w) = nbrs.iter().find(|&&w| st.mate[w] == NONE) {
                st.mate[v] = w;
                st.mate[w] = v;
            }
        }
    }
    for root in 0..n {
        if st.mate[root] != NONE {
            continue;
        }
        let mut v = st.find_path(root);
        while v != NONE {
            let pv = st.parent[v];
            let ppv = st.mate[pv];
            st.mate[v] = pv;
            st.mate[pv] = v;
            v = ppv;
        }
    }
    st.mate
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// `n/2` vertex-disjoint edges `(u, v)` with `u < v` covering every vertex.
pub fn perfect_matching(g: &Multigraph) -> Result<Vec<(Vertex, Vertex)>, NoPerfectMatching> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(NoPerfectMatching::OddOrder(n));
    }
    let mate = maximum_matching(g);
    if let Some(exposed) = mate.iter().position(Option::is_none) {
        return Err(NoPerfectMatching::Deficient {
            matched: mate.iter().filter(|m| m.is_some()).count() / 2,
            exposed,
        });
    }
    Ok(mate
        .iter()
        .enumerate()
        .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
        .collect())
}
