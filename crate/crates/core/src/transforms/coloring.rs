use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MultiDigraph, Multigraph, Vertex};

const UNCOLORED: usize = usize::MAX;

/// A proper edge colouring: `colors[i]` is the colour of `edges[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub edges: Vec<(Vertex, Vertex)>,
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl EdgeColoring {
    pub fn classes(&self) -> Vec<Vec<(Vertex, Vertex)>> {
        let mut out = vec![Vec::new(); self.num_colors];
        for (&e, &c) in self.edges.iter().zip(&self.colors) {
            out[c].push(e);
        }
        out.retain(|c| !c.is_empty());
        out
    }
}

// Misra–Gries state over a dense colour matrix.
struct MisraGries {
    n: usize,
    palette: usize,
    color: Vec<usize>,
    // at[v * palette + c] is the neighbour joined to v by colour c
    at: Vec<usize>,
}

impl MisraGries {
    fn get(&self, u: Vertex, v: Vertex) -> usize {
        self.color[u * self.n + v]
    }

    fn set(&mut self, u: Vertex, v: Vertex, c: usize) {
        let old = self.get(u, v);
        if old != UNCOLORED {
            self.at[u * self.palette + old] = UNCOLORED;
            self.at[v * self.palette + old] = UNCOLORED;
        }
        self.color[u * self.n + v] = c;
        self.color[v * self.n + u] = c;
        if c != UNCOLORED {
            debug_assert_eq!(self.at[u * self.palette + c], UNCOLORED);
            debug_assert_eq!(self.at[v * self.palette + c], UNCOLORED);
            self.at[u * self.palette + c] = v;
            self.at[v * self.palette + c] = u;
        }
    }

    fn is_free(&self, v: Vertex, c: usize) -> bool {
        self.at[v * self.palette + c] == UNCOLORED
    }

    fn free_color(&self, v: Vertex) -> usize {
        (0..self.palette)
            .find(|&c| self.is_free(v, c))
            .expect("a vertex of degree at most Δ always misses one of Δ+1 colours")
    }

    // Colours the next alternating (a, b) chain starting at `from` with b
    // in place of a and vice versa; returns the vertices it visited.
    fn swap_chain(&mut self, from: Vertex, a: usize, b: usize) -> Vec<Vertex> {
        let mut path = Vec::new();
        let mut visited = vec![from];
        let (mut x, mut cur) = (from, a);
        while self.at[x * self.palette + cur] != UNCOLORED {
            let y = self.at[x * self.palette + cur];
            path.push((x, y, cur));
            visited.push(y);
            x = y;
            cur = if cur == a { b } else { a };
        }
        for &(p, q, _) in &path {
            self.set(p, q, UNCOLORED);
        }
        for &(p, q, col) in &path {
            self.set(p, q, if col == a { b } else { a });
        }
        visited
    }

    // Kempe-chain colouring within the current palette; gives up when the
    // chain closes an odd cycle.
    fn color_edge_kempe(&mut self, u: Vertex, v: Vertex) -> bool {
        if let Some(c) = (0..self.palette).find(|&c| self.is_free(u, c) && self.is_free(v, c)) {
            self.set(u, v, c);
            return true;
        }
        let alpha = self.free_color(u);
        let beta = self.free_color(v);
        let chain_hits_u = {
            let mut x = v;
            let mut cur = alpha;
            let mut hit = false;
            while self.at[x * self.palette + cur] != UNCOLORED {
                x = self.at[x * self.palette + cur];
                if x == u {
                    hit = true;
                    break;
                }
                cur = if cur == alpha { beta } else { alpha };
            }
            hit
        };
        if chain_hits_u {
            return false;
        }
        self.swap_chain(v, alpha, beta);
        self.set(u, v, alpha);
        true
    }

    fn color_edge(&mut self, g: &Multigraph, u: Vertex, v: Vertex) {
        // maximal fan at u starting with the uncoloured edge uv
        let mut fan = vec![v];
        let mut in_fan = vec![false; self.n];
        in_fan[v] = true;
        loop {
            let last = *fan.last().expect("fan is non-empty");
            let next = g.neighbours(u).find(|&w| {
                !in_fan[w] && {
                    let c = self.get(u, w);
                    c != UNCOLORED && self.is_free(last, c)
                }
            });
            match next {
                Some(w) => {
                    in_fan[w] = true;
                    fan.push(w);
                }
                None => break,
            }
        }
        let c = self.free_color(u);
        let d = self.free_color(*fan.last().expect("fan is non-empty"));

        // invert the cd-path starting at u
        if c != d {
            self.swap_chain(u, d, c);
        }

        // first fan vertex where d is free and the prefix is still a fan
        let mut stop = fan.len() - 1;
        for (i, &w) in fan.iter().enumerate() {
            if i > 0 {
                let prev = fan[i - 1];
                let cw = self.get(u, w);
                if cw == UNCOLORED || !self.is_free(prev, cw) {
                    break;
                }
            }
            if self.is_free(w, d) {
                stop = i;
                break;
            }
        }
        let shifted: Vec<usize> = (0..stop).map(|i| self.get(u, fan[i + 1])).collect();
        for &w in &fan[1..=stop] {
            self.set(u, w, UNCOLORED);
        }
        for (i, &col) in shifted.iter().enumerate() {
            self.set(u, fan[i], col);
        }
        self.set(u, fan[stop], d);
    }
}

/// Proper edge colouring of a simple graph with at most `Δ + 1` colours.
///
/// A Kempe-chain pass first tries to stay within `Δ` colours (this always
/// succeeds on bipartite graphs); if it gets stuck the graph is recoloured
/// with Misra–Gries.
pub fn vizing_color(g: &Multigraph) -> Result<EdgeColoring> {
    if !g.is_simple() {
        return Err(Error::NotSimple(g.multiplicity()));
    }
    let n = g.n();
    let delta = g.max_degree();
    let edges: Vec<(Vertex, Vertex)> = g.pairs().map(|(u, v, _)| (u, v)).collect();
    let fresh = |palette: usize| MisraGries {
        n,
        palette,
        color: vec![UNCOLORED; n * n],
        at: vec![UNCOLORED; n * palette],
    };
    let mut mg = fresh(delta.max(1));
    if !edges.iter().all(|&(u, v)| mg.color_edge_kempe(u, v)) {
        mg = fresh(delta + 1);
        for &(u, v) in &edges {
            mg.color_edge(g, u, v);
        }
    }
    let colors: Vec<usize> = edges.iter().map(|&(u, v)| mg.get(u, v)).collect();
    let num_colors = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    Ok(EdgeColoring {
        edges,
        colors,
        num_colors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDecomposition {
    /// Directed edges of each matching; endpoints are pairwise distinct.
    pub matchings: Vec<Vec<(Vertex, Vertex)>>,
    /// Underlying maximum degree `Δ̃` of each oriented half.
    pub half_max_degrees: Vec<usize>,
    /// Colours used on each half before size capping.
    pub half_colors: Vec<usize>,
}

impl MatchingDecomposition {
    /// `Σ (Δ̃ᵢ + 1)` over the halves: the colour-class count before capping is
    /// at most this.
    pub fn vizing_bound(&self) -> usize {
        self.half_max_degrees.iter().map(|d| d + 1).sum()
    }

    pub fn classes_before_cap(&self) -> usize {
        self.half_colors.iter().sum()
    }
}

/// Partitions the edge copies of `d` into matchings of at most `size_cap`
/// edges. `d` is split into oriented halves (for a simple digraph: one
/// direction of each antiparallel pair per half), each half is properly
/// edge-coloured, and colour classes larger than the cap are cut into
/// `⌈|class| / cap⌉` pieces of as equal size as possible.
pub fn matching_decompose(d: &MultiDigraph, size_cap: usize) -> Result<MatchingDecomposition> {
    if size_cap < 1 {
        return Err(Error::InvalidParameter("size_cap must be at least 1".into()));
    }
    let n = d.n();
    let mut halves: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let copies = std::iter::repeat_n((u, v), d.mult(u, v) as usize)
                .chain(std::iter::repeat_n((v, u), d.mult(v, u) as usize));
            for (j, e) in copies.enumerate() {
                if halves.len() <= j {
                    halves.push(Vec::new());
                }
                halves[j].push(e);
            }
        }
    }
    let mut out = MatchingDecomposition {
        matchings: Vec::new(),
        half_max_degrees: Vec::new(),
        half_colors: Vec::new(),
    };
    for half in halves {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in &half {
            b.add_edge(u, v)?;
        }
        let g = b.build();
        let coloring = vizing_color(&g)?;
        out.half_max_degrees.push(g.max_degree());
        out.half_colors.push(coloring.num_colors);
        let mut by_color: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); coloring.num_colors];
        for &(u, v) in &half {
            let key = (u.min(v), u.max(v));
            let i = coloring.edges.binary_search(&key).expect("edge was coloured");
            by_color[coloring.colors[i]].push((u, v));
        }
        for class in by_color.into_iter().filter(|c| !c.is_empty()) {
            let pieces = class.len().div_ceil(size_cap);
            let (q, r) = (class.len() / pieces, class.len() % pieces);
            let mut rest = &class[..];
            for p in 0..pieces {
                let take = q + usize::from(p < r);
                out.matchings.push(rest[..take].to_vec());
                rest = &rest[take..];
            }
        }
    }
    Ok(out)
}
