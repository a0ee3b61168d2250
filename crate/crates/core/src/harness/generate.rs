//! Seeded instance generators. Every output is checked for regularity and
//! the multiplicity cap before it is returned.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::io::AnyGraph;
use crate::error::{Error, Result};
use crate::graph::{DigraphBuilder, GraphBuilder, MultiDigraph, Multigraph, Vertex};
use crate::hamilton::{hamilton_cycle_undirected, SearchOutcome};
use crate::transforms::perfect_matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `s` random derangements peeled from the remaining capacity `r·K⃗ₙ − D`.
    RandomRegularMultidigraph,
    /// Random Hamilton cycles (plus one perfect matching when `s` is odd).
    RandomRegularMultigraph,
    /// `Kₙ`.
    Complete,
    /// `λKₙ`.
    CompleteMulti,
    /// `λ` copies of every ordered pair.
    DirectedComplete,
    /// `s` independent uniform derangements, resampled on cap violations.
    UnionOfPermutations,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::RandomRegularMultidigraph,
        Family::RandomRegularMultigraph,
        Family::Complete,
        Family::CompleteMulti,
        Family::DirectedComplete,
        Family::UnionOfPermutations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomRegularMultidigraph => "random-regular-multidigraph",
            Family::RandomRegularMultigraph => "random-regular-multigraph",
            Family::Complete => "complete",
            Family::CompleteMulti => "complete-multi",
            Family::DirectedComplete => "directed-complete",
            Family::UnionOfPermutations => "union-of-permutations",
        }
    }

    pub fn is_directed(self) -> bool {
        matches!(
            self,
            Family::RandomRegularMultidigraph | Family::DirectedComplete | Family::UnionOfPermutations
        )
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// Target degree; implied by `n` and `lambda` for the complete families.
    pub s: Option<usize>,
    /// Multiplicity cap for the random families.
    pub r: u32,
    /// Copies per pair for the complete families.
    pub lambda: u32,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorSpec {
            family,
            n,
            s: None,
            r: 1,
            lambda: 1,
            seed: 0,
        }
    }

    pub fn degree(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn cap(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn lambda(mut self, lambda: u32) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn expected(&self) -> Result<(usize, u32)> {
        let n = self.n;
        let complete = matches!(
            self.family,
            Family::Complete | Family::CompleteMulti | Family::DirectedComplete
        );
        if complete {
            let lambda = if self.family == Family::Complete { 1 } else { self.lambda };
            if lambda == 0 {
                return Err(Error::InvalidParameter("lambda must be at least 1".into()));
            }
            let s = lambda as usize * n.saturating_sub(1);
            if let Some(want) = self.s.filter(|&want| want != s) {
                return Err(Error::InvalidParameter(format!(
                    "{} on {n} vertices is {s}-regular, not {want}-regular",
                    self.family
                )));
            }
            return Ok((s, lambda));
        }
        let s = self
            .s
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs a degree s", self.family)))?;
        if self.r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        if s > self.r as usize * n.saturating_sub(1) {
            return Err(Error::Infeasible(format!(
                "degree {s} exceeds r(n - 1) = {}",
                self.r as usize * n.saturating_sub(1)
            )));
        }
        if !self.family.is_directed() && n * s % 2 == 1 {
            return Err(Error::Infeasible(format!("n·s = {} is odd", n * s)));
        }
        Ok((s, self.r))
    }
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<AnyGraph> {
    let (s, cap) = spec.expected()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g: AnyGraph = match spec.family {
        Family::Complete | Family::CompleteMulti => Multigraph::complete(n, cap).into(),
        Family::DirectedComplete => MultiDigraph::complete(n, cap).into(),
        Family::RandomRegularMultidigraph => peel_derangements(n, s, cap, &mut rng).into(),
        Family::UnionOfPermutations => union_of_permutations(n, s, cap, &mut rng)?.into(),
        Family::RandomRegularMultigraph => random_regular_multigraph(n, s, cap, &mut rng)?.into(),
    };
    let (regular, mult) = match &g {
        AnyGraph::Directed(d) => (d.is_regular(), d.multiplicity()),
        AnyGraph::Undirected(u) => (u.is_regular(), u.multiplicity()),
    };
    assert!(
        n == 0 || regular == Some(s),
        "generator produced a non-{s}-regular instance"
    );
    assert!(mult <= cap, "generator exceeded the multiplicity cap");
    Ok(g)
}

// Random perfect matching of the bipartite capacity graph tails → heads,
// by augmenting paths over shuffled adjacency. Capacities are regular, so
// one always exists.
fn random_derangement(n: usize, capacity: &[u32], rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let adj: Vec<Vec<Vertex>> = (0..n)
        .map(|u| {
            let mut row: Vec<Vertex> = (0..n).filter(|&v| capacity[u * n + v] > 0).collect();
            row.shuffle(rng);
            row
        })
        .collect();
    let mut head_of = vec![usize::MAX; n];
    let mut tail_of = vec![usize::MAX; n];
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);

    fn augment(
        u: Vertex,
        adj: &[Vec<Vertex>],
        seen: &mut [bool],
        head_of: &mut [usize],
        tail_of: &mut [usize],
    ) -> bool {
        for &v in &adj[u] {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if tail_of[v] == usize::MAX || augment(tail_of[v], adj, seen, head_of, tail_of) {
                tail_of[v] = u;
                head_of[u] = v;
                return true;
            }
        }
        false
    }

    for &u in &order {
        let mut seen = vec![false; n];
        let ok = augment(u, &adj, &mut seen, &mut head_of, &mut tail_of);
        assert!(ok, "regular bipartite capacity graph has a perfect matching");
    }
    head_of
}

fn peel_derangements(n: usize, s: usize, r: u32, rng: &mut ChaCha8Rng) -> MultiDigraph {
    let mut capacity = vec![r; n * n];
    for v in 0..n {
        capacity[v * n + v] = 0;
    }
    let mut b = DigraphBuilder::new(n);
    for _ in 0..s {
        let p = random_derangement(n, &capacity, rng);
        for (u, &v) in p.iter().enumerate() {
            capacity[u * n + v] -= 1;
            b.add_edge(u, v).expect("derangements have no fixed points");
        }
    }
    b.build()
}

fn union_of_permutations(n: usize, s: usize, r: u32, rng: &mut ChaCha8Rng) -> Result<MultiDigraph> {
    const LAYER_TRIES: usize = 2_000;
    const RESTARTS: usize = 50;
    if s > 0 && n < 2 {
        return Err(Error::Infeasible("no derangement of fewer than two points".into()));
    }
    'restart: for _ in 0..RESTARTS {
        let mut b = DigraphBuilder::new(n);
        for _ in 0..s {
            let mut placed = false;
            for _ in 0..LAYER_TRIES {
                let mut p: Vec<Vertex> = (0..n).collect();
                p.shuffle(rng);
                let fits = p
                    .iter()
                    .enumerate()
                    .all(|(u, &v)| u != v && b.mult(u, v) < r);
                if fits {
                    for (u, &v) in p.iter().enumerate() {
                        b.add_edge(u, v)?;
                    }
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'restart;
            }
        }
        return Ok(b.build());
    }
    Err(Error::Infeasible(format!(
        "no {s} derangements of {n} points within cap {r} found by resampling; \
         try random-regular-multidigraph"
    )))
}

fn random_hamilton_cycle(capacity: &Multigraph, rng: &mut ChaCha8Rng) -> Option<Vec<Vertex>> {
    let n = capacity.n();
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    for (u, v, m) in capacity.pairs() {
        b.add_copies(perm[u], perm[v], m).ok()?;
    }
    match hamilton_cycle_undirected(&b.build(), 200_000).ok()? {
        SearchOutcome::Found(c) => {
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            Some(c.vertices.iter().map(|&v| inv[v]).collect())
        }
        _ => None,
    }
}

fn random_perfect_matching(capacity: &Multigraph, rng: &mut ChaCha8Rng) -> Option<Vec<(Vertex, Vertex)>> {
    let n = capacity.n();
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    for (u, v, _) in capacity.pairs() {
        b.add_edge(perm[u], perm[v]).ok()?;
    }
    let m = perfect_matching(&b.build()).ok()?;
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Some(m.into_iter().map(|(u, v)| (inv[u], inv[v])).collect())
}

// Builds a t-regular multigraph inside r·Kₙ; dense targets are produced as
// complements so the capacity graph searched stays dense.
fn random_regular_multigraph(n: usize, s: usize, r: u32, rng: &mut ChaCha8Rng) -> Result<Multigraph> {
    const RESTARTS: usize = 50;
    if s == 0 {
        return Ok(Multigraph::empty(n));
    }
    if n < 2 {
        return Err(Error::Infeasible("no edges on fewer than two vertices".into()));
    }
    let full = r as usize * (n - 1);
    let complement = 2 * s > full;
    let t = if complement { full - s } else { s };
    let whole = Multigraph::complete(n, r);
    'restart: for _ in 0..RESTARTS {
        let mut capacity = whole.clone();
        let mut b = GraphBuilder::new(n);
        if t % 2 == 1 {
            let Some(m) = random_perfect_matching(&capacity, rng) else {
                continue 'restart;
            };
            for &(u, v) in &m {
                b.add_edge(u, v)?;
            }
            capacity = capacity.subtract_edges(m)?;
        }
        for _ in 0..t / 2 {
            let Some(c) = random_hamilton_cycle(&capacity, rng) else {
                continue 'restart;
            };
            let edges: Vec<(Vertex, Vertex)> = (0..c.len()).map(|i| (c[i], c[(i + 1) % c.len()])).collect();
            for &(u, v) in &edges {
                b.add_edge(u, v)?;
            }
            capacity = capacity.subtract_edges(edges)?;
        }
        let h = b.build();
        return if complement { whole.subtract(&h) } else { Ok(h) };
    }
    Err(Error::Infeasible(format!(
        "could not assemble a {s}-regular multigraph on {n} vertices with cap {r}"
    )))
}
