//! Multigraph and multidigraph value types.
//!
//! Both types store multiplicities in a dense `n × n` matrix. Vertices are the
//! integers `0..n`. Values are immutable once built; use [`DigraphBuilder`] /
//! [`GraphBuilder`] or the combinators (`disjoint_union`, `subtract_edges`) to
//! obtain new values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// One copy of an edge. `copy` ranges over `0..mult(tail, head)`; for
/// undirected graphs `tail < head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeInstance {
    pub tail: Vertex,
    pub head: Vertex,
    pub copy: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
}

fn check_pair(n: usize, u: Vertex, v: Vertex) -> Result<()> {
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if u == v {
        return Err(Error::Loop(u));
    }
    Ok(())
}

/// A loopless directed multigraph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiDigraph {
    n: usize,
    mult: Vec<u32>,
}

impl std::fmt::Debug for MultiDigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiDigraph")
            .field("n", &self.n)
            .field("edges", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

impl MultiDigraph {
    pub fn empty(n: usize) -> Self {
        MultiDigraph {
            n,
            mult: vec![0; n * n],
        }
    }

    /// Every occurrence of a pair in `edges` adds one copy.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = DigraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn from_multiplicities<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u32)>,
    {
        let mut b = DigraphBuilder::new(n);
        for (u, v, m) in entries {
            b.add_copies(u, v, m)?;
        }
        Ok(b.build())
    }

    /// Every ordered pair of distinct vertices with multiplicity `lambda`.
    pub fn complete(n: usize, lambda: u32) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.mult[u * n + v] = lambda;
                }
            }
        }
        g
    }

    /// The directed cycle `0 → 1 → … → n−1 → 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 2 {
            for v in 0..n {
                g.mult[v * n + (v + 1) % n] += 1;
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mult(&self, u: Vertex, v: Vertex) -> u32 {
        self.mult[u * self.n + v]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.mult(u, v) > 0
    }

    /// Maximum multiplicity over all pairs; 0 for the empty graph.
    pub fn multiplicity(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity() <= 1
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.mult[v * self.n..(v + 1) * self.n]
            .iter()
            .map(|&m| m as usize)
            .sum()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        (0..self.n).map(|u| self.mult(u, v) as usize).sum()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut out_degrees = vec![0; self.n];
        let mut in_degrees = vec![0; self.n];
        for (u, v, m) in self.pairs() {
            out_degrees[u] += m as usize;
            in_degrees[v] += m as usize;
        }
        DegreeProfile {
            out_degrees,
            in_degrees,
        }
    }

    /// `Some(s)` iff every vertex has in- and out-degree exactly `s`.
    pub fn is_regular(&self) -> Option<usize> {
        let p = self.degree_profile();
        let s = *p.out_degrees.first()?;
        let regular = p
            .out_degrees
            .iter()
            .chain(p.in_degrees.iter())
            .all(|&d| d == s);
        regular.then_some(s)
    }

    /// Minimum over all vertices of both in- and out-degree.
    pub fn min_semidegree(&self) -> usize {
        let p = self.degree_profile();
        p.out_degrees
            .iter()
            .chain(p.in_degrees.iter())
            .copied()
            .min()
            .unwrap_or(0)
    }

    pub fn max_semidegree(&self) -> usize {
        let p = self.degree_profile();
        p.out_degrees
            .iter()
            .chain(p.in_degrees.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn out_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let row = &self.mult[v * self.n..(v + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(u, _)| u)
    }

    pub fn in_neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&u| self.mult(u, v) > 0)
    }

    /// Ordered pairs with non-zero multiplicity, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        let n = self.n;
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(move |(i, &m)| (i / n, i % n, m))
    }

    pub fn edge_instances(&self) -> impl Iterator<Item = EdgeInstance> + '_ {
        self.pairs().flat_map(|(tail, head, m)| {
            (0..m).map(move |copy| EdgeInstance { tail, head, copy })
        })
    }

    /// Collapses every repeated edge to one copy.
    pub fn underlying_simple(&self) -> Self {
        MultiDigraph {
            n: self.n,
            mult: self.mult.iter().map(|&m| m.min(1)).collect(),
        }
    }

    pub fn disjoint_union(&self, other: &MultiDigraph) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(MultiDigraph {
            n: self.n,
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Removes one copy per occurrence of a pair in `edges`.
    pub fn subtract_edges<I>(&self, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = DigraphBuilder::from_graph(self);
        for (u, v) in edges {
            b.remove_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Pointwise multiplicity difference; fails if `other` is not contained in `self`.
    pub fn subtract(&self, other: &MultiDigraph) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut mult = self.mult.clone();
        for (i, (&a, &b)) in self.mult.iter().zip(&other.mult).enumerate() {
            if b > a {
                return Err(Error::Underflow {
                    tail: i / self.n,
                    head: i % self.n,
                });
            }
            mult[i] = a - b;
        }
        Ok(MultiDigraph { n: self.n, mult })
    }

    pub fn is_subgraph_of(&self, other: &MultiDigraph) -> bool {
        self.n == other.n && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// The undirected multigraph with one edge `{u, v}` per directed copy.
    pub fn forget_orientation(&self) -> Multigraph {
        let mut b = GraphBuilder::new(self.n);
        for (u, v, m) in self.pairs() {
            b.add_copies(u, v, m).expect("pairs are valid");
        }
        b.build()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.mult
    }
}

impl Serialize for MultiDigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MultiDigraph", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("edges", &self.pairs().collect::<Vec<_>>())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MultiDigraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            edges: Vec<(usize, usize, u32)>,
        }
        let raw = Raw::deserialize(de)?;
        MultiDigraph::from_multiplicities(raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone)]
pub struct DigraphBuilder {
    n: usize,
    mult: Vec<u32>,
}

impl DigraphBuilder {
    pub fn new(n: usize) -> Self {
        DigraphBuilder {
            n,
            mult: vec![0; n * n],
        }
    }

    pub fn from_graph(g: &MultiDigraph) -> Self {
        DigraphBuilder {
            n: g.n,
            mult: g.mult.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, u: Vertex, v: Vertex) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        self.add_copies(u, v, 1)
    }

    pub fn add_copies(&mut self, u: Vertex, v: Vertex, m: u32) -> Result<&mut Self> {
        check_pair(self.n, u, v)?;
        self.mult[u * self.n + v] += m;
        Ok(self)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        check_pair(self.n, u, v)?;
        let slot = &mut self.mult[u * self.n + v];
        if *slot == 0 {
            return Err(Error::Underflow { tail: u, head: v });
        }
        *slot -= 1;
        Ok(self)
    }

    pub fn build(self) -> MultiDigraph {
        MultiDigraph {
            n: self.n,
            mult: self.mult,
        }
    }
}

/// A loopless undirected multigraph. Multiplicities are stored symmetrically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    mult: Vec<u32>,
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Multigraph")
            .field("n", &self.n)
            .field("edges", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

impl Multigraph {
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            mult: vec![0; n * n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn from_multiplicities<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, u32)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v, m) in entries {
            b.add_copies(u, v, m)?;
        }
        Ok(b.build())
    }

    /// `λK_n`.
    pub fn complete(n: usize, lambda: u32) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.mult[u * n + v] = lambda;
                }
            }
        }
        g
    }

    /// The cycle `0 – 1 – … – n−1 – 0` (a double edge for n = 2).
    pub fn cycle(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        if n >= 2 {
            for v in 0..n {
                b.add_edge(v, (v + 1) % n).expect("valid cycle edge");
            }
        }
        b.build()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mult(&self, u: Vertex, v: Vertex) -> u32 {
        self.mult[u * self.n + v]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.mult(u, v) > 0
    }

    pub fn multiplicity(&self) -> u32 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity() <= 1
    }

    pub fn edge_count(&self) -> usize {
        self.pairs().map(|(_, _, m)| m as usize).sum()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.mult[v * self.n..(v + 1) * self.n]
            .iter()
            .map(|&m| m as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degrees();
        let s = *d.first()?;
        d.iter().all(|&x| x == s).then_some(s)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let row = &self.mult[v * self.n..(v + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(u, _)| u)
    }

    /// Unordered pairs `u < v` with non-zero multiplicity.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        let n = self.n;
        self.mult
            .iter()
            .enumerate()
            .filter(move |(i, &m)| m > 0 && i / n < i % n)
            .map(move |(i, &m)| (i / n, i % n, m))
    }

    pub fn edge_instances(&self) -> impl Iterator<Item = EdgeInstance> + '_ {
        self.pairs().flat_map(|(tail, head, m)| {
            (0..m).map(move |copy| EdgeInstance { tail, head, copy })
        })
    }

    pub fn underlying_simple(&self) -> Self {
        Multigraph {
            n: self.n,
            mult: self.mult.iter().map(|&m| m.min(1)).collect(),
        }
    }

    pub fn disjoint_union(&self, other: &Multigraph) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Multigraph {
            n: self.n,
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn subtract_edges<I>(&self, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = GraphBuilder::from_graph(self);
        for (u, v) in edges {
            b.remove_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn subtract(&self, other: &Multigraph) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut mult = self.mult.clone();
        for (i, (&a, &b)) in self.mult.iter().zip(&other.mult).enumerate() {
            if b > a {
                let (u, v) = (i / self.n, i % self.n);
                return Err(Error::Underflow {
                    tail: u.min(v),
                    head: u.max(v),
                });
            }
            mult[i] = a - b;
        }
        Ok(Multigraph { n: self.n, mult })
    }

    pub fn is_subgraph_of(&self, other: &Multigraph) -> bool {
        self.n == other.n && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.mult
    }
}

impl Serialize for Multigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Multigraph", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("edges", &self.pairs().collect::<Vec<_>>())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Multigraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            edges: Vec<(usize, usize, u32)>,
        }
        let raw = Raw::deserialize(de)?;
        Multigraph::from_multiplicities(raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    mult: Vec<u32>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            mult: vec![0; n * n],
        }
    }

    pub fn from_graph(g: &Multigraph) -> Self {
        GraphBuilder {
            n: g.n,
            mult: g.mult.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, u: Vertex, v: Vertex) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        self.add_copies(u, v, 1)
    }

    pub fn add_copies(&mut self, u: Vertex, v: Vertex, m: u32) -> Result<&mut Self> {
        check_pair(self.n, u, v)?;
        self.mult[u * self.n + v] += m;
        self.mult[v * self.n + u] += m;
        Ok(self)
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<&mut Self> {
        check_pair(self.n, u, v)?;
        if self.mult[u * self.n + v] == 0 {
            return Err(Error::Underflow {
                tail: u.min(v),
                head: u.max(v),
            });
        }
        self.mult[u * self.n + v] -= 1;
        self.mult[v * self.n + u] -= 1;
        Ok(self)
    }

    pub fn build(self) -> Multigraph {
        Multigraph {
            n: self.n,
            mult: self.mult,
        }
    }
}
