//! Robust (out)neighbourhoods and certification of robust (ν, τ)-(out)expansion.
//!
//! All real thresholds are rounded towards the strict side: a vertex joins
//! `RN_ν(S)` once it has at least `⌈νn⌉` neighbours in `S`, the size band is
//! `⌈τn⌉ ≤ |S| ≤ ⌊(1−τ)n⌋`, and a set expands when `|RN_ν(S)| ≥ |S| + ⌈νn⌉`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiDigraph, Multigraph, Vertex};

const ROUNDING_SLACK: f64 = 1e-9;

/// Default number of random sets examined in sampled certification.
pub const DEFAULT_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub nu: f64,
    pub tau: f64,
}

impl Default for ExpansionParams {
    fn default() -> Self {
        ExpansionParams {
            nu: 0.05,
            tau: 0.3,
        }
    }
}

impl ExpansionParams {
    pub fn new(nu: f64, tau: f64) -> Result<Self> {
        let p = ExpansionParams { nu, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(self.nu) || !open(self.tau) {
            return Err(Error::InvalidParameter(format!(
                "nu and tau must lie in (0, 1), got nu = {}, tau = {}",
                self.nu, self.tau
            )));
        }
        Ok(())
    }

    fn validate_for_certification(&self) -> Result<()> {
        self.validate()?;
        if self.nu > self.tau {
            return Err(Error::InvalidParameter(format!(
                "certification requires nu <= tau, got nu = {}, tau = {}",
                self.nu, self.tau
            )));
        }
        Ok(())
    }

    /// `⌈νn⌉`, at least 1.
    pub fn threshold(&self, n: usize) -> usize {
        ((self.nu * n as f64 - ROUNDING_SLACK).ceil() as usize).max(1)
    }

    /// Inclusive size band `(⌈τn⌉, ⌊(1−τ)n⌋)`; empty when `lo > hi`.
    pub fn band(&self, n: usize) -> (usize, usize) {
        let lo = (self.tau * n as f64 - ROUNDING_SLACK).ceil().max(0.0) as usize;
        let hi = ((1.0 - self.tau) * n as f64 + ROUNDING_SLACK).floor().max(0.0) as usize;
        (lo.max(1), hi.min(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PassSampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CertMode {
    Exact,
    Sample { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub verdict: Verdict,
    /// A non-expanding set, present exactly when `verdict` is `Fail`.
    pub witness: Option<Vec<Vertex>>,
    /// Sets in the size band that were evaluated.
    pub sets_checked: u64,
    pub params: ExpansionParams,
    /// True when the size band is empty and the verdict holds vacuously.
    pub vacuous: bool,
    pub n: usize,
    pub directed: bool,
    pub mode: CertMode,
}

impl ExpanderCertificate {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// `{ v : |S ∩ N⁻(v)| ≥ νn }` for a simple digraph.
pub fn robust_outneighbourhood(d: &MultiDigraph, set: &[Vertex], nu: f64) -> Result<Vec<Vertex>> {
    if !d.is_simple() {
        return Err(Error::NotSimple(d.multiplicity()));
    }
    let adj = out_lists(d);
    robust_from_lists(&adj, d.n(), set, nu)
}

/// `{ v : |S ∩ N(v)| ≥ νn }` for a simple graph.
pub fn robust_neighbourhood(g: &Multigraph, set: &[Vertex], nu: f64) -> Result<Vec<Vertex>> {
    if !g.is_simple() {
        return Err(Error::NotSimple(g.multiplicity()));
    }
    let adj = neighbour_lists(g);
    robust_from_lists(&adj, g.n(), set, nu)
}

pub fn min_semidegree(d: &MultiDigraph) -> usize {
    d.min_semidegree()
}

pub fn min_degree(g: &Multigraph) -> usize {
    g.min_degree()
}

pub fn certify_outexpander(
    d: &MultiDigraph,
    params: ExpansionParams,
    mode: CertMode,
) -> Result<ExpanderCertificate> {
    if !d.is_simple() {
        return Err(Error::NotSimple(d.multiplicity()));
    }
    certify(&out_lists(d), d.n(), true, params, mode)
}

pub fn certify_expander(
    g: &Multigraph,
    params: ExpansionParams,
    mode: CertMode,
) -> Result<ExpanderCertificate> {
    if !g.is_simple() {
        return Err(Error::NotSimple(g.multiplicity()));
    }
    certify(&neighbour_lists(g), g.n(), false, params, mode)
}

/// Re-evaluates a failure witness from scratch; true iff it really fails to expand.
pub fn witness_violates_directed(d: &MultiDigraph, witness: &[Vertex], params: ExpansionParams) -> bool {
    let n = d.n();
    let (lo, hi) = params.band(n);
    match robust_outneighbourhood(d, witness, params.nu) {
        Ok(rn) => in_band(witness.len(), lo, hi) && rn.len() < witness.len() + params.threshold(n),
        Err(_) => false,
    }
}

pub fn witness_violates_undirected(g: &Multigraph, witness: &[Vertex], params: ExpansionParams) -> bool {
    let n = g.n();
    let (lo, hi) = params.band(n);
    match robust_neighbourhood(g, witness, params.nu) {
        Ok(rn) => in_band(witness.len(), lo, hi) && rn.len() < witness.len() + params.threshold(n),
        Err(_) => false,
    }
}

fn in_band(k: usize, lo: usize, hi: usize) -> bool {
    lo <= k && k <= hi
}

fn out_lists(d: &MultiDigraph) -> Vec<Vec<Vertex>> {
    (0..d.n()).map(|v| d.out_neighbours(v).collect()).collect()
}

fn neighbour_lists(g: &Multigraph) -> Vec<Vec<Vertex>> {
    (0..g.n()).map(|v| g.neighbours(v).collect()).collect()
}

// `adj[u]` lists the vertices that gain one S-neighbour when u joins S.
fn robust_from_lists(adj: &[Vec<Vertex>], n: usize, set: &[Vertex], nu: f64) -> Result<Vec<Vertex>> {
    if set.is_empty() {
        return Ok(Vec::new());
    }
    let mut seen = vec![false; n];
    let mut count = vec![0usize; n];
    for &u in set {
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        if std::mem::replace(&mut seen[u], true) {
            continue;
        }
        for &w in &adj[u] {
            count[w] += 1;
        }
    }
    let thr = ExpansionParams { nu, tau: 0.5 }.threshold(n);
    Ok((0..n).filter(|&v| count[v] >= thr).collect())
}

fn certify(
    adj: &[Vec<Vertex>],
    n: usize,
    directed: bool,
    params: ExpansionParams,
    mode: CertMode,
) -> Result<ExpanderCertificate> {
    params.validate_for_certification()?;
    let (lo, hi) = params.band(n);
    let mut cert = ExpanderCertificate {
        verdict: Verdict::Pass,
        witness: None,
        sets_checked: 0,
        params,
        vacuous: false,
        n,
        directed,
        mode,
    };
    if lo > hi || n == 0 {
        cert.vacuous = true;
        if let CertMode::Sample { .. } = mode {
            cert.verdict = Verdict::PassSampled;
        }
        return Ok(cert);
    }
    let thr = params.threshold(n);
    match mode {
        CertMode::Exact => {
            let (witness, checked) = exact_search(adj, n, lo, hi, thr);
            cert.sets_checked = checked;
            if let Some(w) = witness {
                cert.verdict = Verdict::Fail;
                cert.witness = Some(w);
            }
        }
        CertMode::Sample { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            cert.verdict = Verdict::PassSampled;
            let mut count = vec![0usize; n];
            for _ in 0..samples {
                let k = rng.gen_range(lo..=hi);
                let mut set = index::sample(&mut rng, n, k).into_vec();
                cert.sets_checked += 1;
                count.iter_mut().for_each(|c| *c = 0);
                for &u in &set {
                    for &w in &adj[u] {
                        count[w] += 1;
                    }
                }
                let rn = count.iter().filter(|&&c| c >= thr).count();
                if rn < k + thr {
                    set.sort_unstable();
                    cert.verdict = Verdict::Fail;
                    cert.witness = Some(set);
                    break;
                }
            }
        }
    }
    Ok(cert)
}

struct SubsetWalk<'a> {
    adj: &'a [Vec<Vertex>],
    n: usize,
    lo: usize,
    hi: usize,
    thr: usize,
    count: Vec<usize>,
    robust: usize,
    set: Vec<Vertex>,
    checked: u64,
}

impl SubsetWalk<'_> {
    fn push(&mut self, u: Vertex) {
        self.set.push(u);
        for &w in &self.adj[u] {
            self.count[w] += 1;
            if self.count[w] == self.thr {
                self.robust += 1;
            }
        }
    }

    fn pop(&mut self) {
        let u = self.set.pop().expect("non-empty walk");
        for &w in &self.adj[u] {
            if self.count[w] == self.thr {
                self.robust -= 1;
            }
            self.count[w] -= 1;
        }
    }

    // Pre-order over sets extending the current one with larger elements,
    // which is lexicographic order on sorted vertex lists.
    fn descend(&mut self) -> bool {
        let k = self.set.len();
        if k >= self.lo {
            self.checked += 1;
            if self.robust < k + self.thr {
                return true;
            }
        }
        if k == self.hi {
            return false;
        }
        let last = *self.set.last().expect("non-empty walk");
        for j in last + 1..self.n {
            // not enough vertices left to reach the band
            if k + 1 + (self.n - 1 - j) < self.lo {
                break;
            }
            self.push(j);
            if self.descend() {
                return true;
            }
            self.pop();
        }
        false
    }
}

/// Lexicographically first non-expanding set in the band, if any, plus the
/// number of band sets evaluated up to and including it.
fn exact_search(
    adj: &[Vec<Vertex>],
    n: usize,
    lo: usize,
    hi: usize,
    thr: usize,
) -> (Option<Vec<Vertex>>, u64) {
    // Subtrees are keyed by their minimum element; a witness in subtree k
    // makes every subtree above k irrelevant.
    let first_fail = AtomicUsize::new(usize::MAX);
    let results: Vec<(Option<Vec<Vertex>>, u64)> = (0..n)
        .into_par_iter()
        .map(|first| {
            if first_fail.load(Ordering::Relaxed) < first || n - first < lo {
                return (None, 0);
            }
            let mut walk = SubsetWalk {
                adj,
                n,
                lo,
                hi,
                thr,
                count: vec![0; n],
                robust: 0,
                set: Vec::with_capacity(hi),
                checked: 0,
            };
            walk.push(first);
            let found = walk.descend().then(|| walk.set.clone());
            if found.is_some() {
                first_fail.fetch_min(first, Ordering::Relaxed);
            }
            (found, walk.checked)
        })
        .collect();
    let mut checked = 0;
    for (found, c) in results {
        checked += c;
        if found.is_some() {
            return (found, checked);
        }
    }
    (None, checked)
}
