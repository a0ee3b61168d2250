//! The randomized decomposition pipeline and its entry points.
//!
//! A regular multidigraph `D` of multiplicity at most `r` is split into `r`
//! simple parts. Hamilton cycles are peeled off parts `2..r`; their sparse
//! leftovers are cut into matchings, each matching is threaded into a path
//! through `D′ = D₁ ∪ leftovers`, each path is closed into a Hamilton cycle,
//! and the simple regular remainder `D″ ⊆ D₁` is decomposed exactly. Every
//! stage has a gate; a failed gate resamples the split, and when the retries
//! run out the configured fallback decides.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{certify_outexpander, CertMode, ExpansionParams};
use crate::graph::{DigraphBuilder, MultiDigraph, Multigraph, Vertex};
use crate::hamilton::{
    absorb_matching, complete_to_hamilton, decompose_regular, decompose_regular_undirected,
    greedy_edge_disjoint_hamilton, DirectedPath, HamiltonCycle, SearchOutcome, DEFAULT_BUDGET,
};
use crate::harness::io::AnyGraph;
use crate::harness::verify::{
    verify_decomposition, verify_decomposition_undirected, verify_one_factorisation,
};
use crate::transforms::{
    balanced_orient, cycle_decompose_even, extract_factor, matching_decompose, orient_cycles,
    perfect_matching,
};

/// Spanning cycles whose edge multisets partition the host's edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HamiltonDecomposition {
    pub cycles: Vec<HamiltonCycle>,
}

impl HamiltonDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertex_lists(&self) -> Vec<Vec<Vertex>> {
        self.cycles.iter().map(|c| c.vertices.clone()).collect()
    }

    pub fn from_vertex_lists(lists: Vec<Vec<Vertex>>) -> Self {
        HamiltonDecomposition {
            cycles: lists.into_iter().map(|vertices| HamiltonCycle { vertices }).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fallback {
    None,
    #[default]
    Exact,
}

impl std::str::FromStr for Fallback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fallback::None),
            "exact" => Ok(Fallback::Exact),
            _ => Err(Error::InvalidParameter(format!(
                "fallback must be `exact` or `none`, got `{s}`"
            ))),
        }
    }
}

/// Explicit stand-ins for the asymptotic constants. Caps left as `None` are
/// derived from `n` when a run starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub r: u32,
    pub seed: u64,
    pub params: ExpansionParams,
    /// Balance gate: every part degree must lie in `(1 ± xi)·s/r`.
    pub xi: f64,
    pub max_retries: usize,
    pub fallback: Fallback,
    /// Node budget of each search inside the pipeline.
    pub budget: u64,
    /// Node budget of the exact fallback.
    pub fallback_budget: u64,
    /// Degree left in each part after greedy cycle extraction.
    pub leftover_cap: usize,
    /// Largest matching handed to absorption; default `⌊n/2⌋`.
    pub matching_size_cap: Option<usize>,
    /// Most vertices an absorbing path may have; default `n`.
    pub path_vertex_cap: Option<usize>,
    /// Longest connector; default `⌈1/ν⌉`.
    pub short_path_maxlen: Option<usize>,
    /// Random sets tested by the expander gate on each part.
    pub gate_samples: usize,
    /// Size of the factor kept in the undirected orientation; default
    /// `max(1, ⌊n/20⌋)`.
    pub factor_k: Option<usize>,
    /// Record intermediate graphs for `--dump-stages`.
    pub capture_stages: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            r: 1,
            seed: 0,
            params: ExpansionParams::default(),
            xi: 0.3,
            max_retries: 20,
            fallback: Fallback::Exact,
            budget: DEFAULT_BUDGET,
            fallback_budget: 50 * DEFAULT_BUDGET,
            leftover_cap: 2,
            matching_size_cap: None,
            path_vertex_cap: None,
            short_path_maxlen: None,
            gate_samples: 2_000,
            factor_k: None,
            capture_stages: false,
        }
    }
}

/// A configuration with every `n`-dependent default filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedCaps {
    pub matching_size_cap: usize,
    pub path_vertex_cap: usize,
    pub short_path_maxlen: usize,
    pub factor_k: usize,
}

impl PipelineConfig {
    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_fallback(mut self, fallback: Fallback) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn resolve(&self, n: usize) -> Result<ResolvedCaps> {
        if self.r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        self.params.validate()?;
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(Error::InvalidParameter(format!("xi = {} is not in (0, 1)", self.xi)));
        }
        let caps = ResolvedCaps {
            matching_size_cap: self.matching_size_cap.unwrap_or((n / 2).max(1)),
            path_vertex_cap: self.path_vertex_cap.unwrap_or(n.max(2)),
            short_path_maxlen: self
                .short_path_maxlen
                .unwrap_or((1.0 / self.params.nu - 1e-9).ceil() as usize),
            factor_k: self.factor_k.unwrap_or((n / 20).max(1)),
        };
        if caps.matching_size_cap < 1 || caps.path_vertex_cap < 1 || caps.short_path_maxlen < 1 {
            return Err(Error::InvalidParameter("caps must be at least 1".into()));
        }
        if caps.path_vertex_cap < 2 * caps.matching_size_cap {
            return Err(Error::InvalidParameter(format!(
                "path_vertex_cap {} is below twice the matching size cap {}",
                caps.path_vertex_cap, caps.matching_size_cap
            )));
        }
        Ok(caps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Split,
    ExpanderGate,
    AlmostDecompose,
    Matchings,
    Absorption,
    Completion,
    FinalRegular,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageStatus {
    Ok,
    /// Nothing to do, e.g. no leftover parts when `r = 1`.
    Vacuous,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub status: StageStatus,
    pub detail: Option<String>,
    pub metrics: BTreeMap<String, u64>,
}

impl StageRecord {
    fn new(stage: Stage) -> Self {
        StageRecord {
            stage,
            status: StageStatus::Ok,
            detail: None,
            metrics: BTreeMap::new(),
        }
    }

    fn metric(&mut self, key: &str, value: impl TryInto<u64>) -> &mut Self {
        self.metrics.insert(key.to_string(), value.try_into().unwrap_or(u64::MAX));
        self
    }

    fn vacuous(mut self) -> Self {
        self.status = StageStatus::Vacuous;
        self
    }

    fn failed(mut self, detail: impl Into<String>) -> Self {
        self.status = StageStatus::Failed;
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub attempt: usize,
    pub stages: Vec<StageRecord>,
    pub failed_stage: Option<Stage>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// The staged pipeline produced a verified decomposition.
    Decomposed,
    /// The exact fallback produced a verified decomposition.
    DecomposedByFallback,
    /// The exact fallback exhausted its search: no decomposition exists.
    ProvenNonexistent,
    /// The exact fallback ran out of budget.
    Indeterminate,
    /// The pipeline failed and no fallback was configured. Says nothing
    /// about existence.
    Failed,
}

impl Outcome {
    pub fn is_success(self) -> bool {
        matches!(self, Outcome::Decomposed | Outcome::DecomposedByFallback)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationReport {
    /// Copies in the underlying simple graph `G′`.
    pub simple_edges: usize,
    /// Size of the factor actually extracted; may be below the requested one.
    pub factor_k: usize,
    pub factor_requested: usize,
    /// Cycles (2-cycles included) of the even remainder.
    pub remainder_cycles: usize,
    /// Degree of the assembled orientation.
    pub oriented_degree: usize,
    /// Sampled expander check of the orientation's underlying simple digraph.
    pub orientation_expands: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub directed: bool,
    pub n: usize,
    pub s: usize,
    pub config: PipelineConfig,
    pub caps: ResolvedCaps,
    pub attempts: Vec<AttemptReport>,
    pub fallback_used: bool,
    pub fallback_detail: Option<String>,
    pub orientation: Option<OrientationReport>,
    pub outcome: Outcome,
    pub cycles: usize,
    pub verified: bool,
}

impl PipelineReport {
    pub fn retries(&self) -> usize {
        self.attempts.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub decomposition: Option<HamiltonDecomposition>,
    pub report: PipelineReport,
    /// Intermediate graphs, named by attempt and stage, when captured.
    #[serde(skip)]
    pub stages: Vec<(String, AnyGraph)>,
}

/// Splits `d` into `r` simple parts: each pair `(u, v)` of multiplicity `m`
/// lands in a uniformly random `m`-subset of the parts.
pub fn random_split(d: &MultiDigraph, r: u32, seed: u64) -> Result<Vec<MultiDigraph>> {
    split_with(d, r, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn split_with(d: &MultiDigraph, r: u32, rng: &mut ChaCha8Rng) -> Result<Vec<MultiDigraph>> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let mut parts: Vec<DigraphBuilder> = (0..r).map(|_| DigraphBuilder::new(d.n())).collect();
    for (u, v, m) in d.pairs() {
        if m > r {
            return Err(Error::MultiplicityExceeded {
                tail: u,
                head: v,
                found: m,
                bound: r,
            });
        }
        for i in sample(rng, r as usize, m as usize).iter() {
            parts[i].add_edge(u, v)?;
        }
    }
    Ok(parts.into_iter().map(DigraphBuilder::build).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceCheck {
    pub passed: bool,
    pub lo: f64,
    pub hi: f64,
    pub min_degree: usize,
    pub max_degree: usize,
}

/// Passes iff every in- and out-degree of every part lies in
/// `[(1 − xi)s/r, (1 + xi)s/r]`.
pub fn split_balance_check(parts: &[MultiDigraph], s: usize, r: u32, xi: f64) -> BalanceCheck {
    let mean = s as f64 / r as f64;
    let (lo, hi) = ((1.0 - xi) * mean, (1.0 + xi) * mean);
    let min_degree = parts.iter().map(MultiDigraph::min_semidegree).min().unwrap_or(0);
    let max_degree = parts.iter().map(MultiDigraph::max_semidegree).max().unwrap_or(0);
    let eps = 1e-9;
    BalanceCheck {
        passed: min_degree as f64 >= lo - eps && max_degree as f64 <= hi + eps,
        lo,
        hi,
        min_degree,
        max_degree,
    }
}

fn cycle_edges(c: &HamiltonCycle) -> Vec<(Vertex, Vertex)> {
    c.edges().collect()
}

fn path_edges(p: &DirectedPath) -> Vec<(Vertex, Vertex)> {
    p.edges().collect()
}

fn union_all(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<MultiDigraph> {
    let mut b = DigraphBuilder::new(n);
    for (u, v) in edges {
        b.add_edge(u, v)?;
    }
    Ok(b.build())
}

fn outcome_name<T>(o: &SearchOutcome<T>) -> &'static str {
    match o {
        SearchOutcome::Found(_) => "found",
        SearchOutcome::Absent => "absent",
        SearchOutcome::Indeterminate => "indeterminate",
    }
}

struct Attempt<'a> {
    d: &'a MultiDigraph,
    s: usize,
    cfg: &'a PipelineConfig,
    caps: ResolvedCaps,
    index: usize,
    stages: Vec<StageRecord>,
    captured: Vec<(String, AnyGraph)>,
}

impl Attempt<'_> {
    fn capture(&mut self, name: &str, g: &MultiDigraph) {
        if self.cfg.capture_stages {
            self.captured
                .push((format!("attempt{}-{name}", self.index), AnyGraph::Directed(g.clone())));
        }
    }

    fn record(&mut self, rec: StageRecord) -> bool {
        let ok = rec.status != StageStatus::Failed;
        self.stages.push(rec);
        ok
    }

    fn run(&mut self, rng: &mut ChaCha8Rng) -> Result<Option<Vec<HamiltonCycle>>> {
        let (d, s, cfg, caps) = (self.d, self.s, self.cfg, self.caps);
        let n = d.n();
        let r = cfg.r;

        // (1) split and balance gate
        let parts = split_with(d, r, rng)?;
        let balance = split_balance_check(&parts, s, r, cfg.xi);
        let mut rec = StageRecord::new(Stage::Split);
        rec.metric("parts", parts.len())
            .metric("min_part_degree", balance.min_degree)
            .metric("max_part_degree", balance.max_degree);
        if !balance.passed {
            rec = rec.failed(format!(
                "part degrees span [{}, {}], outside [{:.2}, {:.2}]",
                balance.min_degree, balance.max_degree, balance.lo, balance.hi
            ));
        }
        for (i, p) in parts.iter().enumerate() {
            self.capture(&format!("part{}", i + 1), p);
        }
        if !self.record(rec) {
            return Ok(None);
        }

        // (2) expander gate at (ν/2r, τ) on every part
        let gate = ExpansionParams {
            nu: cfg.params.nu / (2.0 * r as f64),
            tau: cfg.params.tau,
        };
        let mut rec = StageRecord::new(Stage::ExpanderGate);
        let mut checked = 0u64;
        for (i, p) in parts.iter().enumerate() {
            let mode = CertMode::Sample {
                samples: cfg.gate_samples,
                seed: rng.gen(),
            };
            let cert = certify_outexpander(p, gate, mode)?;
            checked += cert.sets_checked;
            if !cert.passed() {
                let size = cert.witness.as_ref().map_or(0, Vec::len);
                rec = rec.failed(format!("part {} has a non-expanding set of size {size}", i + 1));
                break;
            }
        }
        rec.metric("sets_checked", checked);
        if !self.record(rec) {
            return Ok(None);
        }

        // (3) greedy Hamilton cycles in parts 2..r
        let mut rec = StageRecord::new(Stage::AlmostDecompose);
        let extractions = parts[1..]
            .par_iter()
            .map(|p| {
                let target = p.min_semidegree().saturating_sub(cfg.leftover_cap);
                greedy_edge_disjoint_hamilton(p, target, cfg.budget)
            })
            .collect::<Result<Vec<_>>>()?;
        let greedy: Vec<HamiltonCycle> =
            extractions.iter().flat_map(|e| e.cycles.iter().cloned()).collect();
        rec.metric("cycles", greedy.len()).metric(
            "leftover_max_semidegree",
            extractions.iter().map(|e| e.leftover_max_semidegree).max().unwrap_or(0),
        );
        if let Some((i, e)) = extractions.iter().enumerate().find(|(_, e)| e.cycles.len() < e.target) {
            rec = rec.failed(format!(
                "part {}: {} of {} cycles before the search came back {}",
                i + 2,
                e.cycles.len(),
                e.target,
                e.stopped_by.as_deref().unwrap_or("short")
            ));
        } else if extractions.is_empty() {
            rec = rec.vacuous();
        }
        if !self.record(rec) {
            return Ok(None);
        }

        // (4) D′ = D₁ ∪ leftovers
        let mut dprime = parts[0].clone();
        for e in &extractions {
            dprime = dprime.disjoint_union(&e.leftover)?;
        }
        let dprime_degree = s - greedy.len();
        debug_assert_eq!(dprime.is_regular(), Some(dprime_degree));
        self.capture("dprime", &dprime);

        // (5) matchings of the leftovers
        let mut rec = StageRecord::new(Stage::Matchings);
        let mut matchings: Vec<Vec<(Vertex, Vertex)>> = Vec::new();
        let (mut before_cap, mut bound) = (0usize, 0usize);
        for e in &extractions {
            let m = matching_decompose(&e.leftover, caps.matching_size_cap)?;
            before_cap += m.classes_before_cap();
            bound += m.vizing_bound();
            matchings.extend(m.matchings);
        }
        let t = matchings.len();
        rec.metric("matchings", t)
            .metric("classes_before_cap", before_cap)
            .metric("vizing_bound", bound)
            .metric("dprime_degree", dprime_degree);
        if t > dprime_degree {
            rec = rec.failed(format!(
                "{t} matchings need {t} cycles but D' is only {dprime_degree}-regular"
            ));
        } else if t == 0 {
            rec = rec.vacuous();
        }
        if !self.record(rec) {
            return Ok(None);
        }

        // (6) absorb M_j into P_j, avoiding earlier paths and later matchings
        let mut rec = StageRecord::new(Stage::Absorption);
        let mut later = union_all(n, matchings.iter().flatten().copied())?;
        let mut used = MultiDigraph::empty(n);
        let mut paths: Vec<DirectedPath> = Vec::with_capacity(t);
        for (j, m) in matchings.iter().enumerate() {
            later = later.subtract_edges(m.iter().copied())?;
            let host = dprime.subtract(&used)?.subtract(&later)?;
            match absorb_matching(m, &host, caps.short_path_maxlen, caps.path_vertex_cap) {
                Ok(p) => {
                    used = used.disjoint_union(&union_all(n, path_edges(&p))?)?;
                    paths.push(p);
                }
                Err(err) => {
                    rec = rec.failed(format!("matching {}: {err}", j + 1));
                    break;
                }
            }
        }
        rec.metric("paths", paths.len()).metric(
            "max_path_vertices",
            paths.iter().map(|p| p.vertices.len()).max().unwrap_or(0),
        );
        if t == 0 {
            rec = rec.vacuous();
        }
        if !self.record(rec) {
            return Ok(None);
        }

        // (7) close P_j into H_j, avoiding earlier cycles and later paths
        let mut rec = StageRecord::new(Stage::Completion);
        let mut later = union_all(n, paths.iter().flat_map(path_edges))?;
        let mut spent = MultiDigraph::empty(n);
        let mut closed: Vec<HamiltonCycle> = Vec::with_capacity(t);
        for (j, p) in paths.iter().enumerate() {
            later = later.subtract_edges(path_edges(p))?;
            let host = dprime.subtract(&spent)?.subtract(&later)?;
            match complete_to_hamilton(p, &host, cfg.budget)? {
                SearchOutcome::Found(h) => {
                    spent = spent.disjoint_union(&union_all(n, cycle_edges(&h))?)?;
                    closed.push(h);
                }
                other => {
                    rec = rec.failed(format!(
                        "path {}: Hamilton completion {}",
                        j + 1,
                        outcome_name(&other)
                    ));
                    break;
                }
            }
        }
        rec.metric("cycles", closed.len());
        if t == 0 {
            rec = rec.vacuous();
        }
        if !self.record(rec) {
            return Ok(None);
        }

        // (8) the simple regular remainder D″ ⊆ D₁
        let mut rec = StageRecord::new(Stage::FinalRegular);
        let ddprime = dprime.subtract(&spent)?;
        self.capture("ddprime", &ddprime);
        let degree = dprime_degree - t;
        rec.metric("degree", degree).metric("multiplicity", ddprime.multiplicity());
        debug_assert!(ddprime.is_subgraph_of(&parts[0]));
        let finals = if degree == 0 {
            rec = rec.vacuous();
            Vec::new()
        } else {
            match decompose_regular(&ddprime, cfg.budget)? {
                SearchOutcome::Found(c) => c,
                other => {
                    rec = rec.failed(format!("exact decomposition of D'' {}", outcome_name(&other)));
                    Vec::new()
                }
            }
        };
        if !self.record(rec) {
            return Ok(None);
        }

        let mut all = greedy;
        all.extend(closed);
        all.extend(finals);
        Ok(Some(all))
    }
}

/// Runs the staged pipeline on an `s`-regular multidigraph with multiplicity
/// at most `config.r`. Inputs that violate the preconditions are errors;
/// stage failures are reported in the returned run.
pub fn decompose_multidigraph(d: &MultiDigraph, config: &PipelineConfig) -> Result<PipelineRun> {
    let caps = config.resolve(d.n())?;
    let s = d.is_regular().ok_or(Error::NotRegular)?;
    if s == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if let Some((u, v, m)) = d.pairs().find(|&(_, _, m)| m > config.r) {
        return Err(Error::MultiplicityExceeded {
            tail: u,
            head: v,
            found: m,
            bound: config.r,
        });
    }
    let n = d.n();
    let mut report = PipelineReport {
        directed: true,
        n,
        s,
        config: config.clone(),
        caps,
        attempts: Vec::new(),
        fallback_used: false,
        fallback_detail: None,
        orientation: None,
        outcome: Outcome::Failed,
        cycles: 0,
        verified: false,
    };
    let mut captured = Vec::new();
    // with r = 1 the split is forced, so a retry would repeat the attempt
    let attempts = if config.r == 1 { 1 } else { config.max_retries + 1 };
    for index in 0..attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let mut attempt = Attempt {
            d,
            s,
            cfg: config,
            caps,
            index,
            stages: Vec::new(),
            captured: Vec::new(),
        };
        let result = attempt.run(&mut rng)?;
        let mut stages = attempt.stages;
        captured.append(&mut attempt.captured);
        if let Some(cycles) = result {
            let lists: Vec<Vec<Vertex>> = cycles.iter().map(|c| c.vertices.clone()).collect();
            let v = verify_decomposition(d, &lists);
            let mut rec = StageRecord::new(Stage::Verify);
            rec.metric("cycles", cycles.len());
            if v.accepted {
                stages.push(rec);
                report.attempts.push(AttemptReport {
                    attempt: index,
                    stages,
                    failed_stage: None,
                });
                report.outcome = Outcome::Decomposed;
                report.cycles = cycles.len();
                report.verified = true;
                return Ok(PipelineRun {
                    decomposition: Some(HamiltonDecomposition { cycles }),
                    report,
                    stages: captured,
                });
            }
            let why = v.violation.map_or_else(|| "rejected".to_string(), |x| x.to_string());
            stages.push(rec.failed(why));
        }
        let failed_stage = stages
            .iter()
            .find(|r| r.status == StageStatus::Failed)
            .map(|r| r.stage);
        report.attempts.push(AttemptReport {
            attempt: index,
            stages,
            failed_stage,
        });
    }

    if config.fallback == Fallback::None {
        return Ok(PipelineRun {
            decomposition: None,
            report,
            stages: captured,
        });
    }
    report.fallback_used = true;
    let decomposition = match decompose_regular(d, config.fallback_budget)? {
        SearchOutcome::Found(cycles) => {
            let lists: Vec<Vec<Vertex>> = cycles.iter().map(|c| c.vertices.clone()).collect();
            let v = verify_decomposition(d, &lists);
            assert!(v.accepted, "exact search returned an invalid decomposition: {v:?}");
            report.outcome = Outcome::DecomposedByFallback;
            report.cycles = cycles.len();
            report.verified = true;
            Some(HamiltonDecomposition { cycles })
        }
        SearchOutcome::Absent => {
            report.outcome = Outcome::ProvenNonexistent;
            report.fallback_detail = Some("exhaustive search found no decomposition".into());
            None
        }
        SearchOutcome::Indeterminate => {
            report.outcome = Outcome::Indeterminate;
            report.fallback_detail = Some(format!(
                "exact search exceeded its budget of {} nodes",
                config.fallback_budget
            ));
            None
        }
    };
    Ok(PipelineRun {
        decomposition,
        report,
        stages: captured,
    })
}

/// An `s/2`-regular orientation of an `s`-regular multigraph: the underlying
/// simple graph is orientated almost evenly, a `k`-factor of that orientation
/// is kept, and the even remainder of `G` is split into cycles that are
/// orientated consistently.
pub fn orient_regular(g: &Multigraph, k: usize) -> Result<(MultiDigraph, OrientationReport)> {
    let s = g.is_regular().ok_or(Error::NotRegular)?;
    if s % 2 == 1 {
        return Err(Error::OddDegree { vertex: 0, degree: s });
    }
    let simple = g.underlying_simple();
    let orientation = balanced_orient(&simple)?;
    let mut factor = MultiDigraph::empty(g.n());
    let mut achieved = 0;
    for size in (1..=k.min(s / 2)).rev() {
        if let Ok(f) = extract_factor(&orientation, size) {
            factor = f;
            achieved = size;
            break;
        }
    }
    let remainder = g.subtract(&factor.forget_orientation())?;
    let cycles = cycle_decompose_even(&remainder)?;
    let oriented = factor.disjoint_union(&orient_cycles(g.n(), &cycles)?)?;
    debug_assert_eq!(oriented.is_regular(), Some(s / 2));
    let report = OrientationReport {
        simple_edges: simple.edge_count(),
        factor_k: achieved,
        factor_requested: k,
        remainder_cycles: cycles.len(),
        oriented_degree: s / 2,
        orientation_expands: false,
    };
    Ok((oriented, report))
}

/// Undirected entry point: orientate to an `s/2`-regular multidigraph, run
/// the directed pipeline on it and forget the orientations. The fallback is
/// an exact undirected search on `g` itself.
pub fn decompose_multigraph(g: &Multigraph, config: &PipelineConfig) -> Result<PipelineRun> {
    let caps = config.resolve(g.n())?;
    let s = g.is_regular().ok_or(Error::NotRegular)?;
    if s == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if s % 2 == 1 {
        return Err(Error::OddDegree { vertex: 0, degree: s });
    }
    if let Some((u, v, m)) = g.pairs().find(|&(_, _, m)| m > config.r) {
        return Err(Error::MultiplicityExceeded {
            tail: u,
            head: v,
            found: m,
            bound: config.r,
        });
    }
    let (oriented, mut orientation) = orient_regular(g, caps.factor_k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let cert = certify_outexpander(
        &oriented.underlying_simple(),
        config.params,
        CertMode::Sample {
            samples: config.gate_samples,
            seed: rng.gen(),
        },
    )?;
    orientation.orientation_expands = cert.passed();

    let inner = PipelineConfig {
        fallback: Fallback::None,
        ..config.clone()
    };
    let mut run = decompose_multidigraph(&oriented, &inner)?;
    if config.capture_stages {
        run.stages.insert(0, ("orientation".to_string(), AnyGraph::Directed(oriented)));
    }
    let mut report = run.report;
    report.directed = false;
    report.s = s;
    report.config = config.clone();
    report.orientation = Some(orientation);
    if let Some(dec) = run.decomposition {
        let v = verify_decomposition_undirected(g, &dec.vertex_lists());
        if v.accepted {
            report.verified = true;
            return Ok(PipelineRun {
                decomposition: Some(dec),
                report,
                stages: run.stages,
            });
        }
        if let Some(last) = report.attempts.last_mut() {
            let why = v.violation.map_or_else(|| "rejected".to_string(), |x| x.to_string());
            let mut rec = StageRecord::new(Stage::Verify);
            last.stages.push(rec.metric("cycles", dec.len()).clone().failed(why));
            last.failed_stage = Some(Stage::Verify);
        }
        report.outcome = Outcome::Failed;
        report.verified = false;
        report.cycles = 0;
    }
    if config.fallback == Fallback::None {
        return Ok(PipelineRun {
            decomposition: None,
            report,
            stages: run.stages,
        });
    }
    report.fallback_used = true;
    let decomposition = match decompose_regular_undirected(g, config.fallback_budget)? {
        SearchOutcome::Found(cycles) => {
            let dec = HamiltonDecomposition { cycles };
            let v = verify_decomposition_undirected(g, &dec.vertex_lists());
            assert!(v.accepted, "exact search returned an invalid decomposition: {v:?}");
            report.outcome = Outcome::DecomposedByFallback;
            report.cycles = dec.len();
            report.verified = true;
            Some(dec)
        }
        SearchOutcome::Absent => {
            report.outcome = Outcome::ProvenNonexistent;
            report.fallback_detail = Some("exhaustive search found no decomposition".into());
            None
        }
        SearchOutcome::Indeterminate => {
            report.outcome = Outcome::Indeterminate;
            report.fallback_detail = Some(format!(
                "exact search exceeded its budget of {} nodes",
                config.fallback_budget
            ));
            None
        }
    };
    Ok(PipelineRun {
        decomposition,
        report,
        stages: run.stages,
    })
}

fn degree_bound(n: usize, r: u32, eps: f64) -> f64 {
    r as f64 * n as f64 / 2.0 + eps * n as f64
}

/// Directed minimum-degree entry point: requires `s ≥ rn/2 + εn` and then
/// delegates to [`decompose_multidigraph`].
pub fn decompose_min_degree_digraph(
    d: &MultiDigraph,
    eps: f64,
    config: &PipelineConfig,
) -> Result<PipelineRun> {
    let s = d.is_regular().ok_or(Error::NotRegular)?;
    let n = d.n();
    let required = degree_bound(n, config.r, eps);
    if (s as f64) < required - 1e-9 {
        return Err(Error::DegreeTooLow { vertex: 0, degree: s, required });
    }
    // implied by the multiplicity cap, checked anyway
    let simple = d.underlying_simple();
    let need = (0.5 + eps / config.r as f64) * n as f64;
    for v in 0..n {
        let degree = simple.out_degree(v).min(simple.in_degree(v));
        if (degree as f64) < need - 1e-9 {
            return Err(Error::DegreeTooLow { vertex: v, degree, required: need });
        }
    }
    decompose_multidigraph(d, config)
}

/// Undirected minimum-degree entry point; `s` must be even.
pub fn decompose_min_degree_graph(
    g: &Multigraph,
    eps: f64,
    config: &PipelineConfig,
) -> Result<PipelineRun> {
    let s = g.is_regular().ok_or(Error::NotRegular)?;
    if s % 2 == 1 {
        return Err(Error::OddDegree { vertex: 0, degree: s });
    }
    let n = g.n();
    let required = degree_bound(n, config.r, eps);
    if (s as f64) < required - 1e-9 {
        return Err(Error::DegreeTooLow { vertex: 0, degree: s, required });
    }
    let simple = g.underlying_simple();
    let need = (0.5 + eps / config.r as f64) * n as f64;
    for v in 0..n {
        let degree = simple.degree(v);
        if (degree as f64) < need - 1e-9 {
            return Err(Error::DegreeTooLow { vertex: v, degree, required: need });
        }
    }
    decompose_multigraph(g, config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneFactorisation {
    /// Perfect matchings as pairs `(u, v)` with `u < v`; absent when the
    /// Hamilton decomposition of the even part was not obtained.
    pub matchings: Option<Vec<Vec<(Vertex, Vertex)>>>,
    pub outcome: Outcome,
    /// The run on the even-regular part, absent when that part is empty.
    pub report: Option<PipelineReport>,
}

/// Perfect-matching decomposition of a regular graph on an even number of
/// vertices. For odd `s` a perfect matching is removed first; every Hamilton
/// cycle of the even-regular rest splits into two perfect matchings. `eps`,
/// when given, enforces `s ≥ rn/2 + εn`.
pub fn one_factorise(
    g: &Multigraph,
    eps: Option<f64>,
    config: &PipelineConfig,
) -> Result<OneFactorisation> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("odd vertex count {n}")));
    }
    let s = g.is_regular().ok_or(Error::NotRegular)?;
    if let Some(eps) = eps {
        let required = degree_bound(n, config.r, eps);
        if (s as f64) < required - 1e-9 {
            return Err(Error::DegreeTooLow { vertex: 0, degree: s, required });
        }
    }
    let norm = |u: Vertex, v: Vertex| (u.min(v), u.max(v));
    let mut matchings = Vec::new();
    let mut rest = g.clone();
    if s % 2 == 1 {
        let m = perfect_matching(&g.underlying_simple())
            .map_err(|e| Error::Infeasible(format!("no perfect matching to remove: {e}")))?;
        rest = rest.subtract_edges(m.iter().copied())?;
        matchings.push(m);
    }
    let mut report = None;
    let mut outcome = Outcome::Decomposed;
    if rest.edge_count() > 0 {
        let run = decompose_multigraph(&rest, config)?;
        outcome = run.report.outcome;
        report = Some(run.report);
        let Some(dec) = run.decomposition else {
            return Ok(OneFactorisation {
                matchings: None,
                outcome,
                report,
            });
        };
        for c in &dec.cycles {
            let v = &c.vertices;
            let (mut even, mut odd) = (Vec::new(), Vec::new());
            for i in 0..v.len() {
                let e = norm(v[i], v[(i + 1) % v.len()]);
                if i % 2 == 0 {
                    even.push(e);
                } else {
                    odd.push(e);
                }
            }
            matchings.push(even);
            matchings.push(odd);
        }
    }
    for m in &mut matchings {
        m.sort_unstable();
    }
    let verdict = verify_one_factorisation(g, &matchings);
    assert!(verdict.accepted, "split matchings must factorise G: {verdict:?}");
    Ok(OneFactorisation {
        matchings: Some(matchings),
        outcome,
        report,
    })
}
