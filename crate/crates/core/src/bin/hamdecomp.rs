use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use hamdecomp::expansion::{certify_expander, certify_outexpander, CertMode, ExpansionParams, DEFAULT_SAMPLES};
use hamdecomp::harness::{
    generate, stats, verify_decomposition, verify_decomposition_undirected, AnyGraph, Family, GeneratorSpec,
};
use hamdecomp::pipeline::{
    decompose_min_degree_digraph, decompose_min_degree_graph, decompose_multidigraph, decompose_multigraph,
    one_factorise, Fallback, HamiltonDecomposition, Outcome, PipelineConfig,
};
use hamdecomp::{Error, Result, Vertex};

const ACCEPT: u8 = 0;
const REJECT: u8 = 1;
const INDETERMINATE: u8 = 2;

// stdout writes that tolerate a closed pipe
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "hamdecomp", version, about = "Hamilton decompositions of dense regular (di)graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a regular instance as an edge list.
    Gen(GenArgs),
    /// Certify or refute robust expansion.
    CheckExpander(ExpanderArgs),
    /// Hamilton-decompose a regular graph or digraph.
    Decompose(DecomposeArgs),
    /// Check a decomposition against its host graph.
    Verify(VerifyArgs),
    /// Split a regular graph on an even number of vertices into perfect matchings.
    OneFactorise(FactoriseArgs),
    /// Print degree and multiplicity statistics.
    Stats(StatsArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Degree; implied for the complete families.
    #[arg(long)]
    s: Option<usize>,
    /// Multiplicity cap for the random families.
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    lambda: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the edge list here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sample,
}

#[derive(Args)]
struct ExpanderArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    nu: f64,
    #[arg(long, default_value_t = 0.3)]
    tau: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PipelineArgs {
    /// Multiplicity bound, also the number of split parts.
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    nu: f64,
    #[arg(long, default_value_t = 0.3)]
    tau: f64,
    #[arg(long, default_value = "exact")]
    fallback: Fallback,
    #[arg(long)]
    max_retries: Option<usize>,
    /// Node budget of each search inside the pipeline.
    #[arg(long)]
    budget: Option<u64>,
    /// Node budget of the exact fallback.
    #[arg(long)]
    fallback_budget: Option<u64>,
    /// Require s ≥ rn/2 + εn before running.
    #[arg(long)]
    eps: Option<f64>,
}

impl PipelineArgs {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default().with_r(self.r).with_seed(self.seed).with_fallback(self.fallback);
        cfg.params = ExpansionParams::new(self.nu, self.tau)?;
        if let Some(k) = self.max_retries {
            cfg.max_retries = k;
        }
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        if let Some(b) = self.fallback_budget {
            cfg.fallback_budget = b;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct DecomposeArgs {
    file: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Write the full pipeline report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the decomposition as JSON `{"cycles": [[...]]}`.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write every intermediate graph as an edge list into this directory.
    #[arg(long)]
    dump_stages: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    /// JSON object with a `cycles` array of vertex lists.
    decomposition: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FactoriseArgs {
    file: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Deserialize)]
struct CyclesFile {
    cycles: Vec<Vec<Vertex>>,
}

#[derive(Serialize)]
struct DecomposeSummary<'a> {
    outcome: Outcome,
    verified: bool,
    attempts: usize,
    fallback_used: bool,
    cycles: Vec<&'a [Vertex]>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::CheckExpander(a) => check_expander(a),
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a),
        Command::OneFactorise(a) => factorise(a),
        Command::Stats(a) => print_stats(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(REJECT)
        }
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(std::io::stdout().lock(), "{text}")?;
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn outcome_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Decomposed | Outcome::DecomposedByFallback => ACCEPT,
        Outcome::Indeterminate => INDETERMINATE,
        Outcome::ProvenNonexistent | Outcome::Failed => REJECT,
    }
}

fn gen(a: GenArgs) -> Result<u8> {
    let mut spec = GeneratorSpec::new(a.family, a.n).cap(a.r).lambda(a.lambda).seed(a.seed);
    if let Some(s) = a.s {
        spec = spec.degree(s);
    }
    let g = generate(&spec)?;
    if let Some(path) = &a.out {
        g.write(path)?;
    }
    if a.json {
        print_json(&json!({ "spec": spec, "stats": stats(&g), "graph": g }))?;
    } else if a.out.is_none() {
        let _ = write!(std::io::stdout().lock(), "{}", g.to_text());
    } else {
        let st = stats(&g);
        out!("wrote {} ({} vertices, {} edges)", a.out.unwrap().display(), st.n, st.edges);
    }
    Ok(ACCEPT)
}

fn check_expander(a: ExpanderArgs) -> Result<u8> {
    let params = ExpansionParams::new(a.nu, a.tau)?;
    let mode = match a.mode {
        Mode::Exact => CertMode::Exact,
        Mode::Sample => CertMode::Sample { samples: a.samples, seed: a.seed },
    };
    let cert = match AnyGraph::read(&a.file)? {
        AnyGraph::Directed(d) => certify_outexpander(&d, params, mode)?,
        AnyGraph::Undirected(g) => certify_expander(&g, params, mode)?,
    };
    if a.json {
        print_json(&cert)?;
    } else {
        out!("verdict: {:?}", cert.verdict);
        out!("sets checked: {}", cert.sets_checked);
        if cert.vacuous {
            out!("size band is empty");
        }
        if let Some(w) = &cert.witness {
            out!("witness: {w:?}");
        }
    }
    Ok(if cert.passed() { ACCEPT } else { REJECT })
}

fn decompose(a: DecomposeArgs) -> Result<u8> {
    let mut cfg = a.pipeline.config()?;
    cfg.capture_stages = a.dump_stages.is_some();
    let run = match (AnyGraph::read(&a.file)?, a.pipeline.eps) {
        (AnyGraph::Directed(d), None) => decompose_multidigraph(&d, &cfg)?,
        (AnyGraph::Directed(d), Some(eps)) => decompose_min_degree_digraph(&d, eps, &cfg)?,
        (AnyGraph::Undirected(g), None) => decompose_multigraph(&g, &cfg)?,
        (AnyGraph::Undirected(g), Some(eps)) => decompose_min_degree_graph(&g, eps, &cfg)?,
    };
    if let Some(dir) = &a.dump_stages {
        std::fs::create_dir_all(dir)?;
        for (name, g) in &run.stages {
            g.write(dir.join(format!("{name}.txt")))?;
        }
    }
    if let Some(path) = &a.report {
        write_json(path, &run.report)?;
    }
    let empty = HamiltonDecomposition::default();
    let dec = run.decomposition.as_ref().unwrap_or(&empty);
    if let Some(path) = &a.out {
        write_json(path, dec)?;
    }
    let report = &run.report;
    if a.json {
        print_json(&DecomposeSummary {
            outcome: report.outcome,
            verified: report.verified,
            attempts: report.attempts.len(),
            fallback_used: report.fallback_used,
            cycles: dec.cycles.iter().map(|c| c.vertices.as_slice()).collect(),
        })?;
    } else {
        out!("outcome: {:?}", report.outcome);
        out!("attempts: {}", report.attempts.len());
        if let Some(why) = &report.fallback_detail {
            out!("fallback: {why}");
        }
        for c in &dec.cycles {
            out!("{}", join(&c.vertices));
        }
    }
    Ok(outcome_code(report.outcome))
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let host = AnyGraph::read(&a.graph)?;
    let text = std::fs::read_to_string(&a.decomposition)?;
    let cand: CyclesFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let verdict = match &host {
        AnyGraph::Directed(d) => verify_decomposition(d, &cand.cycles),
        AnyGraph::Undirected(g) => verify_decomposition_undirected(g, &cand.cycles),
    };
    if a.json {
        print_json(&verdict)?;
    } else if let Some(v) = &verdict.violation {
        out!("reject: {v}");
    } else {
        out!("accept: {} cycles", verdict.parts);
    }
    Ok(if verdict.accepted { ACCEPT } else { REJECT })
}

fn factorise(a: FactoriseArgs) -> Result<u8> {
    let cfg = a.pipeline.config()?;
    let AnyGraph::Undirected(g) = AnyGraph::read(&a.file)? else {
        return Err(Error::InvalidParameter("one-factorise needs an undirected graph".into()));
    };
    let f = one_factorise(&g, a.pipeline.eps, &cfg)?;
    if a.json {
        print_json(&json!({ "outcome": f.outcome, "matchings": f.matchings }))?;
    } else {
        out!("outcome: {:?}", f.outcome);
        for m in f.matchings.iter().flatten() {
            let pairs: Vec<String> = m.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            out!("{}", pairs.join(" "));
        }
    }
    Ok(outcome_code(f.outcome))
}

fn print_stats(a: StatsArgs) -> Result<u8> {
    let st = stats(&AnyGraph::read(&a.file)?);
    if a.json {
        print_json(&st)?;
    } else {
        out!("{}", if st.directed { "digraph" } else { "graph" });
        out!("n: {}", st.n);
        out!("edges: {}", st.edges);
        out!("multiplicity: {}", st.multiplicity);
        match st.regular {
            Some(s) => out!("regular: {s}"),
            None => out!("regular: no"),
        }
        out!("degree: {}..{}", st.min_degree, st.max_degree);
        out!("density: {:.4}", st.density);
    }
    Ok(ACCEPT)
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
