//! C interface to `hamdecomp`.
//!
//! Graphs and decompositions cross the boundary as opaque handles that the
//! caller releases with the matching `_free` function. Every fallible call
//! returns an [`HdStatus`]; on failure, [`hd_last_error`] describes the cause
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hamdecomp::expansion::{certify_expander, certify_outexpander, CertMode, ExpansionParams};
use hamdecomp::harness::{verify_decomposition, verify_decomposition_undirected, AnyGraph};
use hamdecomp::pipeline::{decompose_multidigraph, decompose_multigraph, Fallback, Outcome, PipelineConfig, PipelineRun};
use hamdecomp::{Error, MultiDigraph, Multigraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// The input violates a precondition such as regularity or the multiplicity bound.
    Precondition = 4,
    /// A check ran to completion and rejected its input.
    Rejected = 5,
    /// Exhaustive search proved that no decomposition exists.
    Nonexistent = 6,
    /// Search budgets ran out before an answer was found.
    Indeterminate = 7,
    /// The pipeline failed with the fallback disabled.
    Failed = 8,
    Panic = 9,
}

/// An immutable graph or digraph.
pub struct HdGraph {
    inner: AnyGraph,
}

/// Outcome of a decomposition run, including the replay report.
pub struct HdDecomposition {
    run: PipelineRun,
}

/// Pipeline settings. Obtain defaults from [`hd_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HdConfig {
    /// Multiplicity bound and number of split parts.
    pub r: u32,
    pub seed: u64,
    pub nu: f64,
    pub tau: f64,
    pub max_retries: u32,
    /// Fall back to exact search when the pipeline fails.
    pub exact_fallback: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> HdStatus {
    match e {
        Error::Parse { .. } | Error::Io(_) => HdStatus::ParseError,
        Error::InvalidParameter(_) | Error::VertexOutOfRange { .. } | Error::Loop(_) => HdStatus::InvalidArgument,
        _ => HdStatus::Precondition,
    }
}

fn fail(e: Error) -> HdStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> HdStatus) -> HdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            HdStatus::Panic
        }
    }
}

fn null(what: &str) -> HdStatus {
    set_error(format!("{what} is null"));
    HdStatus::NullPointer
}

fn out_string(s: String, out: *mut *mut c_char) -> HdStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HdStatus::Ok
        }
        Err(_) => {
            set_error("string contains an interior NUL");
            HdStatus::InvalidArgument
        }
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses the plain-text edge-list format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_parse(text: *const c_char, out: *mut *mut HdGraph) -> HdStatus {
    guard(|| {
        if text.is_null() {
            return null("text");
        }
        if out.is_null() {
            return null("out");
        }
        let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
            set_error("text is not valid UTF-8");
            return HdStatus::InvalidArgument;
        };
        match AnyGraph::parse(text) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(HdGraph { inner })) };
                HdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds a graph from `len` edge copies `(tails[i], heads[i])`. Undirected
/// edges are unordered; repeated entries add multiplicity.
///
/// # Safety
/// `tails` and `heads` must point to `len` readable elements each (or be
/// anything when `len` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_from_edges(
    n: usize,
    directed: bool,
    tails: *const usize,
    heads: *const usize,
    len: usize,
    out: *mut *mut HdGraph,
) -> HdStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if len > 0 && (tails.is_null() || heads.is_null()) {
            return null("edge arrays");
        }
        let (t, h) = if len == 0 {
            (&[][..], &[][..])
        } else {
            unsafe { (std::slice::from_raw_parts(tails, len), std::slice::from_raw_parts(heads, len)) }
        };
        let edges = t.iter().copied().zip(h.iter().copied());
        let built = if directed {
            MultiDigraph::from_edges(n, edges).map(AnyGraph::Directed)
        } else {
            Multigraph::from_edges(n, edges).map(AnyGraph::Undirected)
        };
        match built {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(HdGraph { inner })) };
                HdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `g` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_free(g: *mut HdGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_n(g: *const HdGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.inner.n())
}

/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_is_directed(g: *const HdGraph) -> bool {
    unsafe { g.as_ref() }.is_some_and(|g| g.inner.is_directed())
}

/// Writes the edge-list text; release it with [`hd_string_free`].
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hd_graph_to_text(g: *const HdGraph, out: *mut *mut c_char) -> HdStatus {
    guard(|| {
        let Some(g) = (unsafe { g.as_ref() }) else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        out_string(g.inner.to_text(), out)
    })
}

/// Certifies robust (`nu`, `tau`)-(out)expansion of a simple graph. With
/// `exact` false, `samples` random sets drawn from `seed` are tested.
/// Returns `HD_STATUS_OK` on a pass and `HD_STATUS_REJECTED` on a failure;
/// the certificate JSON, witness included, goes to `certificate_json` when
/// it is not NULL.
///
/// # Safety
/// `g` must be a live graph handle; `certificate_json` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hd_check_expander(
    g: *const HdGraph,
    nu: f64,
    tau: f64,
    exact: bool,
    samples: usize,
    seed: u64,
    certificate_json: *mut *mut c_char,
) -> HdStatus {
    guard(|| {
        let Some(g) = (unsafe { g.as_ref() }) else {
            return null("graph");
        };
        let params = match ExpansionParams::new(nu, tau) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        let mode = if exact { CertMode::Exact } else { CertMode::Sample { samples, seed } };
        let cert = match &g.inner {
            AnyGraph::Directed(d) => certify_outexpander(d, params, mode),
            AnyGraph::Undirected(u) => certify_expander(u, params, mode),
        };
        let cert = match cert {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        if !certificate_json.is_null() {
            let json = serde_json::to_string(&cert).expect("certificates serialize");
            let s = out_string(json, certificate_json);
            if s != HdStatus::Ok {
                return s;
            }
        }
        if cert.passed() {
            HdStatus::Ok
        } else {
            set_error("graph is not a robust expander");
            HdStatus::Rejected
        }
    })
}

#[no_mangle]
pub extern "C" fn hd_config_default() -> HdConfig {
    let d = PipelineConfig::default();
    HdConfig {
        r: d.r,
        seed: d.seed,
        nu: d.params.nu,
        tau: d.params.tau,
        max_retries: d.max_retries as u32,
        exact_fallback: d.fallback == Fallback::Exact,
    }
}

fn config_from(c: &HdConfig) -> Result<PipelineConfig, Error> {
    let fallback = if c.exact_fallback { Fallback::Exact } else { Fallback::None };
    let mut cfg = PipelineConfig::default().with_r(c.r).with_seed(c.seed).with_fallback(fallback);
    cfg.params = ExpansionParams::new(c.nu, c.tau)?;
    cfg.max_retries = c.max_retries as usize;
    Ok(cfg)
}

/// Runs the decomposition pipeline. `config` may be NULL for defaults.
///
/// A handle is written to `out` whenever the run completes, whatever its
/// outcome; the status then reports the outcome (`HD_STATUS_OK` for a
/// verified decomposition). On argument or precondition errors `out` is
/// left untouched.
///
/// # Safety
/// `g` must be a live graph handle; `config` NULL or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hd_decompose(
    g: *const HdGraph,
    config: *const HdConfig,
    out: *mut *mut HdDecomposition,
) -> HdStatus {
    guard(|| {
        let Some(g) = (unsafe { g.as_ref() }) else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        let c = unsafe { config.as_ref() }.copied().unwrap_or_else(|| hd_config_default());
        let cfg = match config_from(&c) {
            Ok(cfg) => cfg,
            Err(e) => return fail(e),
        };
        let run = match &g.inner {
            AnyGraph::Directed(d) => decompose_multidigraph(d, &cfg),
            AnyGraph::Undirected(u) => decompose_multigraph(u, &cfg),
        };
        let run = match run {
            Ok(run) => run,
            Err(e) => return fail(e),
        };
        let status = match run.report.outcome {
            Outcome::Decomposed | Outcome::DecomposedByFallback => HdStatus::Ok,
            Outcome::ProvenNonexistent => HdStatus::Nonexistent,
            Outcome::Indeterminate => HdStatus::Indeterminate,
            Outcome::Failed => HdStatus::Failed,
        };
        if status != HdStatus::Ok {
            set_error(format!("no decomposition: {:?}", run.report.outcome));
        }
        unsafe { *out = Box::into_raw(Box::new(HdDecomposition { run })) };
        status
    })
}

/// # Safety
/// `d` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hd_decomposition_free(d: *mut HdDecomposition) {
    if !d.is_null() {
        drop(unsafe { Box::from_raw(d) });
    }
}

/// Number of Hamilton cycles; 0 when the run produced none.
///
/// # Safety
/// `d` must be NULL or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn hd_decomposition_cycle_count(d: *const HdDecomposition) -> usize {
    unsafe { d.as_ref() }
        .and_then(|d| d.run.decomposition.as_ref())
        .map_or(0, |dec| dec.len())
}

/// Copies cycle `index` into `buf`, which must hold `hd_graph_n` entries.
///
/// # Safety
/// `d` must be a live decomposition handle; `buf` must point to `cap`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn hd_decomposition_cycle(
    d: *const HdDecomposition,
    index: usize,
    buf: *mut usize,
    cap: usize,
) -> HdStatus {
    guard(|| {
        let Some(d) = (unsafe { d.as_ref() }) else {
            return null("decomposition");
        };
        if buf.is_null() {
            return null("buf");
        }
        let Some(cycle) = d.run.decomposition.as_ref().and_then(|dec| dec.cycles.get(index)) else {
            set_error(format!("no cycle with index {index}"));
            return HdStatus::InvalidArgument;
        };
        if cap < cycle.vertices.len() {
            set_error(format!("buffer holds {cap} entries, cycle has {}", cycle.vertices.len()));
            return HdStatus::InvalidArgument;
        }
        unsafe { ptr::copy_nonoverlapping(cycle.vertices.as_ptr(), buf, cycle.vertices.len()) };
        HdStatus::Ok
    })
}

/// The full run report as JSON; release it with [`hd_string_free`].
///
/// # Safety
/// `d` must be a live decomposition handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hd_decomposition_report_json(d: *const HdDecomposition, out: *mut *mut c_char) -> HdStatus {
    guard(|| {
        let Some(d) = (unsafe { d.as_ref() }) else {
            return null("decomposition");
        };
        if out.is_null() {
            return null("out");
        }
        out_string(serde_json::to_string(&d.run.report).expect("reports serialize"), out)
    })
}

/// Independently re-checks `d` against `g`. `HD_STATUS_OK` means accepted,
/// `HD_STATUS_REJECTED` names the first violation in [`hd_last_error`].
/// A run without cycles is rejected.
///
/// # Safety
/// `g` and `d` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn hd_verify(g: *const HdGraph, d: *const HdDecomposition) -> HdStatus {
    guard(|| {
        let Some(g) = (unsafe { g.as_ref() }) else {
            return null("graph");
        };
        let Some(d) = (unsafe { d.as_ref() }) else {
            return null("decomposition");
        };
        let Some(dec) = &d.run.decomposition else {
            set_error("run produced no decomposition");
            return HdStatus::Rejected;
        };
        let cycles = dec.vertex_lists();
        let verdict = match &g.inner {
            AnyGraph::Directed(x) => verify_decomposition(x, &cycles),
            AnyGraph::Undirected(x) => verify_decomposition_undirected(x, &cycles),
        };
        match verdict.violation {
            None => HdStatus::Ok,
            Some(v) => {
                set_error(v.to_string());
                HdStatus::Rejected
            }
        }
    })
}
