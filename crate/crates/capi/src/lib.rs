//! C ABI over the core toolkit: opaque handles, integer status codes, and
//! a per-thread error message. All pointers are borrowed unless the
//! function name says create/destroy; every created handle must be
//! released with the matching destroy call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use jtv_core::distributed;
use jtv_core::filters::{apply_polynomial_filter, PolynomialFilter};
use jtv_core::graph::{Graph, MatrixKind};
use jtv_core::signal::TemporalGraphSignal;
use jtv_core::spectral::{ijft, jft, JointBasis};
use jtv_core::variation;
use jtv_core::{Error, io};
use ndarray::Array2;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JtvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NumericalError = 4,
    Panic = 5,
}

/// Opaque weighted graph handle.
pub struct JtvGraph(Graph);

/// Opaque N x T temporal signal handle (complex-valued internally).
pub struct JtvSignal(TemporalGraphSignal);

/// Opaque bivariate polynomial filter handle.
pub struct JtvFilter(PolynomialFilter);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> JtvStatus {
    match e {
        Error::Parse { .. } | Error::Schema(_) | Error::Io(_) => JtvStatus::ParseError,
        Error::DefectiveMatrix(_) | Error::Linalg(_) | Error::NonPsdModel(_) => {
            JtvStatus::NumericalError
        }
        _ => JtvStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> JtvStatus {
    let status = status_of(&e);
    set_error(&e.to_string());
    status
}

fn guarded(f: impl FnOnce() -> JtvStatus) -> JtvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            JtvStatus::Panic
        }
    }
}

fn kind_from(representation: i32) -> Result<MatrixKind, Error> {
    match representation {
        0 => Ok(MatrixKind::Laplacian),
        1 => Ok(MatrixKind::NormalizedLaplacian),
        2 => Ok(MatrixKind::Adjacency),
        other => Err(Error::InvalidArgument(format!(
            "representation must be 0 (laplacian), 1 (normalized), or 2 (adjacency), got {other}"
        ))),
    }
}

macro_rules! require {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null pointer argument");
                return JtvStatus::NullPointer;
            }
        }
    };
}

fn deliver<T>(out: *mut *mut T, value: T) -> JtvStatus {
    if out.is_null() {
        set_error("null output pointer");
        return JtvStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    JtvStatus::Ok
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn jtv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Format-version marker, currently "v1".
#[no_mangle]
pub extern "C" fn jtv_version() -> *const c_char {
    static VERSION: &CStr = c"v1";
    VERSION.as_ptr()
}

/// Build a graph from parallel edge arrays of 0-based endpoints.
/// `weights` may be null, in which case every edge has weight 1.
#[no_mangle]
pub extern "C" fn jtv_graph_create(
    n_nodes: usize,
    edges_from: *const usize,
    edges_to: *const usize,
    weights: *const f64,
    n_edges: usize,
    directed: i32,
    out: *mut *mut JtvGraph,
) -> JtvStatus {
    guarded(|| {
        if n_edges > 0 && (edges_from.is_null() || edges_to.is_null()) {
            set_error("null edge array");
            return JtvStatus::NullPointer;
        }
        let mut edges = Vec::with_capacity(n_edges);
        for i in 0..n_edges {
            let w = if weights.is_null() {
                1.0
            } else {
                unsafe { *weights.add(i) }
            };
            edges.push(unsafe { (*edges_from.add(i), *edges_to.add(i), w) });
        }
        match Graph::new(n_nodes, edges, directed != 0) {
            Ok(g) => deliver(out, JtvGraph(g)),
            Err(e) => fail(e),
        }
    })
}

/// Parse the 1-based `i j [w]` edge-list format.
#[no_mangle]
pub extern "C" fn jtv_graph_parse(text: *const c_char, out: *mut *mut JtvGraph) -> JtvStatus {
    guarded(|| {
        if text.is_null() {
            set_error("null text pointer");
            return JtvStatus::NullPointer;
        }
        let s = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("graph text is not valid UTF-8");
                return JtvStatus::ParseError;
            }
        };
        match io::parse_graph(s) {
            Ok(g) => deliver(out, JtvGraph(g)),
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub extern "C" fn jtv_graph_node_count(graph: *const JtvGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.n_nodes())
}

#[no_mangle]
pub extern "C" fn jtv_graph_edge_count(graph: *const JtvGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.n_edges())
}

#[no_mangle]
pub extern "C" fn jtv_graph_destroy(graph: *mut JtvGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Build a real signal from a row-major `n_nodes x period` buffer.
#[no_mangle]
pub extern "C" fn jtv_signal_create_real(
    values: *const f64,
    n_nodes: usize,
    period: usize,
    out: *mut *mut JtvSignal,
) -> JtvStatus {
    guarded(|| {
        if values.is_null() {
            set_error("null values pointer");
            return JtvStatus::NullPointer;
        }
        if n_nodes == 0 || period == 0 {
            return fail(Error::InvalidArgument(
                "signal dimensions must be positive".into(),
            ));
        }
        let mut m = Array2::zeros((n_nodes, period));
        for i in 0..n_nodes {
            for t in 0..period {
                m[[i, t]] = unsafe { *values.add(i * period + t) };
            }
        }
        deliver(out, JtvSignal(TemporalGraphSignal::from_real(m)))
    })
}

#[no_mangle]
pub extern "C" fn jtv_signal_node_count(signal: *const JtvSignal) -> usize {
    unsafe { signal.as_ref() }.map_or(0, |s| s.0.n_nodes())
}

#[no_mangle]
pub extern "C" fn jtv_signal_period(signal: *const JtvSignal) -> usize {
    unsafe { signal.as_ref() }.map_or(0, |s| s.0.period())
}

/// Read one complex entry.
#[no_mangle]
pub extern "C" fn jtv_signal_get(
    signal: *const JtvSignal,
    node: usize,
    instant: usize,
    re: *mut f64,
    im: *mut f64,
) -> JtvStatus {
    guarded(|| {
        let s = require!(signal);
        if node >= s.0.n_nodes() || instant >= s.0.period() {
            return fail(Error::InvalidArgument(format!(
                "entry ({node}, {instant}) outside {}x{} signal",
                s.0.n_nodes(),
                s.0.period()
            )));
        }
        if re.is_null() || im.is_null() {
            set_error("null output pointer");
            return JtvStatus::NullPointer;
        }
        let v = s.0.get(node, instant);
        unsafe {
            *re = v.re;
            *im = v.im;
        }
        JtvStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn jtv_signal_destroy(signal: *mut JtvSignal) {
    if !signal.is_null() {
        drop(unsafe { Box::from_raw(signal) });
    }
}

fn transform(
    graph: *const JtvGraph,
    representation: i32,
    signal: *const JtvSignal,
    out: *mut *mut JtvSignal,
    inverse: bool,
) -> JtvStatus {
    guarded(|| {
        let g = require!(graph);
        let x = require!(signal);
        let kind = match kind_from(representation) {
            Ok(k) => k,
            Err(e) => return fail(e),
        };
        let jb = match JointBasis::new(&g.0, x.0.period(), kind) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        let result = if inverse { ijft(&x.0, &jb) } else { jft(&x.0, &jb) };
        match result {
            Ok(y) => deliver(out, JtvSignal(y)),
            Err(e) => fail(e),
        }
    })
}

/// Joint Fourier transform; `representation` selects the graph matrix
/// (0 Laplacian, 1 normalized, 2 adjacency).
#[no_mangle]
pub extern "C" fn jtv_jft(
    graph: *const JtvGraph,
    representation: i32,
    signal: *const JtvSignal,
    out: *mut *mut JtvSignal,
) -> JtvStatus {
    transform(graph, representation, signal, out, false)
}

/// Inverse joint Fourier transform.
#[no_mangle]
pub extern "C" fn jtv_ijft(
    graph: *const JtvGraph,
    representation: i32,
    signal: *const JtvSignal,
    out: *mut *mut JtvSignal,
) -> JtvStatus {
    transform(graph, representation, signal, out, true)
}

/// Global smoothness S_p of a real signal.
#[no_mangle]
pub extern "C" fn jtv_dirichlet_form(
    graph: *const JtvGraph,
    signal: *const JtvSignal,
    p: f64,
    out: *mut f64,
) -> JtvStatus {
    guarded(|| {
        let g = require!(graph);
        let x = require!(signal);
        if out.is_null() {
            set_error("null output pointer");
            return JtvStatus::NullPointer;
        }
        match variation::dirichlet_form(&x.0, &g.0, p) {
            Ok(v) => {
                unsafe { *out = v };
                JtvStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Build a polynomial filter from a row-major `(K+1) x (L+1)` coefficient
/// buffer.
#[no_mangle]
pub extern "C" fn jtv_filter_create(
    coeffs: *const f64,
    k_order: usize,
    l_order: usize,
    representation: i32,
    out: *mut *mut JtvFilter,
) -> JtvStatus {
    guarded(|| {
        if coeffs.is_null() {
            set_error("null coefficient pointer");
            return JtvStatus::NullPointer;
        }
        let kind = match kind_from(representation) {
            Ok(k) => k,
            Err(e) => return fail(e),
        };
        let mut m = Array2::zeros((k_order + 1, l_order + 1));
        for k in 0..=k_order {
            for l in 0..=l_order {
                m[[k, l]] = unsafe { *coeffs.add(k * (l_order + 1) + l) };
            }
        }
        deliver(out, JtvFilter(PolynomialFilter::new(m, kind)))
    })
}

#[no_mangle]
pub extern "C" fn jtv_filter_destroy(filter: *mut JtvFilter) {
    if !filter.is_null() {
        drop(unsafe { Box::from_raw(filter) });
    }
}

/// Matrix-free application of a polynomial filter.
#[no_mangle]
pub extern "C" fn jtv_filter_apply(
    filter: *const JtvFilter,
    graph: *const JtvGraph,
    signal: *const JtvSignal,
    out: *mut *mut JtvSignal,
) -> JtvStatus {
    guarded(|| {
        let f = require!(filter);
        let g = require!(graph);
        let x = require!(signal);
        match apply_polynomial_filter(&x.0, &f.0, &g.0, x.0.period()) {
            Ok(y) => deliver(out, JtvSignal(y)),
            Err(e) => fail(e),
        }
    })
}

/// Run the distributed message-passing simulation of a polynomial filter;
/// `out_total` receives the charged communication total (nullable).
#[no_mangle]
pub extern "C" fn jtv_filter_simulate(
    filter: *const JtvFilter,
    graph: *const JtvGraph,
    signal: *const JtvSignal,
    out: *mut *mut JtvSignal,
    out_total: *mut u64,
) -> JtvStatus {
    guarded(|| {
        let f = require!(filter);
        let g = require!(graph);
        let x = require!(signal);
        match distributed::simulate_polynomial_filter(&g.0, x.0.period(), &f.0, &x.0) {
            Ok((y, ledger)) => {
                if !out_total.is_null() {
                    unsafe { *out_total = ledger.total };
                }
                deliver(out, JtvSignal(y))
            }
            Err(e) => fail(e),
        }
    })
}

/// Closed-form communication cost `2MTK + (K+1)NTL`.
#[no_mangle]
pub extern "C" fn jtv_comm_cost(n: u64, m: u64, t: u64, k: u64, l: u64) -> u64 {
    distributed::comm_cost(n, m, t, k, l)
}
