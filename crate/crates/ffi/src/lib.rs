//! C ABI over the `ctoqw` library.
//!
//! Every function returns a [`CtoqwStatus`]; results go through out-pointers.
//! Graphs and generators are opaque heap handles released with the matching
//! `*_free` function. On failure a message is available from
//! [`ctoqw_last_error_message`] on the same thread. Matrices cross the
//! boundary as separate row-major real and imaginary `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ctoqw::numerics::{c, validate_density};
use ctoqw::steady::{classify_steady_state, solve_steady_state, Classification};
use ctoqw::{ComplexMatrix, Error, Family, Graph, Liouvillian, Method, Tolerances};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtoqwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtoqwFamily {
    Cycle = 0,
    Path = 1,
    Star = 2,
    Complete = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtoqwMethod {
    /// Dense matrix exponential.
    Expm = 0,
    /// Adaptive Dormand-Prince integration.
    Rk = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtoqwClassification {
    MaximallyMixed = 0,
    CoherentLimit = 1,
    NonUnique = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CtoqwGraphClass {
    pub connected: bool,
    pub regular: bool,
    pub doubly_stochastic_m: bool,
    pub components: usize,
}

/// Summary of a steady-state solve. Fields that need a unique steady state
/// are NaN when `unique` is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtoqwSteadySummary {
    pub dim: usize,
    pub kernel_dim: usize,
    pub unique: bool,
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
    pub residual: f64,
    pub distance_to_mixed: f64,
    pub classification: CtoqwClassification,
    /// False when the solution contradicts the structural expectations.
    pub consistent: bool,
}

/// Opaque graph handle.
pub struct CtoqwGraph {
    graph: Graph,
}

/// Opaque generator handle; keeps a copy of its graph.
pub struct CtoqwLiouvillian {
    graph: Graph,
    lio: Liouvillian,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

struct Failure(CtoqwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Json(_) => CtoqwStatus::Parse,
            Error::NonFinite | Error::StepUnderflow { .. } | Error::EmptyKernel { .. } => CtoqwStatus::Numerical,
            _ => CtoqwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CtoqwStatus::NullPointer, format!("{what} is null"))
}

fn too_small(what: &str, need: usize, got: usize) -> Failure {
    Failure(CtoqwStatus::BufferTooSmall, format!("{what} needs {need} entries, got {got}"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CtoqwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CtoqwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            CtoqwStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn boxed_graph(graph: Graph) -> *mut CtoqwGraph {
    Box::into_raw(Box::new(CtoqwGraph { graph }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ctoqw_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message describing the last failure on this thread; empty after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ctoqw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a standard graph. Star graphs take the number of edges as
/// `size` and put the hub at vertex 0.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_generate(
    family: CtoqwFamily,
    size: usize,
    out: *mut *mut CtoqwGraph,
) -> CtoqwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let family = match family {
            CtoqwFamily::Cycle => Family::Cycle,
            CtoqwFamily::Path => Family::Path,
            CtoqwFamily::Star => Family::Star,
            CtoqwFamily::Complete => Family::Complete,
        };
        let g = Graph::generate(family, size)?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` entries).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut CtoqwGraph,
) -> CtoqwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = slice(edges, 2 * edge_count, "edges")?;
        let g = Graph::new(n, flat.chunks_exact(2).map(|p| (p[0], p[1])))?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Parses the edge-list text format (`j k` per line, optional `n <count>`
/// header, `#` comments).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_parse(text: *const c_char, out: *mut *mut CtoqwGraph) -> CtoqwStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s =
            CStr::from_ptr(text).to_str().map_err(|_| Failure(CtoqwStatus::Parse, "graph text is not UTF-8".into()))?;
        let g = Graph::parse_edge_list(s)?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_free(g: *mut CtoqwGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_vertex_count(g: *const CtoqwGraph, out: *mut usize) -> CtoqwStatus {
    guard(|| write_out(out, as_ref(g, "graph")?.graph.vertex_count(), "out"))
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_edge_count(g: *const CtoqwGraph, out: *mut usize) -> CtoqwStatus {
    guard(|| write_out(out, as_ref(g, "graph")?.graph.edge_count(), "out"))
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_graph_classify(g: *const CtoqwGraph, out: *mut CtoqwGraphClass) -> CtoqwStatus {
    guard(|| {
        let graph = &as_ref(g, "graph")?.graph;
        let class = graph.classify();
        let value = CtoqwGraphClass {
            connected: class.connected,
            regular: class.regular,
            doubly_stochastic_m: class.doubly_stochastic_m,
            components: graph.component_count(),
        };
        write_out(out, value, "out")
    })
}

/// Dimension of the commutant of the graph's jump operators.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_commutant_dimension(g: *const CtoqwGraph, out: *mut usize) -> CtoqwStatus {
    guard(|| {
        let set = ctoqw::LindbladSet::from_graph(&as_ref(g, "graph")?.graph)?;
        write_out(out, ctoqw::commutant_dimension(&set)?.dimension, "out")
    })
}

/// Builds the open-walk generator of a graph. Fails on isolated vertices.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_liouvillian_build(g: *const CtoqwGraph, out: *mut *mut CtoqwLiouvillian) -> CtoqwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = as_ref(g, "graph")?.graph.clone();
        let lio = Liouvillian::from_graph(&graph)?;
        write_out(out, Box::into_raw(Box::new(CtoqwLiouvillian { graph, lio })), "out")
    })
}

/// Releases a generator handle. Null is ignored.
///
/// # Safety
/// `l` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_liouvillian_free(l: *mut CtoqwLiouvillian) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Number of vertices `n`; density matrices have `n * n` entries.
///
/// # Safety
/// `l` must be a live generator handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_liouvillian_dim(l: *const CtoqwLiouvillian, out: *mut usize) -> CtoqwStatus {
    guard(|| write_out(out, as_ref(l, "liouvillian")?.lio.dim, "out"))
}

/// Solves for the steady state with default tolerances.
///
/// The summary is always written. When the steady state is unique it is
/// also written row-major into `re` and `im`, each of length `len >= n * n`;
/// pass `len = 0` to request only the summary.
///
/// # Safety
/// `l` must be a live generator handle; `summary` must be writable; `re`
/// and `im` must each hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_steady_state(
    l: *const CtoqwLiouvillian,
    re: *mut f64,
    im: *mut f64,
    len: usize,
    summary: *mut CtoqwSteadySummary,
) -> CtoqwStatus {
    guard(|| {
        let handle = as_ref(l, "liouvillian")?;
        if summary.is_null() {
            return Err(null("summary"));
        }
        let n = handle.lio.dim;
        if len != 0 && len < n * n {
            return Err(too_small("steady-state buffer", n * n, len));
        }
        let tol = Tolerances::default();
        let report = classify_steady_state(&handle.graph, solve_steady_state(&handle.lio, &tol)?, &tol);
        let value = CtoqwSteadySummary {
            dim: n,
            kernel_dim: report.kernel_dim,
            unique: report.unique,
            positive_definite: report.positive_definite,
            min_eigenvalue: report.min_eigenvalue.unwrap_or(f64::NAN),
            residual: report.residual.unwrap_or(f64::NAN),
            distance_to_mixed: report.distance_to_mixed.unwrap_or(f64::NAN),
            classification: match report.classification {
                Classification::MaximallyMixed => CtoqwClassification::MaximallyMixed,
                Classification::CoherentLimit => CtoqwClassification::CoherentLimit,
                Classification::NonUnique => CtoqwClassification::NonUnique,
            },
            consistent: report.consistency.as_ref().is_none_or(|c| c.consistent),
        };
        if let (Some(rho), true) = (&report.rho_inf, len != 0) {
            write_matrix(rho.matrix(), slice_mut(re, len, "re")?, slice_mut(im, len, "im")?);
        }
        write_out(summary, value, "summary")
    })
}

fn write_matrix(m: &ComplexMatrix, re: &mut [f64], im: &mut [f64]) {
    let n = m.ncols();
    for r in 0..m.nrows() {
        for col in 0..n {
            re[r * n + col] = m[(r, col)].re;
            im[r * n + col] = m[(r, col)].im;
        }
    }
}

/// Evolves the density matrix given row-major in `rho_re`/`rho_im`
/// (`n * n` entries each) to each of the `n_times` ascending, non-negative
/// `times`. State `i` is written row-major at offset `i * n * n` of
/// `out_re`/`out_im`, which need `out_len >= n_times * n * n` entries.
///
/// # Safety
/// All pointers must reference buffers of the stated lengths.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ctoqw_evolve(
    l: *const CtoqwLiouvillian,
    rho_re: *const f64,
    rho_im: *const f64,
    times: *const f64,
    n_times: usize,
    method: CtoqwMethod,
    out_re: *mut f64,
    out_im: *mut f64,
    out_len: usize,
) -> CtoqwStatus {
    guard(|| {
        let handle = as_ref(l, "liouvillian")?;
        let n = handle.lio.dim;
        let nn = n * n;
        let re = slice(rho_re, nn, "rho_re")?;
        let im = slice(rho_im, nn, "rho_im")?;
        let times = slice(times, n_times, "times")?;
        if out_len < n_times * nn {
            return Err(too_small("output buffer", n_times * nn, out_len));
        }
        let out_re = slice_mut(out_re, out_len, "out_re")?;
        let out_im = slice_mut(out_im, out_len, "out_im")?;
        let rho0 = validate_density(&ComplexMatrix::from_fn(n, n, |r, col| c(re[r * n + col], im[r * n + col])))?;
        let method = match method {
            CtoqwMethod::Expm => Method::Expm,
            CtoqwMethod::Rk => Method::RkAdaptive,
        };
        let traj = ctoqw::evolve_ctoqw(&handle.lio, &rho0, times, method, &Tolerances::default())?;
        for (i, rho) in traj.states.iter().enumerate() {
            let span = i * nn..(i + 1) * nn;
            write_matrix(rho.matrix(), &mut out_re[span.clone()], &mut out_im[span]);
        }
        Ok(())
    })
}

/// Long-time average site distribution of the unitary walk started at
/// `vertex`, written into `out` (`len >= n`).
///
/// # Safety
/// `g` must be a live graph handle; `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ctoqw_ctqw_limiting_average(
    g: *const CtoqwGraph,
    vertex: usize,
    out: *mut f64,
    len: usize,
) -> CtoqwStatus {
    guard(|| {
        let graph = &as_ref(g, "graph")?.graph;
        let n = graph.vertex_count();
        if len < n {
            return Err(too_small("output buffer", n, len));
        }
        let avg = ctoqw::ctqw_limiting_average(graph, vertex, &Tolerances::default())?;
        slice_mut(out, len, "out")?[..n].copy_from_slice(&avg);
        Ok(())
    })
}
