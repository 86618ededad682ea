//! C ABI over `graphmul`.
//!
//! Graphs, differential matrices and biclique covers are exposed as opaque
//! handles created by `gm_*` constructors and released with the matching
//! `*_free` function. Every fallible call returns a [`GmStatus`]; on failure
//! a message for the calling thread is available from
//! [`gm_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use graphmul::io::{load_edge_list, load_rmv, save_rmv, EdgeListSource};
use graphmul::{
    compress, extract_greedy, pagerank, verify_cover, BicliqueCover, CsrGraph, DanglingPolicy,
    Error, Kernel, KernelKind, KernelParams, MatVec, PageRankConfig, ReferencedMatrix, VertexId,
};

/// Passed as `max_rounds` for an unbounded biclique extraction.
pub const GM_UNBOUNDED: u64 = u64::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    OutOfRange = 4,
    Parse = 5,
    Format = 6,
    Corrupt = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmKernel {
    Csr = 0,
    Ref = 1,
    Biclique = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmDangling {
    Uniform = 0,
    Drop = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmPageRankConfig {
    /// Teleport probability, in (0, 1).
    pub alpha: f64,
    pub iterations: usize,
    /// Early-stop threshold on the L1 change; negative disables it.
    pub l1_tolerance: f64,
    pub dangling: GmDangling,
}

/// Opaque CSR adjacency matrix.
pub struct GmGraph(CsrGraph);

/// Opaque reference-differential matrix.
pub struct GmRefMatrix(ReferencedMatrix);

/// Opaque biclique cover.
pub struct GmCover(BicliqueCover);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> GmStatus {
    match err {
        Error::OutOfRange { .. } | Error::Index { .. } => GmStatus::OutOfRange,
        Error::Dimension { .. } => GmStatus::Dimension,
        Error::Parameter(_) => GmStatus::InvalidArgument,
        Error::Parse { .. } => GmStatus::Parse,
        Error::Format(_) => GmStatus::Format,
        Error::Corrupt(_) => GmStatus::Corrupt,
        Error::Io { .. } => GmStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult = Result<(), Failure>;

fn guard<F: FnOnce() -> FfiResult>(f: F) -> GmStatus {
    let result = catch_unwind(AssertUnwindSafe(f));
    let (status, msg) = match result {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            return GmStatus::Ok;
        }
        Ok(Err(Failure::Null(what))) => (GmStatus::NullPointer, format!("{what} is null")),
        Ok(Err(Failure::Invalid(msg))) => (GmStatus::InvalidArgument, msg),
        Ok(Err(Failure::Lib(e))) => (status_of(&e), e.to_string()),
        Err(_) => (GmStatus::Panic, "internal panic".to_string()),
    };
    set_last_error(msg);
    status
}

unsafe fn as_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &'static str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(Failure::Null("path"));
    }
    let s = unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::Invalid("path is not valid UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

fn product<K: MatVec>(k: &K, x: &[f64], y: &mut [f64], adds: *mut u64) -> FfiResult {
    let ops = k.matvec_into(x, y)?;
    if !adds.is_null() {
        unsafe { *adds = ops.adds };
    }
    Ok(())
}

/// Message describing the last failed call on this thread, or null after a
/// successful call. Valid until the next `gm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph from `len` edges `(sources[k], targets[k])` on `n` vertices.
///
/// # Safety
/// `sources` and `targets` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_from_edges(
    sources: *const u32,
    targets: *const u32,
    len: usize,
    n: usize,
    out: *mut *mut GmGraph,
) -> GmStatus {
    guard(|| {
        let s = unsafe { slice(sources, len, "sources")? };
        let t = unsafe { slice(targets, len, "targets")? };
        let edges: Vec<(VertexId, VertexId)> = s.iter().copied().zip(t.iter().copied()).collect();
        unsafe { put(out, GmGraph(CsrGraph::from_edges(&edges, n)?)) }
    })
}

/// Loads a whitespace-separated edge list. `n = 0` infers the vertex count.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_load_edge_list(
    path: *const c_char,
    n: usize,
    out: *mut *mut GmGraph,
) -> GmStatus {
    guard(|| {
        let src = EdgeListSource {
            path: Some(unsafe { path_arg(path)? }),
            vertices: (n > 0).then_some(n),
        };
        unsafe { put(out, GmGraph(load_edge_list(&src)?)) }
    })
}

/// # Safety
/// `g` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_free(g: *mut GmGraph) {
    unsafe { free(g) }
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_num_vertices(g: *const GmGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.num_vertices())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_num_edges(g: *const GmGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.num_edges())
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_transpose(g: *const GmGraph, out: *mut *mut GmGraph) -> GmStatus {
    guard(|| {
        let g = unsafe { as_ref(g, "graph")? };
        unsafe { put(out, GmGraph(g.0.transpose())) }
    })
}

/// `y = A x` with the plain CSR kernel. `adds` may be null.
///
/// # Safety
/// `x` and `y` must point to `x_len` and `y_len` values.
#[no_mangle]
pub unsafe extern "C" fn gm_graph_matvec(
    g: *const GmGraph,
    x: *const f64,
    x_len: usize,
    y: *mut f64,
    y_len: usize,
    adds: *mut u64,
) -> GmStatus {
    guard(|| {
        let g = unsafe { as_ref(g, "graph")? };
        let x = unsafe { slice(x, x_len, "x")? };
        let y = unsafe { slice_mut(y, y_len, "y")? };
        product(&g.0, x, y, adds)
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_compress(
    g: *const GmGraph,
    window: usize,
    out: *mut *mut GmRefMatrix,
) -> GmStatus {
    guard(|| {
        let g = unsafe { as_ref(g, "graph")? };
        unsafe { put(out, GmRefMatrix(compress(&g.0, window)?)) }
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_load(path: *const c_char, out: *mut *mut GmRefMatrix) -> GmStatus {
    guard(|| {
        let path = unsafe { path_arg(path)? };
        unsafe { put(out, GmRefMatrix(load_rmv(&path)?)) }
    })
}

/// # Safety
/// `rm` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_save(rm: *const GmRefMatrix, path: *const c_char) -> GmStatus {
    guard(|| {
        let rm = unsafe { as_ref(rm, "matrix")? };
        let path = unsafe { path_arg(path)? };
        Ok(save_rmv(&rm.0, &path)?)
    })
}

/// # Safety
/// `rm` must be null or a handle that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_free(rm: *mut GmRefMatrix) {
    unsafe { free(rm) }
}

/// # Safety
/// `rm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_num_rows(rm: *const GmRefMatrix) -> usize {
    unsafe { rm.as_ref() }.map_or(0, |rm| rm.0.len())
}

/// Nonzeros of the differential matrix.
///
/// # Safety
/// `rm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_m_prime(rm: *const GmRefMatrix) -> usize {
    unsafe { rm.as_ref() }.map_or(0, |rm| rm.0.m_prime())
}

/// `y = A x` from the differential encoding. `adds` may be null.
///
/// # Safety
/// `x` and `y` must point to `x_len` and `y_len` values.
#[no_mangle]
pub unsafe extern "C" fn gm_ref_matvec(
    rm: *const GmRefMatrix,
    x: *const f64,
    x_len: usize,
    y: *mut f64,
    y_len: usize,
    adds: *mut u64,
) -> GmStatus {
    guard(|| {
        let rm = unsafe { as_ref(rm, "matrix")? };
        let x = unsafe { slice(x, x_len, "x")? };
        let y = unsafe { slice_mut(y, y_len, "y")? };
        product(&rm.0, x, y, adds)
    })
}

/// Greedy biclique cover of `g`. Pass [`GM_UNBOUNDED`] for no round limit.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_cover_extract(
    g: *const GmGraph,
    min_gain: u64,
    max_rounds: u64,
    out: *mut *mut GmCover,
) -> GmStatus {
    guard(|| {
        let g = unsafe { as_ref(g, "graph")? };
        let rounds = (max_rounds != GM_UNBOUNDED).then_some(max_rounds as usize);
        unsafe { put(out, GmCover(extract_greedy(&g.0, min_gain, rounds)?)) }
    })
}

/// # Safety
/// `cover` must be null or a handle that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn gm_cover_free(cover: *mut GmCover) {
    unsafe { free(cover) }
}

/// # Safety
/// `cover` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_cover_compressed_size(cover: *const GmCover) -> u64 {
    unsafe { cover.as_ref() }.map_or(0, |c| c.0.compressed_size())
}

/// Writes 1 to `valid` iff the cover partitions the edges of `g`.
///
/// # Safety
/// Handles must be live; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gm_cover_verify(
    cover: *const GmCover,
    g: *const GmGraph,
    valid: *mut bool,
) -> GmStatus {
    guard(|| {
        let cover = unsafe { as_ref(cover, "cover")? };
        let g = unsafe { as_ref(g, "graph")? };
        if valid.is_null() {
            return Err(Failure::Null("valid"));
        }
        unsafe { *valid = verify_cover(&cover.0, &g.0) };
        Ok(())
    })
}

/// `y = A x` from the cover. `adds` may be null.
///
/// # Safety
/// `x` and `y` must point to `x_len` and `y_len` values.
#[no_mangle]
pub unsafe extern "C" fn gm_cover_matvec(
    cover: *const GmCover,
    x: *const f64,
    x_len: usize,
    y: *mut f64,
    y_len: usize,
    adds: *mut u64,
) -> GmStatus {
    guard(|| {
        let cover = unsafe { as_ref(cover, "cover")? };
        let x = unsafe { slice(x, x_len, "x")? };
        let y = unsafe { slice_mut(y, y_len, "y")? };
        product(&cover.0, x, y, adds)
    })
}

#[no_mangle]
pub extern "C" fn gm_pagerank_config_default() -> GmPageRankConfig {
    let d = PageRankConfig::default();
    GmPageRankConfig {
        alpha: d.alpha,
        iterations: d.iterations,
        l1_tolerance: -1.0,
        dangling: GmDangling::Uniform,
    }
}

/// PageRank of `g` using the requested kernel on its transpose. `window` is
/// used by the reference kernel only. Writes `n` ranks and, if
/// `iterations_run` is non-null, the number of iterations performed.
///
/// # Safety
/// `g` and `config` must be valid; `ranks` must point to `ranks_len` values.
#[no_mangle]
pub unsafe extern "C" fn gm_pagerank(
    g: *const GmGraph,
    config: *const GmPageRankConfig,
    kernel: GmKernel,
    window: usize,
    ranks: *mut f64,
    ranks_len: usize,
    iterations_run: *mut usize,
) -> GmStatus {
    guard(|| {
        let g = unsafe { as_ref(g, "graph")? };
        let c = unsafe { as_ref(config, "config")? };
        let ranks = unsafe { slice_mut(ranks, ranks_len, "ranks")? };
        let cfg = PageRankConfig {
            alpha: c.alpha,
            iterations: c.iterations,
            l1_tolerance: (c.l1_tolerance >= 0.0).then_some(c.l1_tolerance),
            dangling: match c.dangling {
                GmDangling::Uniform => DanglingPolicy::Uniform,
                GmDangling::Drop => DanglingPolicy::Drop,
            },
        };
        cfg.validate()?;
        if ranks.len() != g.0.num_vertices() {
            return Err(Error::Dimension {
                expected: g.0.num_vertices(),
                actual: ranks.len(),
            }
            .into());
        }
        let kind = match kernel {
            GmKernel::Csr => KernelKind::Csr,
            GmKernel::Ref => KernelKind::Ref,
            GmKernel::Biclique => KernelKind::Biclique,
        };
        let params = KernelParams {
            window,
            ..KernelParams::default()
        };
        let provider = Kernel::build(g.0.transpose(), kind, &params)?;
        let out = pagerank(&provider, &g.0.out_degrees(), &cfg)?;
        ranks.copy_from_slice(&out.ranks);
        if !iterations_run.is_null() {
            unsafe { *iterations_run = out.iterations };
        }
        Ok(())
    })
}
