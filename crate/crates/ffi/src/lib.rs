//! C ABI over the `recolor` library.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns a [`RecolorStatus`]; on failure the message is
//! kept per thread and read with [`recolor_last_error`]. Out-pointers are
//! written only on success. Panics are caught and reported as
//! [`RecolorStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use recolor::coloring::{verify_trace, Coloring, Move, Trace};
use recolor::error::Error;
use recolor::generate::{gen_gnm, gen_planted_m, random_partition, derive_seed};
use recolor::graph::Graph;
use recolor::greedy::{default_palette, greedy_recolor, GreedyOptions, Selector};
use recolor::transform::{
    resolve_threshold, transform_to_target, work_palette_above, Threshold, TransformOptions,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecolorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The request cannot be satisfied with the given parameters.
    Infeasible = 3,
    /// A trace or coloring failed verification.
    VerifyFailed = 4,
    Internal = 5,
}

/// Vertex order used when a greedy round picks its next vertex.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecolorSelector {
    LowestId = 0,
    HighestDegree = 1,
    /// Seeded by the `seed` argument of the calling function.
    Random = 2,
}

pub struct RecolorGraph(Graph);
pub struct RecolorColoring(Coloring);
pub struct RecolorTrace(Trace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> RecolorStatus {
    match e {
        Error::Trace(_) => RecolorStatus::VerifyFailed,
        Error::Internal(_) => RecolorStatus::Internal,
        e if e.is_infeasible() => RecolorStatus::Infeasible,
        _ => RecolorStatus::InvalidArgument,
    }
}

/// Runs `f`, recording its error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (RecolorStatus, String)>) -> RecolorStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RecolorStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside recolor".into());
            RecolorStatus::Internal
        }
    }
}

fn lib<T>(r: recolor::Result<T>) -> Result<T, (RecolorStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RecolorStatus, String) {
    (RecolorStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (RecolorStatus, String)> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

fn selector(s: RecolorSelector, seed: u64) -> Selector {
    match s {
        RecolorSelector::LowestId => Selector::LowestId,
        RecolorSelector::HighestDegree => Selector::HighestDegree,
        RecolorSelector::Random => Selector::Random { seed },
    }
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn recolor_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Graph on `n` vertices from `m` edges stored as `2 m` endpoint ids.
///
/// # Safety
/// `edges` must point to `2 * m` readable `uint32_t` values (it may be null
/// when `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_from_edges(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut RecolorGraph,
) -> RecolorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat: &[u32] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * m) }
        };
        let g = lib(Graph::from_edges(n, flat.chunks_exact(2).map(|e| (e[0], e[1]))))?;
        unsafe { put(out, RecolorGraph(g)) };
        Ok(())
    })
}

/// Uniform random graph with exactly `m` edges.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_gnm(
    n: usize,
    m: u64,
    seed: u64,
    out: *mut *mut RecolorGraph,
) -> RecolorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = lib(gen_gnm(n, m, seed))?;
        unsafe { put(out, RecolorGraph(g)) };
        Ok(())
    })
}

/// Planted `q`-colorable graph with exactly `m` edges and its planted coloring.
/// Seeds match `recolor gen planted --m`.
///
/// # Safety
/// `out_graph` and `out_coloring` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_planted(
    n: usize,
    q: usize,
    m: u64,
    seed: u64,
    out_graph: *mut *mut RecolorGraph,
    out_coloring: *mut *mut RecolorColoring,
) -> RecolorStatus {
    guard(|| {
        if out_graph.is_null() || out_coloring.is_null() {
            return Err(null("output pointer"));
        }
        let partition = lib(random_partition(n, q, m, derive_seed(seed, 0)))?;
        let inst = lib(gen_planted_m(&partition, m, derive_seed(seed, 1)))?;
        unsafe {
            put(out_graph, RecolorGraph(inst.graph));
            put(out_coloring, RecolorColoring(inst.sigma));
        }
        Ok(())
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_n(g: *const RecolorGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_m(g: *const RecolorGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.m())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn recolor_graph_free(g: *mut RecolorGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Coloring copied from `n` color ids.
///
/// # Safety
/// `colors` must point to `n` readable values (null allowed when `n == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_coloring_new(
    colors: *const u32,
    n: usize,
    out: *mut *mut RecolorColoring,
) -> RecolorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v = if n == 0 {
            Vec::new()
        } else if colors.is_null() {
            return Err(null("colors"));
        } else {
            unsafe { std::slice::from_raw_parts(colors, n) }.to_vec()
        };
        unsafe { put(out, RecolorColoring(Coloring::new(v))) };
        Ok(())
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn recolor_coloring_len(c: *const RecolorColoring) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.0.len())
}

/// Copies the colors into `buf`, which must hold `recolor_coloring_len(c)` values.
///
/// # Safety
/// `c` must be a live coloring handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn recolor_coloring_copy(
    c: *const RecolorColoring,
    buf: *mut u32,
    cap: usize,
) -> RecolorStatus {
    guard(|| {
        let c = unsafe { deref(c, "coloring") }?;
        let src = c.0.as_slice();
        if cap < src.len() {
            return Err((
                RecolorStatus::InvalidArgument,
                format!("buffer holds {cap} colors, need {}", src.len()),
            ));
        }
        if !src.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            unsafe { std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
        }
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn recolor_coloring_free(c: *mut RecolorColoring) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Greedy recoloring of `g` from `sigma` with the derived threshold and a
/// palette of `q + 2 max_degree + 2` colors, `q` being `sigma`'s palette size.
///
/// # Safety
/// `g` and `sigma` must be live handles; `out_trace` and `out_end` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_greedy(
    g: *const RecolorGraph,
    sigma: *const RecolorColoring,
    sel: RecolorSelector,
    seed: u64,
    out_trace: *mut *mut RecolorTrace,
    out_end: *mut *mut RecolorColoring,
) -> RecolorStatus {
    guard(|| {
        let (g, sigma) = unsafe { (deref(g, "graph")?, deref(sigma, "coloring")?) };
        if out_trace.is_null() || out_end.is_null() {
            return Err(null("output pointer"));
        }
        let (g, sigma) = (&g.0, &sigma.0);
        let opts = GreedyOptions {
            palette: default_palette(sigma.palette_hint() as usize, g.max_degree()),
            threshold: lib(resolve_threshold(g, sigma, Threshold::Derived))?,
            selector: selector(sel, seed),
        };
        let rep = lib(greedy_recolor(g, sigma, &opts))?;
        unsafe {
            put(out_trace, RecolorTrace(rep.trace));
            put(out_end, RecolorColoring(rep.end));
        }
        Ok(())
    })
}

/// Walk from `sigma` to `tau` through `2 max_degree + 2` work colors placed
/// above `tau`'s colors.
///
/// # Safety
/// `g`, `sigma` and `tau` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_transform(
    g: *const RecolorGraph,
    sigma: *const RecolorColoring,
    tau: *const RecolorColoring,
    out: *mut *mut RecolorTrace,
) -> RecolorStatus {
    guard(|| {
        let (g, sigma, tau) =
            unsafe { (deref(g, "graph")?, deref(sigma, "start coloring")?, deref(tau, "target coloring")?) };
        if out.is_null() {
            return Err(null("out"));
        }
        let work = work_palette_above(&tau.0, 2 * g.0.max_degree() + 2);
        let rep = lib(transform_to_target(&g.0, &sigma.0, &tau.0, &work, &TransformOptions::default()))?;
        unsafe { put(out, RecolorTrace(rep.trace)) };
        Ok(())
    })
}

/// Trace from a start coloring and `k` moves stored as `(vertex, color)` pairs.
///
/// # Safety
/// `start` must be a live handle; `moves` must point to `2 * k` values (null
/// allowed when `k == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_trace_new(
    start: *const RecolorColoring,
    moves: *const u32,
    k: usize,
    out: *mut *mut RecolorTrace,
) -> RecolorStatus {
    guard(|| {
        let start = unsafe { deref(start, "start coloring") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let flat: &[u32] = if k == 0 {
            &[]
        } else if moves.is_null() {
            return Err(null("moves"));
        } else {
            unsafe { std::slice::from_raw_parts(moves, 2 * k) }
        };
        let moves = flat.chunks_exact(2).map(|p| Move::new(p[0], p[1])).collect();
        unsafe { put(out, RecolorTrace(Trace::new(start.0.clone(), moves))) };
        Ok(())
    })
}

/// Number of moves, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn recolor_trace_len(t: *const RecolorTrace) -> usize {
    unsafe { t.as_ref() }.map_or(0, |t| t.0.len())
}

/// Copies the moves as `(vertex, color)` pairs; `buf` needs `2 * len` slots.
///
/// # Safety
/// `t` must be a live trace handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn recolor_trace_copy(
    t: *const RecolorTrace,
    buf: *mut u32,
    cap: usize,
) -> RecolorStatus {
    guard(|| {
        let t = unsafe { deref(t, "trace") }?;
        let need = 2 * t.0.len();
        if cap < need {
            return Err((
                RecolorStatus::InvalidArgument,
                format!("buffer holds {cap} values, need {need}"),
            ));
        }
        if need > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let out = unsafe { std::slice::from_raw_parts_mut(buf, need) };
            for (slot, mv) in out.chunks_exact_mut(2).zip(&t.0.moves) {
                slot[0] = mv.vertex;
                slot[1] = mv.new_color;
            }
        }
        Ok(())
    })
}

/// Checks that every coloring along `t` is proper in `g`. On a fault returns
/// `VerifyFailed` and, when `failing_step` is non-null, stores the index of the
/// offending move there (`SIZE_MAX` for a fault in the start coloring).
///
/// # Safety
/// `g` and `t` must be live handles; `failing_step` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn recolor_verify(
    g: *const RecolorGraph,
    t: *const RecolorTrace,
    failing_step: *mut usize,
) -> RecolorStatus {
    guard(|| {
        let (g, t) = unsafe { (deref(g, "graph")?, deref(t, "trace")?) };
        verify_trace(&g.0, &t.0).map_err(|fault| {
            if !failing_step.is_null() {
                unsafe { *failing_step = fault.step().unwrap_or(usize::MAX) };
            }
            (RecolorStatus::VerifyFailed, fault.to_string())
        })
    })
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn recolor_trace_free(t: *mut RecolorTrace) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}
