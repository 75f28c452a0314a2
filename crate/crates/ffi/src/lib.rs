//! C ABI over `resist-core`.
//!
//! Graphs are opaque `RsGraph` handles created by a constructor and released
//! with `rs_graph_free`. Every fallible call returns an `RsStatus`; on
//! failure the message is kept per thread and can be fetched with
//! `rs_last_error_message`. Strings handed out by the library are
//! NUL-terminated, owned by the caller and released with `rs_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use resist_core::drs::verify_drs;
use resist_core::enumerate::Guard;
use resist_core::{parse_graph6, resistance, resistance_spectrum, to_graph6, Error, Graph};

/// Opaque graph handle.
pub struct RsGraph(Graph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Disconnected = 5,
    TooLarge = 6,
    Internal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RsStatus {
    match e {
        Error::Graph6(_) | Error::Rational(_) | Error::Format(_) => RsStatus::ParseError,
        Error::Disconnected => RsStatus::Disconnected,
        Error::OrderTooLarge { .. } => RsStatus::TooLarge,
        Error::Cache(_) | Error::Io(_) | Error::Inconsistent(_) => RsStatus::Internal,
        _ => RsStatus::InvalidArgument,
    }
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guarded(body: impl FnOnce() -> Result<(), (RsStatus, String)>) -> RsStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RsStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RsStatus::Internal
        }
    }
}

fn core_err(e: Error) -> (RsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (RsStatus, String) {
    (RsStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `g` must be null or a live handle from this library.
unsafe fn graph_ref<'a>(g: *const RsGraph) -> Result<&'a Graph, (RsStatus, String)> {
    g.as_ref().map(|h| &h.0).ok_or_else(|| null_err("graph"))
}

/// # Safety
/// `out` must be null or valid for one pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (RsStatus, String)> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    let c = CString::new(s).map_err(|_| (RsStatus::Internal, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `out` must be null or valid for one pointer write.
unsafe fn write_graph(out: *mut *mut RsGraph, g: Graph) -> Result<(), (RsStatus, String)> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    *out = Box::into_raw(Box::new(RsGraph(g)));
    Ok(())
}

/// Parses one graph6 string into a new handle stored in `*out`.
///
/// # Safety
/// `graph6` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rs_graph_from_graph6(
    graph6: *const c_char,
    out: *mut *mut RsGraph,
) -> RsStatus {
    guarded(|| {
        if graph6.is_null() {
            return Err(null_err("graph6"));
        }
        let text = CStr::from_ptr(graph6)
            .to_str()
            .map_err(|_| (RsStatus::InvalidUtf8, "graph6 is not UTF-8".to_string()))?;
        let g = parse_graph6(text).map_err(|e| core_err(e.into()))?;
        write_graph(out, g)
    })
}

/// New handle for `K_{m,n}` stored in `*out`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn rs_graph_complete_bipartite(
    m: usize,
    n: usize,
    out: *mut *mut RsGraph,
) -> RsStatus {
    guarded(|| write_graph(out, Graph::complete_bipartite(m, n).map_err(core_err)?))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rs_graph_free(g: *mut RsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rs_graph_order(g: *const RsGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.order())
}

/// # Safety
/// `g` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rs_graph_to_graph6(g: *const RsGraph, out: *mut *mut c_char) -> RsStatus {
    guarded(|| write_string(out, to_graph6(graph_ref(g)?)))
}

/// Effective resistance between `u` and `v` as `"num/den"` (or `"num"`).
///
/// # Safety
/// `g` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rs_resistance(
    g: *const RsGraph,
    u: usize,
    v: usize,
    out: *mut *mut c_char,
) -> RsStatus {
    guarded(|| {
        let r = resistance(graph_ref(g)?, u, v).map_err(core_err)?;
        write_string(out, r.to_string())
    })
}

/// Resistance spectrum as `[["num/den", multiplicity], ...]`, ascending.
///
/// # Safety
/// `g` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rs_spectrum_json(g: *const RsGraph, out: *mut *mut c_char) -> RsStatus {
    guarded(|| {
        let s = resistance_spectrum(graph_ref(g)?).map_err(core_err)?;
        write_string(out, s.to_json())
    })
}

/// Exhaustive spectrum-determinability verdict as JSON, comparing against
/// every connected graph with the same vertex count (at most 9).
///
/// # Safety
/// `g` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rs_verify_drs_json(g: *const RsGraph, out: *mut *mut c_char) -> RsStatus {
    guarded(|| {
        let verdict = verify_drs(graph_ref(g)?, Guard::Default, None).map_err(core_err)?;
        write_string(
            out,
            serde_json::to_string(&verdict).expect("verdict serialises"),
        )
    })
}

/// Copy of the calling thread's last error message, or null if the last
/// call succeeded.
#[no_mangle]
pub extern "C" fn rs_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
