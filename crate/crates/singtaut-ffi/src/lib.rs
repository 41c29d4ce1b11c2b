//! C ABI over the singtaut library.
//!
//! Handles are opaque and owned by the caller once returned; free them with the matching
//! `*_free`. Strings returned through `char **` are owned by the caller and released with
//! [`st_string_free`]. Every call returns an [`StStatus`]; the message for the last failure on
//! the calling thread is available from [`st_last_error`].

use singtaut::f_classify::{hara_f_pure, CrossRatio, FClassification, FPureCase};
use singtaut::fedder_lab::{fedder_is_f_pure, poly_parse};
use singtaut::graph_core::{parse_graph, DualGraph};
use singtaut::plumbing_cohomology::{
    cech_h1_rank, render_table, reproduce_table, taut_certificate_with, TableId, TautMethod, TautOptions,
    TautnessVerdict,
};
use singtaut::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    NotPrime = 4,
    InvalidGraph = 5,
    Precondition = 6,
    Unsupported = 7,
    Arithmetic = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StClassification {
    FRegular = 0,
    FPure333 = 1,
    FPure236 = 2,
    FPure244 = 3,
    FPure2222 = 4,
    FPureDTilde = 5,
    RdpEquationDependent = 6,
    NotFPure = 7,
    NotApplicable = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StVerdictKind {
    TautChainRule = 0,
    TautH1Vanishes = 1,
    NotTautEvidence = 2,
    ModuliFamily = 3,
    Inconclusive = 4,
}

/// Parsed weighted dual graph.
pub struct StGraph(DualGraph);

/// Result of a tautness certificate.
pub struct StVerdict(TautnessVerdict);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> StStatus {
    match e {
        Error::Syntax { .. } => StStatus::Syntax,
        Error::NotPrime(_) => StStatus::NotPrime,
        Error::DuplicateVertex(_)
        | Error::UnknownVertex(_)
        | Error::ZeroSelfIntersection(_)
        | Error::Disconnected
        | Error::EmptyGraph
        | Error::NotNegativeDefinite
        | Error::DegenerateProfile(_) => StStatus::InvalidGraph,
        Error::Unsupported(_) | Error::WindowTooSmall(_) => StStatus::Unsupported,
        Error::Overflow(_) | Error::ConstantTerm => StStatus::Arithmetic,
        _ => StStatus::Precondition,
    }
}

type Res<T> = Result<T, (StStatus, String)>;

fn fail(e: Error) -> (StStatus, String) {
    (status_of(&e), e.to_string())
}

/// Runs `f`, converting errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Res<()>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            StStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return Err((StStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (StStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| (StStatus::NullPointer, "null output pointer".into()))
}

unsafe fn graph_arg<'a>(p: *const StGraph) -> Res<&'a DualGraph> {
    p.as_ref().map(|g| &g.0).ok_or_else(|| (StStatus::NullPointer, "null graph handle".into()))
}

fn give_string(s: String, out: &mut *mut c_char) -> Res<()> {
    let c = CString::new(s).map_err(|_| (StStatus::Panic, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn st_graph_parse(text: *const c_char, out: *mut *mut StGraph) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = parse_graph(str_arg(text)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(StGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`st_graph_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn st_graph_free(g: *mut StGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_graph_vertex_count(g: *const StGraph, out: *mut usize) -> StStatus {
    guard(|| {
        *out_arg(out)? = graph_arg(g)?.len();
        Ok(())
    })
}

/// Classifies `g` in characteristic `p`; `lambda` is read only when `has_lambda` is true.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_classify(
    g: *const StGraph,
    p: u64,
    has_lambda: bool,
    lambda: i64,
    out: *mut StClassification,
) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let g = graph_arg(g)?;
        let l = if has_lambda { Some(CrossRatio::new(lambda, p).map_err(fail)?) } else { None };
        *out = match hara_f_pure(g, p, l).map_err(fail)? {
            FClassification::FRegular => StClassification::FRegular,
            FClassification::FPureNonRDP(c) => match c {
                FPureCase::Type333 => StClassification::FPure333,
                FPureCase::Type236 => StClassification::FPure236,
                FPureCase::Type244 => StClassification::FPure244,
                FPureCase::Type2222 { .. } => StClassification::FPure2222,
                FPureCase::DTilde => StClassification::FPureDTilde,
            },
            FClassification::RDPEquationDependent { .. } => StClassification::RdpEquationDependent,
            FClassification::NotFPure(_) => StClassification::NotFPure,
            FClassification::NotApplicable(_) => StClassification::NotApplicable,
        };
        Ok(())
    })
}

/// Tautness certificate; D-tilde graphs without an obstruction get a Čech check at window (8,2).
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_taut(g: *const StGraph, p: u64, out: *mut *mut StVerdict) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let opts = TautOptions { window: Some((8, 2)), ..TautOptions::default() };
        let v = taut_certificate_with(graph_arg(g)?, p, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(StVerdict(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must come from [`st_taut`] or be null.
#[no_mangle]
pub unsafe extern "C" fn st_verdict_free(v: *mut StVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live verdict handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_verdict_kind(v: *const StVerdict, out: *mut StVerdictKind) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let v = v.as_ref().ok_or_else(|| (StStatus::NullPointer, "null verdict handle".into()))?;
        *out = match &v.0 {
            TautnessVerdict::Taut(TautMethod::ChainRule) => StVerdictKind::TautChainRule,
            TautnessVerdict::Taut(_) => StVerdictKind::TautH1Vanishes,
            TautnessVerdict::NotTautEvidence(_) => StVerdictKind::NotTautEvidence,
            TautnessVerdict::ModuliFamily { .. } => StVerdictKind::ModuliFamily,
            TautnessVerdict::Inconclusive { .. } => StVerdictKind::Inconclusive,
        };
        Ok(())
    })
}

/// Full verdict as JSON.
///
/// # Safety
/// `v` must be a live verdict handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_verdict_json(v: *const StVerdict, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let v = v.as_ref().ok_or_else(|| (StStatus::NullPointer, "null verdict handle".into()))?;
        let s = serde_json::to_string(&v.0).map_err(|e| (StStatus::Panic, e.to_string()))?;
        give_string(s, out)
    })
}

/// Fedder's criterion for a polynomial in `x, y, z` over F_p.
///
/// # Safety
/// `poly` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_fedder_is_f_pure(poly: *const c_char, p: u64, out: *mut bool) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let f = poly_parse(str_arg(poly)?, p).map_err(fail)?;
        *out = fedder_is_f_pure(&f).map_err(fail)?;
        Ok(())
    })
}

/// Tab-separated coboundary table: `which` is one of t1, t2, c236, c236b, c244.
///
/// # Safety
/// `which` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_table_text(which: *const c_char, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let out = out_arg(out)?;
        let w = str_arg(which)?;
        let id = TableId::parse(w).ok_or_else(|| (StStatus::Precondition, format!("unknown table `{w}`")))?;
        give_string(render_table(&reproduce_table(id)), out)
    })
}

/// # Safety
/// `g` must be a live graph handle; `rank` and `stable` writable.
#[no_mangle]
pub unsafe extern "C" fn st_cech_h1_rank(
    g: *const StGraph,
    p: u64,
    s_max: i64,
    r_max: i64,
    rank: *mut u64,
    stable: *mut bool,
) -> StStatus {
    guard(|| {
        let (rank, stable) = (out_arg(rank)?, out_arg(stable)?);
        let r = cech_h1_rank(graph_arg(g)?, p, (s_max, r_max)).map_err(fail)?;
        *rank = r.rank as u64;
        *stable = r.stable;
        Ok(())
    })
}
