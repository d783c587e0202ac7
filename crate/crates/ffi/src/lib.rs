//! C ABI for graphhom.
//!
//! Every object crosses the boundary as an opaque pointer that the caller
//! frees with the matching `*_free` function. Functions return a
//! [`GhStatus`]; on failure [`gh_last_error`] describes what went wrong on the
//! calling thread. Strings returned through `char **` are freed with
//! [`gh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graphhom::exact::{ExactError, RankStrategy, Rational};
use graphhom::graphkit::{canonicalize_graph, enumerate, Graph, ParityContext};
use graphhom::hgc::tripod_mc;
use graphhom::homology::{
    build_block, build_twisted_block, homology_table, BlockKind, HomologyError, HomologyTable,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    /// The block could not be computed, e.g. it is infinite.
    Compute = 5,
    /// Two consecutive differentials did not compose to zero.
    Sign = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhBlockKind {
    Gc = 0,
    Gc2 = 1,
    Hgc = 2,
    Hgc2 = 3,
    HgcTwisted = 4,
}

/// One homology row. `m` and `h` are meaningful only when the matching
/// `has_` flag is set.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhRow {
    pub kind: GhBlockKind,
    pub n: i64,
    pub has_m: bool,
    pub m: i64,
    pub g: usize,
    pub has_h: bool,
    pub h: usize,
    pub degree: i64,
    pub dim: usize,
    pub complete: bool,
}

/// Parities and shape policy of a complex.
pub struct GhContext(ParityContext);

/// A graph in canonical text form.
pub struct GhGraph(Graph);

/// A homology table.
pub struct GhTable(HomologyTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

struct Fail(GhStatus, String);

impl From<HomologyError> for Fail {
    fn from(e: HomologyError) -> Self {
        let status = match e {
            HomologyError::Exact(ExactError::CompositionNonzero { .. }) => GhStatus::Sign,
            HomologyError::KindMismatch { .. } | HomologyError::UnknownKind(_) => {
                GhStatus::InvalidArgument
            }
            _ => GhStatus::Compute,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GhStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GhStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(GhStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

/// Message of the last failure on this thread, or an empty string. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A context for `GC`-type complexes (`has_m = false`) or hairy complexes
/// with source dimension `m`. `min_valence` is 2 or 3.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_context_new(
    n: i64,
    has_m: bool,
    m: i64,
    min_valence: u8,
    allow_tadpoles: bool,
    out: *mut *mut GhContext,
) -> GhStatus {
    guard(|| {
        let base = match (has_m, min_valence) {
            (false, 3) => ParityContext::gc(n),
            (false, 2) => ParityContext::gc2(n),
            (true, 3) => ParityContext::hgc(m, n),
            (true, 2) => ParityContext::hgc2(m, n),
            _ => {
                return Err(Fail(
                    GhStatus::InvalidArgument,
                    format!("min_valence must be 2 or 3, got {min_valence}"),
                ))
            }
        };
        let ctx = base.with_tadpoles(allow_tadpoles);
        write(out, Box::into_raw(Box::new(GhContext(ctx))), "out")
    })
}

/// # Safety
/// `ctx` must be null or a context from [`gh_context_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gh_context_free(ctx: *mut GhContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parses the text form `G l=<l> h=<...> e=<u-v,...>` or `SEG`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_parse(text: *const c_char, out: *mut *mut GhGraph) -> GhStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Fail(GhStatus::InvalidUtf8, e.to_string()))?;
        let g: Graph = s
            .parse()
            .map_err(|e: graphhom::graphkit::GraphError| Fail(GhStatus::Parse, e.to_string()))?;
        write(out, Box::into_raw(Box::new(GhGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a graph from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_free(g: *mut GhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_to_string(g: *const GhGraph, out: *mut *mut c_char) -> GhStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        write(out, into_c_string(g.0.to_string()), "out")
    })
}

/// Canonical form of `g` in `ctx` and the sign relating the two. A graph
/// that is zero in the complex gives `*sign = 0` and `*out = NULL`.
///
/// # Safety
/// `g` and `ctx` must be live handles; `out` and `sign` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gh_graph_canonicalize(
    g: *const GhGraph,
    ctx: *const GhContext,
    out: *mut *mut GhGraph,
    sign: *mut i32,
) -> GhStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let ctx = deref(ctx, "context")?;
        let r = canonicalize_graph(&g.0, &ctx.0)
            .map_err(|e| Fail(GhStatus::InvalidArgument, e.to_string()))?;
        let (ptr, s) = match r {
            Some((c, s)) => (Box::into_raw(Box::new(GhGraph(c))), s),
            None => (ptr::null_mut(), 0),
        };
        if out.is_null() || sign.is_null() {
            if !ptr.is_null() {
                drop(Box::from_raw(ptr));
            }
            return Err(null("out"));
        }
        out.write(ptr);
        sign.write(s);
        Ok(())
    })
}

/// Number of nonzero canonical generators with `l` internal vertices, `k`
/// internal edges and `h` hairs.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_enumerate_count(
    ctx: *const GhContext,
    l: usize,
    k: usize,
    h: usize,
    out: *mut usize,
) -> GhStatus {
    guard(|| {
        let ctx = deref(ctx, "context")?;
        if !ctx.0.is_hairy() && h > 0 {
            return Err(Fail(
                GhStatus::InvalidArgument,
                "hairs need a hairy context".into(),
            ));
        }
        write(out, enumerate(&ctx.0, l, k, h).len(), "out")
    })
}

fn strategy(exact: bool) -> RankStrategy {
    if exact {
        RankStrategy::Exact
    } else {
        RankStrategy::default()
    }
}

fn degrees(has: bool, lo: i64, hi: i64) -> Option<(i64, i64)> {
    has.then_some((lo, hi))
}

/// Homology of the `(g, h)` block of the complex described by `ctx`
/// (`h` is ignored for non-hairy contexts). Bivalent contexts need a degree
/// window (`has_degrees`, `lo..=hi`). With `exact` ranks use rational
/// elimination, otherwise two random primes.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_block_homology(
    ctx: *const GhContext,
    g: usize,
    h: usize,
    has_degrees: bool,
    lo: i64,
    hi: i64,
    exact: bool,
    out: *mut *mut GhTable,
) -> GhStatus {
    guard(|| {
        let ctx = deref(ctx, "context")?.0;
        let kind = match (ctx.is_hairy(), ctx.min_valence) {
            (false, 3) => BlockKind::Gc,
            (false, _) => BlockKind::Gc2,
            (true, 3) => BlockKind::Hgc,
            (true, _) => BlockKind::Hgc2,
        };
        let hh = ctx.is_hairy().then_some(h);
        let block = build_block(kind, ctx, g, hh, degrees(has_degrees, lo, hi))?;
        let t = homology_table(&block, &strategy(exact))?;
        write(out, Box::into_raw(Box::new(GhTable(t))), "out")
    })
}

/// Loop order `g` of a trivalent `HGC_{n-1,n}` twisted by the tripod series
/// with parameter `lambda_num / lambda_den`, hairs `1..=h_max`.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gh_tripod_twisted_homology(
    ctx: *const GhContext,
    g: usize,
    h_max: usize,
    lambda_num: i64,
    lambda_den: i64,
    has_degrees: bool,
    lo: i64,
    hi: i64,
    out: *mut *mut GhTable,
) -> GhStatus {
    guard(|| {
        let ctx = deref(ctx, "context")?.0;
        if lambda_den == 0 {
            return Err(Fail(
                GhStatus::InvalidArgument,
                "lambda denominator is zero".into(),
            ));
        }
        let lambda = Rational::new(lambda_num.into(), lambda_den.into());
        let series = tripod_mc(ctx, lambda, h_max)
            .map_err(|e| Fail(GhStatus::InvalidArgument, e.to_string()))?;
        let block = build_twisted_block(&series, g, h_max, degrees(has_degrees, lo, hi))?;
        let t = homology_table(&block, &RankStrategy::default())?;
        write(out, Box::into_raw(Box::new(GhTable(t))), "out")
    })
}

/// # Safety
/// `t` must be null or a table from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gh_table_free(t: *mut GhTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live table and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_table_len(t: *const GhTable, out: *mut usize) -> GhStatus {
    guard(|| {
        let t = deref(t, "table")?;
        write(out, t.0.rows.len(), "out")
    })
}

/// # Safety
/// `t` must be a live table and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_table_row(t: *const GhTable, i: usize, out: *mut GhRow) -> GhStatus {
    guard(|| {
        let t = deref(t, "table")?;
        let r = t.0.rows.get(i).ok_or_else(|| {
            Fail(
                GhStatus::OutOfRange,
                format!("row {i} of {}", t.0.rows.len()),
            )
        })?;
        let kind = match r.kind {
            BlockKind::Gc => GhBlockKind::Gc,
            BlockKind::Gc2 => GhBlockKind::Gc2,
            BlockKind::Hgc => GhBlockKind::Hgc,
            BlockKind::Hgc2 => GhBlockKind::Hgc2,
            BlockKind::HgcTwisted => GhBlockKind::HgcTwisted,
        };
        let row = GhRow {
            kind,
            n: r.n,
            has_m: r.m.is_some(),
            m: r.m.unwrap_or(0),
            g: r.g,
            has_h: r.h.is_some(),
            h: r.h.unwrap_or(0),
            degree: r.degree,
            dim: r.dim,
            complete: r.complete,
        };
        write(out, row, "out")
    })
}

/// The table as CSV with a header line.
///
/// # Safety
/// `t` must be a live table and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_table_to_csv(t: *const GhTable, out: *mut *mut c_char) -> GhStatus {
    guard(|| {
        let t = deref(t, "table")?;
        write(out, into_c_string(t.0.to_csv()), "out")
    })
}
