//! C ABI over `planeloc::locator::Locator`.
//!
//! Handles are opaque and owned by the caller between `pl_locator_new` and
//! `pl_locator_free`. Every entry point returns a `PlStatus`; results go
//! through out-pointers. A handle must not be used from two threads at once.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use planeloc::blocks::cascade::Strategy;
use planeloc::geom::{Coord, Point, Segment};
use planeloc::locator::{Boundary, LocateResult, Locator, LocatorConfig};
use planeloc::oracle::validate_insertion;
use planeloc::subdivision::{FaceName, SubdivisionError};

/// Outcome of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    ZeroDenominator = 2,
    DegenerateEdge = 3,
    DuplicateVertex = 4,
    /// The edge crosses or overlaps an existing edge, or passes through a vertex.
    InvalidEdge = 5,
    /// The call panicked; the handle must be freed and not used again.
    Internal = 6,
}

/// An exact rational `num / den`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlCoord {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlPoint {
    pub x: PlCoord,
    pub y: PlCoord,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlLocationKind {
    Outer = 0,
    /// `id` is a bounded face name, stable until the face is split.
    Face = 1,
    /// `id` is an edge id.
    Edge = 2,
    /// `id` is a vertex id.
    Vertex = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlLocation {
    pub kind: PlLocationKind,
    pub id: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlStats {
    pub vertices: u64,
    pub edges: u64,
    pub trapezoids: u64,
    pub merges_max_per_edge: u32,
    pub backbone_nodes: u64,
}

/// Opaque locator handle.
pub struct PlLocator {
    loc: Locator,
    validate: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PlStatus, msg: String) -> PlStatus {
    remember(msg);
    status
}

fn guard(f: impl FnOnce() -> PlStatus) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(PlStatus::Internal, msg)
        }
    }
}

fn coord(c: PlCoord) -> Result<Coord, PlStatus> {
    if c.den == 0 {
        return Err(fail(PlStatus::ZeroDenominator, format!("zero denominator in {}/0", c.num)));
    }
    Ok(Coord::from_ratio(c.num, c.den))
}

fn point(p: PlPoint) -> Result<Point, PlStatus> {
    Ok(Point { x: coord(p.x)?, y: coord(p.y)? })
}

fn rejected(e: SubdivisionError) -> PlStatus {
    let status = match e {
        SubdivisionError::DuplicateVertex(_) => PlStatus::DuplicateVertex,
        SubdivisionError::Degenerate => PlStatus::DegenerateEdge,
        _ => PlStatus::InvalidEdge,
    };
    fail(status, e.to_string())
}

/// Creates an empty locator. `expected_edges` sizes internal blocks (0 picks
/// a default); nonzero `cascading` selects fractional cascading for list
/// searches; nonzero `validate` checks each edge against all existing ones.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn pl_locator_new(
    expected_edges: usize,
    cascading: u8,
    validate: u8,
    out: *mut *mut PlLocator,
) -> PlStatus {
    if out.is_null() {
        return fail(PlStatus::NullPointer, "out is null".into());
    }
    guard(|| {
        let mut cfg = LocatorConfig::default();
        if expected_edges > 0 {
            cfg.n_cap = expected_edges;
        }
        if cascading != 0 {
            cfg.strategy = Strategy::Cascading;
        }
        let h = Box::new(PlLocator { loc: Locator::new(cfg), validate: validate != 0 });
        *out = Box::into_raw(h);
        PlStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from `pl_locator_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_locator_free(h: *mut PlLocator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Inserts the edge `a`-`b`, creating missing endpoints. The new edge id is
/// written to `out_edge` when it is not null.
///
/// # Safety
/// `h` must be a live handle; `out_edge` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pl_insert_edge(h: *mut PlLocator, a: PlPoint, b: PlPoint, out_edge: *mut u32) -> PlStatus {
    let Some(h) = h.as_mut() else {
        return fail(PlStatus::NullPointer, "handle is null".into());
    };
    guard(|| {
        let (a, b) = match (point(a), point(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if a == b {
            return fail(PlStatus::DegenerateEdge, "edge has zero length".into());
        }
        let seg = Segment::new(a, b).expect("distinct endpoints");
        if h.validate {
            let sub = h.loc.subdivision();
            let segs: Vec<Segment> = sub.segments().cloned().collect();
            let pts: Vec<Point> = sub.vertex_points().cloned().collect();
            if let Err(v) = validate_insertion(&segs, &pts, &seg) {
                return fail(PlStatus::InvalidEdge, v.to_string());
            }
        }
        match h.loc.insert_edge(&seg) {
            Ok(e) => {
                if !out_edge.is_null() {
                    *out_edge = e;
                }
                PlStatus::Ok
            }
            Err(e) => rejected(e),
        }
    })
}

/// Inserts a vertex inside a face or on an edge, splitting that edge. The
/// vertex id is written to `out_vertex` when it is not null.
///
/// # Safety
/// `h` must be a live handle; `out_vertex` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pl_insert_vertex(h: *mut PlLocator, p: PlPoint, out_vertex: *mut u32) -> PlStatus {
    let Some(h) = h.as_mut() else {
        return fail(PlStatus::NullPointer, "handle is null".into());
    };
    guard(|| {
        let p = match point(p) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match h.loc.insert_vertex(&p) {
            Ok(v) => {
                if !out_vertex.is_null() {
                    *out_vertex = v;
                }
                PlStatus::Ok
            }
            Err(e) => rejected(e),
        }
    })
}

/// Locates `q`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_locate(h: *const PlLocator, q: PlPoint, out: *mut PlLocation) -> PlStatus {
    let (Some(h), false) = (h.as_ref(), out.is_null()) else {
        return fail(PlStatus::NullPointer, "handle or out is null".into());
    };
    guard(|| {
        let q = match point(q) {
            Ok(q) => q,
            Err(s) => return s,
        };
        let (kind, id) = match h.loc.locate(&q) {
            LocateResult::OuterFace | LocateResult::Face(FaceName::Outer) => (PlLocationKind::Outer, 0),
            LocateResult::Face(FaceName::Bounded(f)) => (PlLocationKind::Face, f),
            LocateResult::OnBoundary(Boundary::Edge(e)) => (PlLocationKind::Edge, e),
            LocateResult::OnBoundary(Boundary::Vertex(v)) => (PlLocationKind::Vertex, v),
        };
        *out = PlLocation { kind, id };
        PlStatus::Ok
    })
}

/// Structure counters.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_stats(h: *const PlLocator, out: *mut PlStats) -> PlStatus {
    let (Some(h), false) = (h.as_ref(), out.is_null()) else {
        return fail(PlStatus::NullPointer, "handle or out is null".into());
    };
    guard(|| {
        let s = h.loc.stats();
        *out = PlStats {
            vertices: s.vertices,
            edges: s.edges,
            trapezoids: s.find_cc.trapezoids,
            merges_max_per_edge: s.locate_cc.merges_max_per_edge,
            backbone_nodes: s.locate_cc.backbone_nodes,
        };
        PlStatus::Ok
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn pl_status_name(s: PlStatus) -> *const c_char {
    let name: &'static CStr = match s {
        PlStatus::Ok => c"ok",
        PlStatus::NullPointer => c"null pointer",
        PlStatus::ZeroDenominator => c"zero denominator",
        PlStatus::DegenerateEdge => c"degenerate edge",
        PlStatus::DuplicateVertex => c"duplicate vertex",
        PlStatus::InvalidEdge => c"invalid edge",
        PlStatus::Internal => c"internal error",
    };
    name.as_ptr()
}
