//! C interface to covgraph.
//!
//! Graphs and morphisms cross the boundary as opaque handles built from the
//! same JSON documents the command-line tool reads. Every function returns a
//! [`CgStatus`]; on failure, [`cg_last_error_message`] describes the error.
//! Strings handed out by the library are released with [`cg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use covgraph::covering::{is_covering, Endpoint, GraphMorphism};
use covgraph::graph::{is_connected, Graph, Walk};
use covgraph::io::{self, report, GraphDoc, GraphRef, LabellingDoc, MorphismDoc, SubgroupDoc};
use covgraph::reconstruct::reconstruct;
use covgraph::skewprod::relative_skew_product;
use covgraph::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, schema violations, unknown names, non-coverings.
    InvalidInput = 3,
    /// A computed certificate did not verify.
    CheckFailed = 4,
    Internal = 5,
}

/// Which end of a walk the lifting anchor sits at.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgEnd {
    Source = 0,
    Range = 1,
}

/// A validated directed multigraph.
pub struct CgGraph(Graph);

/// A graph morphism between two validated graphs.
pub struct CgMorphism(GraphMorphism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', "\\0")).expect("interior NULs were escaped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(CgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::IsomorphismFailure(_) => CgStatus::CheckFailed,
            Error::Internal(_) => CgStatus::Internal,
            _ => CgStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null() -> Failure {
    Failure(CgStatus::NullPointer, "null pointer argument".into())
}

/// Runs `body`, recording any failure or panic for `cg_last_error_message`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CgStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CgStatus::InvalidUtf8, format!("argument is not UTF-8: {e}")))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(CgStatus::Internal, "output contains a NUL byte".into()))?;
    put(out, c.into_raw())
}

fn parse_graph(json: &str) -> Result<Graph, Failure> {
    Ok(io::parse::<GraphDoc>(json, "graph")?.to_graph()?)
}

/// Parses a graph document. On success `*out` owns a handle to release with
/// `cg_graph_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_from_json(json: *const c_char, out: *mut *mut CgGraph) -> CgStatus {
    guard(|| {
        let g = parse_graph(text(json)?)?;
        put(out, Box::into_raw(Box::new(CgGraph(g))))
    })
}

/// # Safety
/// `graph` must come from `cg_graph_from_json` and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_free(graph: *mut CgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_vertex_count(graph: *const CgGraph, out: *mut usize) -> CgStatus {
    guard(|| put(out, handle(graph)?.0.vertex_count()))
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_edge_count(graph: *const CgGraph, out: *mut usize) -> CgStatus {
    guard(|| put(out, handle(graph)?.0.edge_count()))
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_is_connected(graph: *const CgGraph, out: *mut bool) -> CgStatus {
    guard(|| put(out, is_connected(&handle(graph)?.0)))
}

/// Graphviz text for the graph, named `name`.
///
/// # Safety
/// `graph` must be a live handle, `name` a NUL-terminated string and `out`
/// writable. Release `*out` with `cg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cg_graph_to_dot(graph: *const CgGraph, name: *const c_char, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let g = handle(graph)?;
        put_string(out, io::to_dot(&g.0, text(name)?))
    })
}

/// Parses a morphism document (domain, codomain and both maps).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable. Release the
/// handle with `cg_morphism_free`.
#[no_mangle]
pub unsafe extern "C" fn cg_morphism_from_json(json: *const c_char, out: *mut *mut CgMorphism) -> CgStatus {
    guard(|| {
        let m = io::parse::<MorphismDoc>(text(json)?, "morphism")?.to_morphism()?;
        put(out, Box::into_raw(Box::new(CgMorphism(m))))
    })
}

/// # Safety
/// `morphism` must come from `cg_morphism_from_json` and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn cg_morphism_free(morphism: *mut CgMorphism) {
    if !morphism.is_null() {
        drop(Box::from_raw(morphism));
    }
}

fn covering(m: &CgMorphism) -> Result<covgraph::covering::Covering, Failure> {
    is_covering(&m.0).map_err(|e| Failure(CgStatus::InvalidInput, Error::from(e).to_string()))
}

/// Number of sheets of a covering. Fails with `InvalidInput` when the
/// morphism is not a covering or the graphs are not connected.
///
/// # Safety
/// `morphism` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_cover_sheets(morphism: *const CgMorphism, out: *mut usize) -> CgStatus {
    guard(|| {
        let p = covering(handle(morphism)?)?;
        put(out, p.sheets()?)
    })
}

/// Lifts a walk in the codomain, written like `"x y' x"` or `"@u"`, through
/// the covering. The lift starts (or ends, per `end`) at the vertex `anchor`
/// of the domain; `*out` receives the lifted walk in the same syntax.
///
/// # Safety
/// `morphism` must be a live handle, `walk` and `anchor` NUL-terminated
/// strings and `out` writable. Release `*out` with `cg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cg_cover_lift(
    morphism: *const CgMorphism,
    walk: *const c_char,
    anchor: *const c_char,
    end: CgEnd,
    out: *mut *mut c_char,
) -> CgStatus {
    guard(|| {
        let p = covering(handle(morphism)?)?;
        let a = Walk::parse(p.codomain(), text(walk)?)?;
        let z = p.domain().vertex(text(anchor)?)?;
        let end = match end {
            CgEnd::Source => Endpoint::Source,
            CgEnd::Range => Endpoint::Range,
        };
        put_string(out, p.lift_walk(&a, z, end)?.display(p.domain()))
    })
}

/// Reconstructs a covering as a skew product based at the domain vertex
/// `base` and writes the reconstruction document as JSON. Returns
/// `CheckFailed` (with the document still written) when a certificate fails.
///
/// # Safety
/// `morphism` must be a live handle, `base` a NUL-terminated string and
/// `out` writable. Release `*out` with `cg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cg_reconstruct_json(morphism: *const CgMorphism, base: *const c_char, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let p = covering(handle(morphism)?)?;
        let v = p.domain().vertex(text(base)?)?;
        let r = reconstruct(&p, v)?;
        put_string(out, io::to_json(&report::reconstruction(&r)))?;
        if r.all_checks_pass() {
            Ok(())
        } else {
            Err(Failure(CgStatus::CheckFailed, "a reconstruction certificate failed".into()))
        }
    })
}

/// Builds the relative skew product of a graph, a labelling and a subgroup,
/// each given as a JSON document, and writes the skew product document. A
/// labelling that names its graph by path has that path read relative to
/// the working directory.
///
/// # Safety
/// The three documents must be NUL-terminated strings and `out` writable.
/// Release `*out` with `cg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cg_skew_json(
    graph_json: *const c_char,
    labelling_json: *const c_char,
    subgroup_json: *const c_char,
    out: *mut *mut c_char,
) -> CgStatus {
    guard(|| {
        let g = parse_graph(text(graph_json)?)?;
        let doc = io::parse::<LabellingDoc>(text(labelling_json)?, "labelling")?;
        if let Some(GraphRef::Path(path)) = &doc.graph {
            let referenced = std::fs::read_to_string(Path::new(path))
                .map_err(|e| Failure(CgStatus::InvalidInput, format!("cannot read {path}: {e}")))?;
            if parse_graph(&referenced)? != g {
                return Err(Failure(CgStatus::InvalidInput, format!("labelling refers to {path}, a different graph")));
            }
        }
        let c = doc.to_labelling(&g)?;
        let q = io::parse::<SubgroupDoc>(text(subgroup_json)?, "subgroup")?.to_cosets()?;
        let sp = relative_skew_product(&g, &c, &q)?;
        put_string(out, io::to_json(&report::skew(&sp)))
    })
}

/// The message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
