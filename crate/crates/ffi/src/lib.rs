//! C ABI over `shapes-core`.
//!
//! Objects cross the boundary as opaque pointers created by `*_parse`,
//! `*_load` or `shapes_validate_*` and released with the matching `*_free`.
//! Every fallible call returns a [`ShapesStatus`]; on failure
//! [`shapes_last_error`] describes the problem for the calling thread.
//! Strings returned to the caller are released with [`shapes_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shapes_core::rdf::{parse_turtle, serialize_turtle, Graph};
use shapes_core::shacl::{load_shacl, scope_targets, ShaclSchema};
use shapes_core::shexc::parse_shexc;
use shapes_core::validate::{parse_shape_map, validate_shacl_pairs, ShexEngine, Status, ValidationReport};
use shapes_core::wigen::{generate, GenConfig, ShapeKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapesStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SchemaError = 4,
    ShapeMapError = 5,
    GenerateError = 6,
    IndexOutOfRange = 7,
    Panic = 8,
}

/// A parsed RDF graph.
pub struct ShapesGraph {
    graph: Graph,
}

/// A checked ShEx schema.
pub struct ShapesShexSchema {
    engine: ShexEngine,
    prefixes: Vec<(String, String)>,
}

/// A loaded SHACL shapes graph.
pub struct ShapesShaclSchema {
    schema: ShaclSchema,
    prefixes: Vec<(String, String)>,
}

/// Per-pair verdicts of one validation run.
pub struct ShapesReport {
    report: ValidationReport,
    prefixes: Vec<(String, String)>,
}

/// Node counts, invalid counts and options for [`shapes_generate`].
/// Counts are indexed Country, DataSet, Slice, Observation, Computation,
/// Indicator, Organization.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ShapesGenConfig {
    pub counts: [usize; 7],
    pub invalid: [usize; 7],
    pub typed: bool,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(ShapesStatus, String);

fn fail(status: ShapesStatus, msg: impl ToString) -> Fail {
    Fail(status, msg.to_string())
}

/// Runs `f`, converting failures and panics into a status and the
/// thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ShapesStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShapesStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ShapesStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(ShapesStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(ShapesStatus::InvalidUtf8, e))
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(ShapesStatus::NullArgument, "null handle"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(fail(ShapesStatus::NullArgument, "null output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(fail(ShapesStatus::NullArgument, "null output pointer"));
    }
    *out = to_c(s);
    Ok(())
}

/// The message of the last failed call on this thread, or null. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn shapes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn shapes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses Turtle text into a graph.
///
/// # Safety
/// `turtle` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_graph_parse_turtle(turtle: *const c_char, out: *mut *mut ShapesGraph) -> ShapesStatus {
    guard(|| {
        let graph = parse_turtle(text(turtle)?).map_err(|e| fail(ShapesStatus::ParseError, e))?;
        put(out, ShapesGraph { graph })
    })
}

/// Number of distinct triples, 0 for null.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn shapes_graph_len(g: *const ShapesGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.len())
}

/// Serializes the graph as Turtle into `*out`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_graph_to_turtle(g: *const ShapesGraph, out: *mut *mut c_char) -> ShapesStatus {
    guard(|| put_string(out, serialize_turtle(&obj(g)?.graph)))
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shapes_graph_free(g: *mut ShapesGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses and checks a ShExC schema.
///
/// # Safety
/// `shexc` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_shex_parse(shexc: *const c_char, out: *mut *mut ShapesShexSchema) -> ShapesStatus {
    guard(|| {
        let schema = parse_shexc(text(shexc)?).map_err(|e| fail(ShapesStatus::ParseError, e))?;
        let engine = ShexEngine::new(&schema).map_err(|e| fail(ShapesStatus::SchemaError, e))?;
        put(out, ShapesShexSchema { prefixes: schema.prefixes.clone(), engine })
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shapes_shex_free(s: *mut ShapesShexSchema) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Loads a SHACL shapes graph written in Turtle.
///
/// # Safety
/// `turtle` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_shacl_load(turtle: *const c_char, out: *mut *mut ShapesShaclSchema) -> ShapesStatus {
    guard(|| {
        let g = parse_turtle(text(turtle)?).map_err(|e| fail(ShapesStatus::ParseError, e))?;
        let (schema, _) = load_shacl(&g).map_err(|e| fail(ShapesStatus::SchemaError, e))?;
        put(out, ShapesShaclSchema { schema, prefixes: g.prefixes().to_vec() })
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shapes_shacl_free(s: *mut ShapesShaclSchema) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

fn prefixes_of(graph: &Graph, schema: &[(String, String)]) -> Vec<(String, String)> {
    let mut p = graph.prefixes().to_vec();
    p.extend(schema.iter().cloned());
    p
}

/// Validates the `node@shape;...` pairs of `shape_map` against a ShEx
/// schema using up to `threads` workers.
///
/// # Safety
/// Handles must be live; `shape_map` nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_validate_shex(
    schema: *const ShapesShexSchema,
    graph: *const ShapesGraph,
    shape_map: *const c_char,
    threads: usize,
    out: *mut *mut ShapesReport,
) -> ShapesStatus {
    guard(|| {
        let (s, g) = (obj(schema)?, obj(graph)?);
        let prefixes = prefixes_of(&g.graph, &s.prefixes);
        let pairs = parse_shape_map(text(shape_map)?, &prefixes).map_err(|e| fail(ShapesStatus::ShapeMapError, e))?;
        let report = s
            .engine
            .validate_shape_map_parallel(&g.graph, &pairs, threads)
            .map_err(|e| fail(ShapesStatus::ShapeMapError, e))?;
        put(out, ShapesReport { report, prefixes })
    })
}

/// Validates against a SHACL schema. A null `shape_map` selects the focus
/// nodes through the schema's scopes.
///
/// # Safety
/// Handles must be live; `shape_map` null or nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_validate_shacl(
    schema: *const ShapesShaclSchema,
    graph: *const ShapesGraph,
    shape_map: *const c_char,
    threads: usize,
    out: *mut *mut ShapesReport,
) -> ShapesStatus {
    guard(|| {
        let (s, g) = (obj(schema)?, obj(graph)?);
        let prefixes = prefixes_of(&g.graph, &s.prefixes);
        let pairs = if shape_map.is_null() {
            scope_targets(&s.schema, &g.graph)
        } else {
            parse_shape_map(text(shape_map)?, &prefixes).map_err(|e| fail(ShapesStatus::ShapeMapError, e))?
        };
        let report = validate_shacl_pairs(&g.graph, &s.schema, &pairs, threads)
            .map_err(|e| fail(ShapesStatus::ShapeMapError, e))?;
        put(out, ShapesReport { report, prefixes })
    })
}

/// Number of (node, shape) results.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_len(r: *const ShapesReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.results.len())
}

/// True when every result is conformant; false for null.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_is_conformant(r: *const ShapesReport) -> bool {
    r.as_ref().is_some_and(|r| r.report.is_conformant())
}

/// Number of nonconformant results.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_nonconformant(r: *const ShapesReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.stats.nonconformant)
}

/// Writes whether result `index` is conformant into `*conformant`.
///
/// # Safety
/// `r` must be a live report handle; `conformant` writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_status(
    r: *const ShapesReport,
    index: usize,
    conformant: *mut bool,
) -> ShapesStatus {
    guard(|| {
        let r = obj(r)?;
        let res = r.report.results.get(index).ok_or_else(|| {
            fail(ShapesStatus::IndexOutOfRange, format!("index {index} of {}", r.report.results.len()))
        })?;
        if conformant.is_null() {
            return Err(fail(ShapesStatus::NullArgument, "null output pointer"));
        }
        *conformant = res.status == Status::Conformant;
        Ok(())
    })
}

/// The results as JSON lines with compacted IRIs.
///
/// # Safety
/// `r` must be a live report handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_jsonl(r: *const ShapesReport, out: *mut *mut c_char) -> ShapesStatus {
    guard(|| {
        let r = obj(r)?;
        put_string(out, r.report.to_jsonl(&r.prefixes))
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shapes_report_free(r: *mut ShapesReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Generates WebIndex data. `*graph` receives the graph and, when
/// `manifest` is not null, `*manifest` the tab-separated manifest.
///
/// # Safety
/// `cfg` must point at a config; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn shapes_generate(
    cfg: *const ShapesGenConfig,
    graph: *mut *mut ShapesGraph,
    manifest: *mut *mut c_char,
) -> ShapesStatus {
    guard(|| {
        let c = obj(cfg)?;
        if graph.is_null() {
            return Err(fail(ShapesStatus::NullArgument, "null output pointer"));
        }
        let mut gc = GenConfig { typed: c.typed, seed: c.seed, ..GenConfig::default() };
        for (i, kind) in ShapeKind::ALL.into_iter().enumerate() {
            gc.set_count(kind, c.counts[i]);
            if c.invalid[i] > 0 {
                gc.invalid.insert(kind, c.invalid[i]);
            }
        }
        let (g, m) = generate(&gc).map_err(|e| fail(ShapesStatus::GenerateError, e))?;
        if !manifest.is_null() {
            *manifest = to_c(m.to_tsv());
        }
        put(graph, ShapesGraph { graph: g })
    })
}
