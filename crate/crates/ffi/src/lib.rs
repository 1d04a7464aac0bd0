//! C ABI over the workbench core.
//!
//! Conventions:
//! - Every fallible function returns a [`WbStatus`]; results come back
//!   through out-pointers.
//! - Strings passed in are NUL-terminated UTF-8. Strings handed out are owned
//!   by the caller and released with [`wb_string_free`].
//! - After a non-`Ok` status, [`wb_last_error`] describes the failure on the
//!   calling thread.
//! - Handles are opaque and released with their `_free` function. A handle
//!   must not be used from two threads at once.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use workbench_core::codegen::{lint_code, sanitize_code, CodeRules};
use workbench_core::export::ExportMode;
use workbench_core::gateway::extract_json_array;
use workbench_core::matrix::{CellKey, MatrixState};
use workbench_core::store::ProjectStore;
use workbench_core::{Error, ErrorClass};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WbStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, malformed argument or rejected input.
    InvalidArgument = 1,
    NotFound = 2,
    /// Operation not allowed in the current state (ordering, duplicates).
    Conflict = 3,
    /// Input parsed but could not be used (no document, bad shape).
    Unprocessable = 4,
    Internal = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Design matrix state.
pub struct WbMatrix(MatrixState);

/// Project store rooted at a data directory.
pub struct WbStore(ProjectStore);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|b| *b != 0);
    let c = CString::new(bytes).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(WbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e.class() {
            ErrorClass::Validation => WbStatus::InvalidArgument,
            ErrorClass::NotFound => WbStatus::NotFound,
            ErrorClass::Conflict => WbStatus::Conflict,
            ErrorClass::Unprocessable => WbStatus::Unprocessable,
            ErrorClass::Upstream | ErrorClass::Internal => WbStatus::Internal,
        };
        Fail(status, format!("{}: {e}", e.code()))
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(WbStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WbStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WbStatus::Panic
        }
    }
}

unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{name} is not UTF-8")))
}

unsafe fn opt_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        arg(p, name).map(Some)
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| Fail(WbStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: &impl serde::Serialize) -> Result<(), Fail> {
    let s = serde_json::to_string(v).map_err(|e| Fail(WbStatus::Internal, e.to_string()))?;
    put_string(out, s)
}

unsafe fn handle<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| invalid("handle is null"))
}

unsafe fn cell(p: *const c_char) -> Result<CellKey, Fail> {
    arg(p, "cell")?.parse().map_err(|e: String| invalid(e))
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next call into this library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn wb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn wb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------- codegen

/// Extracts the html document from a raw completion.
///
/// # Safety
/// `raw` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_sanitize_code(raw: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| put_string(out, sanitize_code(arg(raw, "raw")?)?))
}

/// Lints a document. `rules_json` may be NULL for the default rules. Writes
/// a JSON array of issues.
///
/// # Safety
/// `html` is a valid C string, `rules_json` is NULL or a valid C string,
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_lint_code(html: *const c_char, rules_json: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let rules = match opt_arg(rules_json, "rules_json")? {
            Some(j) => {
                let r: CodeRules = serde_json::from_str(j).map_err(|e| invalid(format!("rules: {e}")))?;
                r.validate().map_err(invalid)?;
                r
            }
            None => CodeRules::default(),
        };
        put_json(out, &lint_code(arg(html, "html")?, &rules))
    })
}

/// Pulls the first JSON array out of model output; writes it re-serialized.
///
/// # Safety
/// `text` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_extract_json_array(text: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let values = extract_json_array(arg(text, "text")?).map_err(|e| Fail(WbStatus::Unprocessable, e.to_string()))?;
        put_json(out, &values)
    })
}

// ---------------------------------------------------------------- matrix

/// New empty matrix. Never NULL; free with [`wb_matrix_free`].
#[no_mangle]
pub extern "C" fn wb_matrix_new() -> *mut WbMatrix {
    Box::into_raw(Box::new(WbMatrix(MatrixState::default())))
}

/// # Safety
/// `m` is NULL or came from [`wb_matrix_new`] / [`wb_matrix_from_json`].
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_free(m: *mut WbMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Sets the problem statement and clears all cells.
///
/// # Safety
/// `m` is a live handle; `text` is a valid C string.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_submit_problem(m: *mut WbMatrix, text: *const c_char) -> WbStatus {
    guard(|| Ok(handle(m)?.0.submit_problem(arg(text, "text")?)?))
}

/// Submits `content` into a cell named like `"person:idea"`.
///
/// # Safety
/// `m` is a live handle; `cell` and `content` are valid C strings.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_submit_cell(m: *mut WbMatrix, cell_key: *const c_char, content: *const c_char) -> WbStatus {
    guard(|| {
        let key = cell(cell_key)?;
        Ok(handle(m)?.0.submit_cell(key, arg(content, "content")?)?)
    })
}

/// Writes the context a generation for `cell` would receive, as a JSON
/// array of `[cell, text]` pairs in submit order.
///
/// # Safety
/// `m` is a live handle; `cell` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_context(m: *mut WbMatrix, cell_key: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let key = cell(cell_key)?;
        put_json(out, &handle(m)?.0.context_for(key))
    })
}

/// Writes 1 to `out` when every cell holds a current submission.
///
/// # Safety
/// `m` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_is_complete(m: *mut WbMatrix, out: *mut bool) -> WbStatus {
    guard(|| {
        let done = handle(m)?.0.is_complete();
        *out.as_mut().ok_or_else(|| invalid("output pointer is null"))? = done;
        Ok(())
    })
}

/// Serializes the whole matrix state.
///
/// # Safety
/// `m` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_to_json(m: *mut WbMatrix, out: *mut *mut c_char) -> WbStatus {
    guard(|| put_json(out, &handle(m)?.0))
}

/// Restores a matrix from [`wb_matrix_to_json`] output.
///
/// # Safety
/// `json` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_matrix_from_json(json: *const c_char, out: *mut *mut WbMatrix) -> WbStatus {
    guard(|| {
        let state: MatrixState = serde_json::from_str(arg(json, "json")?).map_err(|e| invalid(e.to_string()))?;
        let out = out.as_mut().ok_or_else(|| invalid("output pointer is null"))?;
        *out = Box::into_raw(Box::new(WbMatrix(state)));
        Ok(())
    })
}

// ---------------------------------------------------------------- store

/// Opens (creating if needed) a store under `data_dir`.
///
/// # Safety
/// `data_dir` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_store_open(data_dir: *const c_char, out: *mut *mut WbStore) -> WbStatus {
    guard(|| {
        let store = ProjectStore::open(PathBuf::from(arg(data_dir, "data_dir")?))?;
        let out = out.as_mut().ok_or_else(|| invalid("output pointer is null"))?;
        *out = Box::into_raw(Box::new(WbStore(store)));
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or came from [`wb_store_open`].
#[no_mangle]
pub unsafe extern "C" fn wb_store_free(s: *mut WbStore) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Creates a project; writes its id.
///
/// # Safety
/// `s` is a live handle; `name` is a valid C string; `out_id` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_store_create_project(s: *mut WbStore, name: *const c_char, out_id: *mut *mut c_char) -> WbStatus {
    guard(|| {
        let p = handle(s)?.0.create_project(arg(name, "name")?)?;
        put_string(out_id, p.id)
    })
}

/// Writes a JSON array of project summaries.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_store_list_projects(s: *mut WbStore, out: *mut *mut c_char) -> WbStatus {
    guard(|| put_json(out, &handle(s)?.0.list_projects()?))
}

/// Writes the full project, code included, as JSON.
///
/// # Safety
/// `s` is a live handle; `id` is a valid C string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_store_load_project(s: *mut WbStore, id: *const c_char, out: *mut *mut c_char) -> WbStatus {
    guard(|| put_json(out, &handle(s)?.0.load(arg(id, "id")?)?))
}

/// Replaces a project's design matrix with the handle's state.
///
/// # Safety
/// `s` and `m` are live handles; `id` is a valid C string.
#[no_mangle]
pub unsafe extern "C" fn wb_store_save_matrix(s: *mut WbStore, id: *const c_char, m: *mut WbMatrix) -> WbStatus {
    guard(|| {
        let store = &handle(s)?.0;
        let mut p = store.load(arg(id, "id")?)?;
        p.matrix = handle(m)?.0.clone();
        p.touch();
        Ok(store.save(&p)?)
    })
}

/// # Safety
/// `s` is a live handle; `id` is a valid C string.
#[no_mangle]
pub unsafe extern "C" fn wb_store_delete_project(s: *mut WbStore, id: *const c_char) -> WbStatus {
    guard(|| Ok(handle(s)?.0.delete_project(arg(id, "id")?)?))
}

/// Exports a code version as a standalone document and writes its path.
/// `step` 0 and a NULL `version` pick the defaults. `origin` NULL selects
/// inline data; otherwise the document reads from that server.
///
/// # Safety
/// `s` is a live handle; `id` is a valid C string; `version` and `origin`
/// are NULL or valid C strings; `out_path` is writable.
#[no_mangle]
pub unsafe extern "C" fn wb_store_export(
    s: *mut WbStore,
    id: *const c_char,
    step: usize,
    version: *const c_char,
    origin: *const c_char,
    out_path: *mut *mut c_char,
) -> WbStatus {
    guard(|| {
        let store = &handle(s)?.0;
        let p = store.load(arg(id, "id")?)?;
        let mode = match opt_arg(origin, "origin")? {
            Some(o) => ExportMode::Server { origin: o.to_string() },
            None => ExportMode::Inline,
        };
        let step = (step > 0).then_some(step);
        let path = store.export_artifact(&p, step, opt_arg(version, "version")?, &mode)?;
        put_string(out_path, path.to_string_lossy().into_owned())
    })
}
