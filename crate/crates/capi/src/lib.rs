//! C ABI for the engine. Documents are opaque handles; every operation
//! returns a status code and hands results back as newly allocated
//! NUL-terminated JSON strings that the caller releases with
//! [`nij_string_free`]. The last error message is kept per thread and can be
//! fetched with [`nij_last_error_message`].
//!
//! All entry points catch panics at the boundary and report them as
//! `NIJ_STATUS_INTERNAL` instead of unwinding across the FFI.

use libc::c_char;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nijalg::doc::Document;
use nijalg::EngineError;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NijStatus {
    /// success / property holds
    Ok = 0,
    /// a verification or decidable property failed; a report is still
    /// produced where documented
    VerifyFailed = 1,
    /// usage error: missing data, bad arguments
    Usage = 2,
    /// malformed document text
    Parse = 3,
    /// a NULL pointer or invalid UTF-8 was passed in
    BadInput = 4,
    /// internal error (panic caught at the boundary)
    Internal = 5,
}

/// Opaque parsed document.
pub struct NijDocument {
    inner: Document,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &EngineError) -> NijStatus {
    match err {
        EngineError::Parse(_) => NijStatus::Parse,
        EngineError::Usage(_) => NijStatus::Usage,
        EngineError::InvalidStructure { .. } | EngineError::NotCocycle { .. } => {
            NijStatus::VerifyFailed
        }
        _ => NijStatus::Usage,
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, NijStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(NijStatus::BadInput);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        NijStatus::BadInput
    })
}

fn hand_out(text: String, out: *mut *mut c_char) -> NijStatus {
    if out.is_null() {
        set_error("null output pointer");
        return NijStatus::BadInput;
    }
    match CString::new(text.replace('\0', " ")) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            NijStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL");
            NijStatus::Internal
        }
    }
}

fn guarded<F: FnOnce() -> NijStatus>(f: F) -> NijStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic caught at the FFI boundary");
            NijStatus::Internal
        }
    }
}

/// The document format version this library reads and writes.
#[no_mangle]
pub extern "C" fn nij_format_version() -> u32 {
    nijalg::doc::FORMAT_VERSION as u32
}

/// The last error message recorded on this thread. The pointer stays valid
/// until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn nij_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string allocated by this library.
#[no_mangle]
pub extern "C" fn nij_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

/// Parse a document from JSON text into an opaque handle.
#[no_mangle]
pub extern "C" fn nij_document_parse(
    text: *const c_char,
    out: *mut *mut NijDocument,
) -> NijStatus {
    guarded(|| {
        let text = match unsafe { read_utf8(text) } {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null output pointer");
            return NijStatus::BadInput;
        }
        match nijalg::doc::parse_document(text) {
            Ok(doc) => {
                let boxed = Box::new(NijDocument { inner: doc });
                unsafe { *out = Box::into_raw(boxed) };
                NijStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                unsafe { *out = ptr::null_mut() };
                status_of(&e)
            }
        }
    })
}

/// Release a document handle.
#[no_mangle]
pub extern "C" fn nij_document_free(doc: *mut NijDocument) {
    if !doc.is_null() {
        unsafe {
            drop(Box::from_raw(doc));
        }
    }
}

/// Emit the canonical text of a document.
#[no_mangle]
pub extern "C" fn nij_document_emit(
    doc: *const NijDocument,
    out_text: *mut *mut c_char,
) -> NijStatus {
    guarded(|| {
        if doc.is_null() {
            set_error("null document handle");
            return NijStatus::BadInput;
        }
        let doc = unsafe { &*doc };
        hand_out(nijalg::doc::emit_document(&doc.inner), out_text)
    })
}

fn run_cli(args: Vec<String>, report_json: *mut *mut c_char) -> NijStatus {
    let outcome = nijalg::cli::run_command(args);
    if outcome.exit_code == 2 || outcome.stdout.is_empty() {
        set_error(outcome.stderr.trim());
        return match outcome.exit_code {
            0 => NijStatus::Ok,
            1 => NijStatus::VerifyFailed,
            _ => NijStatus::Usage,
        };
    }
    let status = hand_out(outcome.stdout, report_json);
    if status != NijStatus::Ok {
        return status;
    }
    match outcome.exit_code {
        0 => NijStatus::Ok,
        _ => {
            set_error(outcome.stderr.trim());
            NijStatus::VerifyFailed
        }
    }
}

/// Write a document to a temporary file and run a CLI-level command on it.
/// Reports come back as canonical JSON.
fn with_temp_doc<F>(doc: &NijDocument, f: F) -> NijStatus
where
    F: FnOnce(&str) -> NijStatus,
{
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let n = COUNTER.fetch_add(1, Ordering::SeqCst);
    let path = std::env::temp_dir().join(format!(
        "nijalg-capi-{}-{n}.json",
        std::process::id()
    ));
    let text = nijalg::doc::emit_document(&doc.inner);
    if std::fs::write(&path, text).is_err() {
        set_error("could not stage the document in the temporary directory");
        return NijStatus::Internal;
    }
    let status = f(path.to_string_lossy().as_ref());
    let _ = std::fs::remove_file(&path);
    status
}

/// Verify every structure declared in the document. `NIJ_STATUS_OK` when all
/// laws hold, `NIJ_STATUS_VERIFY_FAILED` when violations were found (the
/// report lists them).
#[no_mangle]
pub extern "C" fn nij_verify(
    doc: *const NijDocument,
    seed: u64,
    report_json: *mut *mut c_char,
) -> NijStatus {
    guarded(|| {
        if doc.is_null() {
            set_error("null document handle");
            return NijStatus::BadInput;
        }
        let doc = unsafe { &*doc };
        with_temp_doc(doc, |path| {
            run_cli(
                vec![
                    "nijalg".into(),
                    "verify".into(),
                    "--seed".into(),
                    seed.to_string(),
                    path.into(),
                ],
                report_json,
            )
        })
    })
}

/// Betti table of the chosen complex (`hochschild`, `operator`,
/// `relative-operator`, `cone-full`, `cone-reduced`, `ns-shifted`).
#[no_mangle]
pub extern "C" fn nij_cohomology(
    doc: *const NijDocument,
    complex_kind: *const c_char,
    max_degree: u32,
    seed: u64,
    report_json: *mut *mut c_char,
) -> NijStatus {
    guarded(|| {
        if doc.is_null() {
            set_error("null document handle");
            return NijStatus::BadInput;
        }
        let kind = match unsafe { read_utf8(complex_kind) } {
            Ok(k) => k.to_string(),
            Err(s) => return s,
        };
        let doc = unsafe { &*doc };
        with_temp_doc(doc, |path| {
            run_cli(
                vec![
                    "nijalg".into(),
                    "cohomology".into(),
                    "--seed".into(),
                    seed.to_string(),
                    "--complex".into(),
                    kind.clone(),
                    "--max-degree".into(),
                    max_degree.to_string(),
                    path.into(),
                ],
                report_json,
            )
        })
    })
}

/// Run any engine command with CLI-style arguments (excluding the program
/// name), e.g. `{"wells", "ext.json", "--pair", "pair.json"}`. The report
/// JSON is returned on success and on decidable failures; `exit_code`
/// receives the CLI exit code (0 holds, 1 failed, 2 usage).
#[no_mangle]
pub extern "C" fn nij_run(
    argc: usize,
    argv: *const *const c_char,
    report_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> NijStatus {
    guarded(|| {
        if argv.is_null() || exit_code.is_null() {
            set_error("null argument array");
            return NijStatus::BadInput;
        }
        let mut args = vec!["nijalg".to_string()];
        for i in 0..argc {
            let p = unsafe { *argv.add(i) };
            match unsafe { read_utf8(p) } {
                Ok(a) => args.push(a.to_string()),
                Err(s) => return s,
            }
        }
        let outcome = nijalg::cli::run_command(args);
        unsafe { *exit_code = outcome.exit_code };
        if outcome.stdout.is_empty() {
            set_error(outcome.stderr.trim());
            if !report_json.is_null() {
                unsafe { *report_json = ptr::null_mut() };
            }
        } else {
            let status = hand_out(outcome.stdout, report_json);
            if status != NijStatus::Ok {
                return status;
            }
        }
        match outcome.exit_code {
            0 => NijStatus::Ok,
            1 => NijStatus::VerifyFailed,
            _ => NijStatus::Usage,
        }
    })
}
