//! Exercises the C ABI through the exported symbols, plus a syntax check of
//! the generated header when a C compiler is around.

use libc::c_char;
use nijalg_capi::*;
use std::ffi::{CStr, CString};
use std::ptr;

const K2_DOC: &str = r#"{
  "version": 1,
  "name": "k2",
  "algebra": { "dim": 2, "mu": [[[1,0],[0,0]],[[0,0],[0,1]]] },
  "nijenhuis": [[1,0],[0,0]]
}"#;

fn parse(text: &str) -> *mut NijDocument {
    let c = CString::new(text).unwrap();
    let mut doc: *mut NijDocument = ptr::null_mut();
    let status = nij_document_parse(c.as_ptr(), &mut doc);
    assert_eq!(status, NijStatus::Ok);
    assert!(!doc.is_null());
    doc
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    nij_string_free(p);
    s
}

#[test]
fn parse_emit_roundtrip() {
    let doc = parse(K2_DOC);
    let mut text: *mut c_char = ptr::null_mut();
    assert_eq!(nij_document_emit(doc, &mut text), NijStatus::Ok);
    let emitted = take_string(text);
    assert!(emitted.contains("\"version\": 1"));
    // canonical: emitting a reparse gives identical bytes
    let doc2 = parse(&emitted);
    let mut text2: *mut c_char = ptr::null_mut();
    assert_eq!(nij_document_emit(doc2, &mut text2), NijStatus::Ok);
    assert_eq!(take_string(text2), emitted);
    nij_document_free(doc);
    nij_document_free(doc2);
}

#[test]
fn verify_and_cohomology() {
    let doc = parse(K2_DOC);
    let mut report: *mut c_char = ptr::null_mut();
    assert_eq!(nij_verify(doc, 0, &mut report), NijStatus::Ok);
    let report = take_string(report);
    assert!(report.contains("\"ok\": true"));

    let kind = CString::new("operator").unwrap();
    let mut report: *mut c_char = ptr::null_mut();
    assert_eq!(
        nij_cohomology(doc, kind.as_ptr(), 2, 0, &mut report),
        NijStatus::Ok
    );
    let report = take_string(report);
    assert!(report.contains("\"betti\""));
    nij_document_free(doc);
}

#[test]
fn failing_verification_reports() {
    let bad = r#"{
  "version": 1,
  "algebra": { "dim": 2, "mu": [[[1,0],[0,0]],[[0,0],[0,1]]] },
  "nijenhuis": [[0,1],[1,0]]
}"#;
    let doc = parse(bad);
    let mut report: *mut c_char = ptr::null_mut();
    assert_eq!(nij_verify(doc, 0, &mut report), NijStatus::VerifyFailed);
    let report = take_string(report);
    assert!(report.contains("\"ok\": false"));
    nij_document_free(doc);
}

#[test]
fn error_paths() {
    // parse failure sets the thread-local error
    let c = CString::new("{ not json").unwrap();
    let mut doc: *mut NijDocument = ptr::null_mut();
    assert_eq!(nij_document_parse(c.as_ptr(), &mut doc), NijStatus::Parse);
    assert!(doc.is_null());
    let msg = unsafe { CStr::from_ptr(nij_last_error_message()) }
        .to_str()
        .unwrap();
    assert!(msg.contains("JSON"), "message: {msg}");
    // null pointers are rejected
    assert_eq!(
        nij_document_parse(ptr::null(), &mut doc),
        NijStatus::BadInput
    );
    assert_eq!(nij_verify(ptr::null(), 0, &mut (ptr::null_mut())), NijStatus::BadInput);
    // freeing null is a no-op
    nij_string_free(ptr::null_mut());
    nij_document_free(ptr::null_mut());
}

#[test]
fn run_arbitrary_command() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/golden");
    let file = dir.join("t3.json");
    let args: Vec<CString> = ["ns", file.to_str().unwrap()]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let argv: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
    let mut report: *mut c_char = ptr::null_mut();
    let mut code: i32 = -1;
    let status = nij_run(argv.len(), argv.as_ptr(), &mut report, &mut code);
    assert_eq!(status, NijStatus::Ok);
    assert_eq!(code, 0);
    let report = take_string(report);
    assert!(report.contains("\"dendriform\""));
}

#[test]
fn generated_header_is_coherent() {
    let header = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("include/nijalg.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for symbol in [
        "nij_document_parse",
        "nij_document_free",
        "nij_document_emit",
        "nij_verify",
        "nij_cohomology",
        "nij_run",
        "nij_string_free",
        "nij_last_error_message",
        "nij_format_version",
        "NijStatus",
        "NijDocument",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
    // syntax-check with a C compiler when one is available
    for cc in ["clang", "cc", "gcc"] {
        if std::process::Command::new(cc)
            .arg("--version")
            .output()
            .is_ok()
        {
            let status = std::process::Command::new(cc)
                .args(["-fsyntax-only", "-x", "c", header.to_str().unwrap()])
                .status()
                .unwrap();
            assert!(status.success(), "{cc} rejected the generated header");
            return;
        }
    }
}
