//! Golden-report tests: every CLI command must reproduce the committed
//! report byte for byte, and document parse -> emit -> parse must be the
//! identity on the fixture corpus.

use nijalg::cli::run_command;
use nijalg::doc::{emit_document, parse_document};
use std::path::PathBuf;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> nijalg::cli::CliOutcome {
    let dir = golden_dir();
    let argv: Vec<String> = std::iter::once("nijalg".to_string())
        .chain(args.iter().map(|a| {
            if a.ends_with(".json") {
                dir.join(a).to_string_lossy().into_owned()
            } else {
                a.to_string()
            }
        }))
        .collect();
    run_command(argv)
}

fn check_golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(
        out.exit_code, 0,
        "command {args:?} failed: {}",
        out.stderr
    );
    let want = std::fs::read_to_string(golden_dir().join(name)).expect("golden file");
    assert_eq!(out.stdout, want, "golden mismatch for {name}");
}

#[test]
fn golden_verify() {
    check_golden("verify-k2.golden", &["verify", "k2.json"]);
    check_golden(
        "verify-random3.golden",
        &["verify", "--seed", "42", "random3.json"],
    );
    check_golden("verify-k2-crossed.golden", &["verify", "k2-crossed.json"]);
}

#[test]
fn golden_cohomology() {
    check_golden(
        "cohomology-t3-cone-reduced.golden",
        &["cohomology", "t3.json", "--complex", "cone-reduced", "--max-degree", "3"],
    );
    check_golden(
        "cohomology-k2-operator.golden",
        &["cohomology", "k2.json", "--complex", "operator", "--max-degree", "3"],
    );
    check_golden(
        "cohomology-t3-ns-shifted.golden",
        &["cohomology", "t3.json", "--complex", "ns-shifted", "--max-degree", "2"],
    );
}

#[test]
fn golden_les_and_deform() {
    check_golden("les-k2.golden", &["les", "k2.json", "--max-degree", "3"]);
    check_golden("deform-t3.golden", &["deform", "t3-deform.json"]);
}

#[test]
fn golden_extension_chain() {
    check_golden("extend-t3.golden", &["extend", "t3-cocycle.json"]);
    check_golden("extract-t3.golden", &["extract-cocycle", "t3-extension.json"]);
    check_golden(
        "wells-t3.golden",
        &["wells", "t3-extension.json", "--pair", "t3-pair.json"],
    );
    check_golden(
        "induce-t3.golden",
        &["induce", "t3-extension.json", "--pair", "t3-pair.json"],
    );
}

#[test]
fn golden_wells_incompatible() {
    let out = run(&["wells", "k2-idm-extension.json", "--pair", "k2-swap-pair.json"]);
    assert_eq!(out.exit_code, 1);
    let want = std::fs::read_to_string(golden_dir().join("wells-incompatible.golden")).unwrap();
    assert_eq!(out.stdout, want);
}

#[test]
fn golden_homotopy() {
    check_golden(
        "homotopy-strict-to-crossed.golden",
        &["homotopy", "k2-strict.json", "--action", "strict-to-crossed"],
    );
    check_golden(
        "homotopy-crossed-to-strict.golden",
        &["homotopy", "k2-crossed.json", "--action", "crossed-to-strict"],
    );
    check_golden(
        "homotopy-induce-nsinf.golden",
        &["homotopy", "k2-graded.json", "--action", "induce-nsinf"],
    );
    check_golden(
        "homotopy-deform.golden",
        &["homotopy", "k2-graded.json", "--action", "deform"],
    );
}

#[test]
fn golden_ns_and_raw_format() {
    check_golden("ns-t3.golden", &["ns", "t3.json"]);
    check_golden("ns-t3-raw.golden", &["ns", "t3.json", "--format", "raw"]);
}

#[test]
fn document_roundtrip_identity_on_corpus() {
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
        let emitted = emit_document(&doc);
        let doc2 = parse_document(&emitted).unwrap();
        let emitted2 = emit_document(&doc2);
        assert_eq!(emitted, emitted2, "roundtrip not canonical for {path:?}");
    }
}

#[test]
fn reports_are_reproducible() {
    // identical inputs, identical bytes
    let a = run(&["cohomology", "t3.json", "--complex", "cone-full", "--max-degree", "2"]);
    let b = run(&["cohomology", "t3.json", "--complex", "cone-full", "--max-degree", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.exit_code, 0);
}
