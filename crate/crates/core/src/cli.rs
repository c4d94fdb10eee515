//! Command surface. Every command loads documents, calls the corresponding
//! library operation, writes a machine-readable JSON report to stdout and a
//! one-line human summary per item to stderr. The CLI adds no computation of
//! its own.
//!
//! Exit codes: 0 = success / property holds, 1 = a verification or
//! decidable property failed (report still emitted), 2 = usage or format
//! error.

use crate::algebra::{
    verify_admissible, verify_nij_bimodule_operator, verify_nijenhuis_operator, Bimodule,
    LinearMap, NijAlgebra, Report,
};
use crate::complexes::{build_complex, cohomology_labeled, les_report, ComplexConfig, ComplexKind};
use crate::defext::{
    cocycle_from_extension, extension_from_cocycle, induce_automorphism, wells_obstruction,
    AutoPair, Cocycle2, Extension,
};
use crate::doc::{emit_document, parse_document, Document};
use crate::error::{EngineError, Result};
use crate::homotopy::{
    crossed_to_strict, deformed_ainf, induced_nsinf, skeletal_to_cocycle, strict_to_crossed,
    verify_homotopy_nij, verify_strict_hn, CrossedModule, TwoTermHN,
};
use crate::nsalg::{encode_pi, induced_ns, is_maurer_cartan, verify_ns};
use crate::report::{
    cohomology_value, les_value, matrix_value, render, report_value, tensor_value,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// pretty-printed canonical JSON
    Report,
    /// compact single-line JSON
    Raw,
}

#[derive(Parser, Debug)]
#[command(
    name = "nijalg",
    about = "Exact-arithmetic engine for Nijenhuis algebras: verification, deformation cohomology, extensions, Wells obstructions and homotopy structures",
    version
)]
struct Cli {
    /// Seed for generated fixtures (documents with a `generate` stanza)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for the report on stdout
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Report)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify every structure declared in the document
    Verify { file: PathBuf },
    /// Betti numbers of a chosen cochain complex
    Cohomology {
        file: PathBuf,
        /// hochschild | operator | relative-operator | cone-full | cone-reduced | ns-shifted
        #[arg(long, default_value = "cone-reduced")]
        complex: String,
        #[arg(long = "max-degree", default_value_t = 3)]
        max_degree: usize,
    },
    /// Exactness of the long exact sequence by dimension counts
    Les {
        file: PathBuf,
        #[arg(long = "max-degree", default_value_t = 3)]
        max_degree: usize,
    },
    /// Infinitesimal-deformation cocycle test (and equivalence, if a second
    /// deformation is declared)
    Deform { file: PathBuf },
    /// Build the abelian extension classified by the declared 2-cocycle
    Extend { file: PathBuf },
    /// Extract the classifying 2-cocycle of the declared extension
    ExtractCocycle { file: PathBuf },
    /// Wells obstruction of an automorphism pair in an extension
    Wells {
        file: PathBuf,
        #[arg(long)]
        pair: PathBuf,
    },
    /// Induce an extension automorphism from a compatible pair
    Induce {
        file: PathBuf,
        #[arg(long)]
        pair: PathBuf,
    },
    /// Homotopy structures: verification and the correspondence maps
    Homotopy {
        file: PathBuf,
        /// verify | skeletal-to-cocycle | cocycle-to-skeletal |
        /// strict-to-crossed | crossed-to-strict | induce-nsinf | deform
        #[arg(long, default_value = "verify")]
        action: String,
    },
    /// Induced NS-algebra of the declared Nijenhuis algebra
    Ns { file: PathBuf },
}

/// Outcome of one CLI invocation.
#[derive(Debug)]
pub struct CliOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EngineError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

struct Ctx {
    seed: u64,
    raw: bool,
    stderr: String,
}

impl Ctx {
    fn note(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }
}

/// Run one command; never panics on user input, never prints directly.
pub fn run_command<I, S>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own help/usage text; --help and --version are
            // not errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.to_string();
            return if code == 0 {
                CliOutcome {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutcome {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut ctx = Ctx {
        seed: cli.seed,
        raw: cli.format == OutputFormat::Raw,
        stderr: String::new(),
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok((value, ok)) => CliOutcome {
            exit_code: if ok { 0 } else { 1 },
            stdout: render(&value, ctx.raw),
            stderr: ctx.stderr,
        },
        Err(e) => {
            let code = match e {
                EngineError::NotCocycle { .. } | EngineError::InvalidStructure { .. } => 1,
                _ => 2,
            };
            CliOutcome {
                exit_code: code,
                stdout: String::new(),
                stderr: format!("{}error: {e}\n", ctx.stderr),
            }
        }
    }
}

fn base_value(command: &str, doc: Option<&Document>) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("command".into(), Value::String(command.to_string()));
    o.insert(
        "engine_format_version".into(),
        Value::Number(crate::doc::FORMAT_VERSION.into()),
    );
    if let Some(d) = doc {
        o.insert("fixture".into(), Value::String(d.label()));
    }
    o
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<(Value, bool)> {
    match cmd {
        Command::Verify { file } => cmd_verify(&load(file)?, ctx),
        Command::Cohomology {
            file,
            complex,
            max_degree,
        } => cmd_cohomology(&load(file)?, complex, *max_degree, ctx),
        Command::Les { file, max_degree } => cmd_les(&load(file)?, *max_degree, ctx),
        Command::Deform { file } => cmd_deform(&load(file)?, ctx),
        Command::Extend { file } => cmd_extend(&load(file)?, ctx),
        Command::ExtractCocycle { file } => cmd_extract(&load(file)?, ctx),
        Command::Wells { file, pair } => cmd_wells(&load(file)?, &load(pair)?, ctx),
        Command::Induce { file, pair } => cmd_induce(&load(file)?, &load(pair)?, ctx),
        Command::Homotopy { file, action } => cmd_homotopy(&load(file)?, action, ctx),
        Command::Ns { file } => cmd_ns(&load(file)?, ctx),
    }
}

fn push_result(results: &mut Vec<Value>, ctx: &mut Ctx, structure: &str, report: &Report) {
    let mut o = Map::new();
    o.insert("structure".into(), Value::String(structure.to_string()));
    o.insert("report".into(), report_value(report));
    results.push(Value::Object(o));
    if report.ok {
        ctx.note(format!("{structure}: ok"));
    } else {
        ctx.note(format!(
            "{structure}: FAILED ({} violation(s))",
            report.violations.len()
        ));
    }
}

fn cmd_verify(doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let mut results: Vec<Value> = Vec::new();
    let mut verified_na: Option<NijAlgebra> = None;

    if let Some(alg) = &doc.algebra {
        push_result(&mut results, ctx, "algebra", &alg.verify());
        if let Some(n) = &doc.nijenhuis {
            let rep = verify_nijenhuis_operator(alg, n);
            push_result(&mut results, ctx, "nij-algebra", &rep);
            if alg.verify().ok && rep.ok {
                verified_na = Some(NijAlgebra::new(alg.clone(), n.clone())?);
            }
        }
        if let Some((m, left, right)) = &doc.bimodule {
            match Bimodule::from_parts(alg.clone(), *m, left.clone(), right.clone()) {
                Ok(b) => {
                    push_result(&mut results, ctx, "bimodule", &b.verify());
                    if let (Some(na), Some(op)) = (&verified_na, &doc.bimodule_operator) {
                        let rep = verify_nij_bimodule_operator(na, &b, op);
                        push_result(&mut results, ctx, "nij-bimodule", &rep);
                        let adm = verify_admissible(na, &b, op);
                        push_result(&mut results, ctx, "admissible-map", &adm);
                    }
                }
                Err(e) => return Err(e),
            }
        }
    } else if doc.generate.is_some() {
        let na = doc.nij_algebra(ctx.seed)?;
        push_result(&mut results, ctx, "algebra", &na.algebra().verify());
        push_result(
            &mut results,
            ctx,
            "nij-algebra",
            &verify_nijenhuis_operator(na.algebra(), na.operator()),
        );
        verified_na = Some(na);
    }
    let mut generated_doc: Option<Value> = None;
    if doc.generate.is_some() {
        if let Some(na) = &verified_na {
            let resolved = Document {
                name: Some(format!("{}-resolved", doc.label())),
                algebra: Some(na.algebra().clone()),
                nijenhuis: Some(na.operator().clone()),
                ..Document::default()
            };
            generated_doc = Some(
                serde_json::from_str(&emit_document(&resolved))
                    .expect("document emits valid JSON"),
            );
        }
    }

    if let Some((chi, f)) = &doc.cocycle {
        let na = verified_na
            .clone()
            .ok_or_else(|| EngineError::Usage("cocycle check needs a verified algebra".into()))?;
        let nb = doc.nij_bimodule(&na)?;
        let chi_map = crate::doc::doc_tensor_to_multimap(chi, na.dim(), nb.dim(), 2)?;
        let f_map = crate::doc::doc_tensor_to_multimap(f, na.dim(), nb.dim(), 1)?;
        let ok = Cocycle2::new(&na, &nb, chi_map, f_map).is_ok();
        let mut rep = Report::passing();
        rep.ok = ok;
        push_result(&mut results, ctx, "cocycle-2", &rep);
    }

    if let Some((ainf, op)) = &doc.two_term {
        push_result(&mut results, ctx, "two-term-ainf", &ainf.verify());
        if let Some(op) = op {
            push_result(&mut results, ctx, "homotopy-nij", &verify_homotopy_nij(ainf, op));
        }
    }
    if doc.graded.is_some() {
        let (g, op) = doc.graded_ainf()?;
        push_result(&mut results, ctx, "graded-ainf", &g.verify());
        if let Some(op) = op {
            push_result(&mut results, ctx, "strict-hn", &verify_strict_hn(&g, &op));
        }
    }
    if let Some((alg, op, base_dim)) = &doc.extension {
        let rep = match NijAlgebra::new(alg.clone(), op.clone())
            .and_then(|total| Extension::from_total(total, *base_dim))
        {
            Ok(e) => e.verify(),
            Err(EngineError::InvalidStructure { report, .. }) => report,
            Err(e) => return Err(e),
        };
        push_result(&mut results, ctx, "extension", &rep);
    }
    if let Some((top_mu, phi)) = &doc.crossed {
        let na = verified_na
            .clone()
            .ok_or_else(|| EngineError::Usage("crossed module needs the base algebra".into()))?;
        let rep = match crossed_module_from_doc(doc, &na, top_mu, phi) {
            Ok(cm) => cm.verify(),
            Err(EngineError::InvalidStructure { report, .. }) => report,
            Err(e) => return Err(e),
        };
        push_result(&mut results, ctx, "crossed-module", &rep);
    }

    if results.is_empty() {
        return Err(EngineError::Usage(
            "document declares nothing to verify".into(),
        ));
    }
    let ok = results.iter().all(|r| {
        r.get("report")
            .and_then(|x| x.get("ok"))
            .and_then(Value::as_bool)
            .unwrap_or(false)
    });
    let mut out = base_value("verify", Some(doc));
    if let Some(g) = generated_doc {
        out.insert("generated_document".into(), g);
    }
    out.insert("results".into(), Value::Array(results));
    out.insert("ok".into(), Value::Bool(ok));
    Ok((Value::Object(out), ok))
}

fn crossed_module_from_doc(
    doc: &Document,
    na: &NijAlgebra,
    top_mu: &[crate::scalar::Scalar],
    phi: &LinearMap,
) -> Result<CrossedModule> {
    let (m, left, right) = doc
        .bimodule
        .as_ref()
        .ok_or_else(|| EngineError::Usage("crossed module needs the actions bimodule".into()))?;
    let nm = doc
        .bimodule_operator
        .as_ref()
        .ok_or_else(|| EngineError::Usage("crossed module needs the top operator".into()))?;
    let top_alg = crate::algebra::Algebra::new(*m, top_mu.to_vec())?;
    let top = NijAlgebra::new(top_alg, nm.clone())?;
    let actions = Bimodule::new(na.algebra().clone(), *m, left.clone(), right.clone())?;
    CrossedModule::new(na.clone(), top, phi.clone(), actions)
}

fn cmd_cohomology(
    doc: &Document,
    complex: &str,
    max_degree: usize,
    ctx: &mut Ctx,
) -> Result<(Value, bool)> {
    if max_degree < 1 || max_degree > 6 {
        return Err(EngineError::Usage("--max-degree must be between 1 and 6".into()));
    }
    let kind = ComplexKind::parse(complex)?;
    let na = doc.nij_algebra(ctx.seed)?;
    let nb = doc.nij_bimodule(&na)?;
    let cfg = ComplexConfig::with_cap(max_degree);
    let c = build_complex(kind, &na, Some(&nb), max_degree, &cfg)?;
    let coh = cohomology_labeled(&c, &doc.label());
    let mut out = base_value("cohomology", Some(doc));
    out.insert("cohomology".into(), cohomology_value(&coh));
    for d in &coh.degrees {
        ctx.note(format!(
            "H^{} ({}): betti {} (dim {}, rank {})",
            d.degree,
            kind.name(),
            d.betti,
            d.dim,
            d.rank
        ));
    }
    Ok((Value::Object(out), true))
}

fn cmd_les(doc: &Document, max_degree: usize, ctx: &mut Ctx) -> Result<(Value, bool)> {
    if max_degree < 1 || max_degree > 5 {
        return Err(EngineError::Usage("--max-degree must be between 1 and 5".into()));
    }
    let na = doc.nij_algebra(ctx.seed)?;
    let nb = doc.nij_bimodule(&na)?;
    let cfg = ComplexConfig::with_cap(max_degree + 1);
    let report = les_report(&na, &nb, max_degree, &cfg)?;
    ctx.note(format!(
        "long exact sequence: {}",
        if report.exact { "exact at every checked node" } else { "NOT exact" }
    ));
    let mut out = base_value("les", Some(doc));
    out.insert("les".into(), les_value(&report));
    let ok = report.exact;
    Ok((Value::Object(out), ok))
}

fn cmd_deform(doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let na = doc.nij_algebra(ctx.seed)?;
    let d = na.dim();
    let Some((mu1_raw, n1)) = &doc.deformation else {
        return Err(EngineError::Usage("document declares no deformation".into()));
    };
    let mu1 = crate::doc::doc_tensor_to_multimap(mu1_raw, d, d, 2)?;
    let first = crate::defext::check_infinitesimal(&na, &mu1, n1)?;
    ctx.note(format!(
        "deformation: {}",
        if first { "2-cocycle (infinitesimal)" } else { "NOT a 2-cocycle" }
    ));
    let mut out = base_value("deform", Some(doc));
    out.insert("infinitesimal".into(), Value::Bool(first));
    let mut ok = first;
    if let Some((mu1b_raw, n1b)) = &doc.deformation2 {
        let mu1b = crate::doc::doc_tensor_to_multimap(mu1b_raw, d, d, 2)?;
        let second = crate::defext::check_infinitesimal(&na, &mu1b, n1b)?;
        out.insert("infinitesimal2".into(), Value::Bool(second));
        ok &= second;
        if first && second {
            let witness = crate::defext::deformation_equivalence(
                &na,
                &crate::defext::Deformation {
                    mu1: mu1.clone(),
                    n1: n1.clone(),
                },
                &crate::defext::Deformation {
                    mu1: mu1b,
                    n1: n1b.clone(),
                },
            )?;
            out.insert("equivalent".into(), Value::Bool(witness.is_some()));
            if let Some(w) = witness {
                out.insert("witness".into(), matrix_value(&w));
                ctx.note("deformations equivalent: witness found");
            } else {
                ctx.note("deformations NOT equivalent: classes differ");
            }
        }
    }
    Ok((Value::Object(out), ok))
}

fn extension_document(e: &Extension, name: Option<String>) -> Document {
    Document {
        name,
        extension: Some((
            e.total().algebra().clone(),
            e.total().operator().clone(),
            e.base_dim(),
        )),
        ..Document::default()
    }
}

fn cmd_extend(doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let na = doc.nij_algebra(ctx.seed)?;
    let nb = doc.nij_bimodule(&na)?;
    let Some((chi_raw, f_raw)) = &doc.cocycle else {
        return Err(EngineError::Usage("document declares no 2-cocycle".into()));
    };
    let chi = crate::doc::doc_tensor_to_multimap(chi_raw, na.dim(), nb.dim(), 2)?;
    let f = crate::doc::doc_tensor_to_multimap(f_raw, na.dim(), nb.dim(), 1)?;
    let z = Cocycle2::new(&na, &nb, chi, f)?;
    let e = extension_from_cocycle(&na, &nb, &z)?;
    ctx.note(format!(
        "extension built: total dimension {}, verified",
        e.total().dim()
    ));
    let ext_doc = extension_document(&e, Some(format!("{}-extension", doc.label())));
    let embedded: Value =
        serde_json::from_str(&emit_document(&ext_doc)).expect("document emits valid JSON");
    let mut out = base_value("extend", Some(doc));
    out.insert("extension_document".into(), embedded);
    out.insert("verified".into(), Value::Bool(true));
    Ok((Value::Object(out), true))
}

fn extension_from_doc(doc: &Document) -> Result<Extension> {
    let Some((alg, op, base_dim)) = &doc.extension else {
        return Err(EngineError::Usage("document declares no extension".into()));
    };
    let total = NijAlgebra::new(alg.clone(), op.clone())?;
    Extension::from_total(total, *base_dim)
}

fn cmd_extract(doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let e = extension_from_doc(doc)?;
    let z = cocycle_from_extension(&e, e.section())?;
    ctx.note("classifying 2-cocycle extracted (canonical section)");
    let d = e.base_dim();
    let m = e.fiber_dim();
    let mut out = base_value("extract-cocycle", Some(doc));
    let mut zo = Map::new();
    zo.insert(
        "chi".into(),
        tensor_value(&crate::doc::multimap_to_doc_tensor(z.chi()), &[d, d, m]),
    );
    zo.insert(
        "f".into(),
        tensor_value(&crate::doc::multimap_to_doc_tensor(z.f_part()), &[d, m]),
    );
    out.insert("cocycle".into(), Value::Object(zo));
    out.insert("is_cocycle".into(), Value::Bool(true));
    Ok((Value::Object(out), true))
}

fn pair_from_doc(e: &Extension, pair_doc: &Document) -> Result<(AutoPair, Option<LinearMap>)> {
    let Some(spec) = &pair_doc.pair else {
        return Err(EngineError::Usage("pair document declares no pair".into()));
    };
    let pair = AutoPair::new(e.base(), e.fiber(), spec.beta.clone(), spec.alpha.clone())?;
    Ok((pair, spec.lambda.clone()))
}

fn cmd_wells(doc: &Document, pair_doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let e = extension_from_doc(doc)?;
    let (pair, _) = pair_from_doc(&e, pair_doc)?;
    let outcome = wells_obstruction(&e, &pair)?;
    let mut out = base_value("wells", Some(doc));
    out.insert("compatible".into(), Value::Bool(outcome.compatible));
    out.insert(
        "compatibility_violations".into(),
        Value::Array(
            outcome
                .compatibility_violations
                .iter()
                .map(crate::report::violation_value)
                .collect(),
        ),
    );
    out.insert(
        "obstruction_trivial".into(),
        Value::Bool(outcome.obstruction_trivial),
    );
    if let Some(l) = &outcome.lambda {
        out.insert("lambda".into(), matrix_value(l));
    }
    let inducible = outcome.compatible && outcome.obstruction_trivial;
    out.insert("inducible".into(), Value::Bool(inducible));
    ctx.note(format!(
        "pair: compatible = {}, obstruction trivial = {} => {}",
        outcome.compatible,
        outcome.obstruction_trivial,
        if inducible { "inducible" } else { "not inducible" }
    ));
    Ok((Value::Object(out), inducible))
}

fn cmd_induce(doc: &Document, pair_doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let e = extension_from_doc(doc)?;
    let (pair, lambda) = pair_from_doc(&e, pair_doc)?;
    let lambda = match lambda {
        Some(l) => l,
        None => {
            let outcome = wells_obstruction(&e, &pair)?;
            outcome.lambda.ok_or_else(|| {
                EngineError::Structure(
                    "pair is not inducible: no lambda satisfies the conditions".into(),
                )
            })?
        }
    };
    let phi = induce_automorphism(&e, &pair, &lambda)?;
    ctx.note("automorphism induced; restriction returns the pair");
    let mut out = base_value("induce", Some(doc));
    out.insert("phi".into(), matrix_value(&phi));
    out.insert("lambda".into(), matrix_value(&lambda));
    out.insert("restricts_to_pair".into(), Value::Bool(true));
    Ok((Value::Object(out), true))
}

fn two_term_from_doc(doc: &Document) -> Result<TwoTermHN> {
    let Some((ainf, op)) = &doc.two_term else {
        return Err(EngineError::Usage("document declares no 2-term structure".into()));
    };
    let op = op
        .clone()
        .ok_or_else(|| EngineError::Usage("2-term structure has no operator triple".into()))?;
    Ok(TwoTermHN {
        ainf: ainf.clone(),
        op,
    })
}

fn cmd_homotopy(doc: &Document, action: &str, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let mut out = base_value("homotopy", Some(doc));
    out.insert("action".into(), Value::String(action.to_string()));
    match action {
        "verify" => {
            let mut results = Vec::new();
            if let Some((ainf, op)) = &doc.two_term {
                push_result(&mut results, ctx, "two-term-ainf", &ainf.verify());
                if let Some(op) = op {
                    push_result(&mut results, ctx, "homotopy-nij", &verify_homotopy_nij(ainf, op));
                }
            }
            if doc.graded.is_some() {
                let (g, op) = doc.graded_ainf()?;
                push_result(&mut results, ctx, "graded-ainf", &g.verify());
                if let Some(op) = op {
                    push_result(&mut results, ctx, "strict-hn", &verify_strict_hn(&g, &op));
                }
            }
            if results.is_empty() {
                return Err(EngineError::Usage(
                    "document declares no homotopy data".into(),
                ));
            }
            let ok = results.iter().all(|r| {
                r.get("report")
                    .and_then(|x| x.get("ok"))
                    .and_then(Value::as_bool)
                    .unwrap_or(false)
            });
            out.insert("results".into(), Value::Array(results));
            out.insert("ok".into(), Value::Bool(ok));
            Ok((Value::Object(out), ok))
        }
        "skeletal-to-cocycle" => {
            let hn = two_term_from_doc(doc)?;
            let sk = skeletal_to_cocycle(&hn.ainf, &hn.op)?;
            let _d = sk.na.dim();
            let m = sk.nb.dim();
            let result = Document {
                name: Some(format!("{}-cocycle3", doc.label())),
                algebra: Some(sk.na.algebra().clone()),
                nijenhuis: Some(sk.na.operator().clone()),
                bimodule: Some((
                    m,
                    sk.nb.bimodule().left_tensor().to_vec(),
                    sk.nb.bimodule().right_tensor().to_vec(),
                )),
                bimodule_operator: Some(sk.nb.operator().clone()),
                cocycle3: Some((
                    crate::doc::multimap_to_doc_tensor(&sk.chi),
                    crate::doc::multimap_to_doc_tensor(&sk.f_part),
                )),
                ..Document::default()
            };
            embed_document(&mut out, "cocycle_document", &result);
            ctx.note("skeletal structure classified by a third cocycle");
            Ok((Value::Object(out), true))
        }
        "cocycle-to-skeletal" => {
            let na = doc.nij_algebra(ctx.seed)?;
            let nb = doc.nij_bimodule(&na)?;
            let Some((chi_raw, f_raw)) = &doc.cocycle3 else {
                return Err(EngineError::Usage("document declares no third cocycle".into()));
            };
            let chi = crate::doc::doc_tensor_to_multimap(chi_raw, na.dim(), nb.dim(), 3)?;
            let f = crate::doc::doc_tensor_to_multimap(f_raw, na.dim(), nb.dim(), 2)?;
            let hn = crate::homotopy::cocycle_to_skeletal(&na, &nb, &chi, &f)?;
            let result = Document {
                name: Some(format!("{}-skeletal", doc.label())),
                two_term: Some((hn.ainf.clone(), Some(hn.op.clone()))),
                ..Document::default()
            };
            embed_document(&mut out, "skeletal_document", &result);
            ctx.note("skeletal 2-term homotopy Nijenhuis algebra built and verified");
            Ok((Value::Object(out), true))
        }
        "strict-to-crossed" => {
            let hn = two_term_from_doc(doc)?;
            let cm = strict_to_crossed(&hn.ainf, &hn.op)?;
            let m = cm.top.dim();
            let result = Document {
                name: Some(format!("{}-crossed", doc.label())),
                algebra: Some(cm.base.algebra().clone()),
                nijenhuis: Some(cm.base.operator().clone()),
                bimodule: Some((
                    m,
                    cm.actions.left_tensor().to_vec(),
                    cm.actions.right_tensor().to_vec(),
                )),
                bimodule_operator: Some(cm.top.operator().clone()),
                crossed: Some((cm.top.algebra().structure_tensor().to_vec(), cm.phi.clone())),
                ..Document::default()
            };
            embed_document(&mut out, "crossed_document", &result);
            ctx.note("strict structure converted to a crossed module");
            Ok((Value::Object(out), true))
        }
        "crossed-to-strict" => {
            let na = doc.nij_algebra(ctx.seed)?;
            let Some((top_mu, phi)) = &doc.crossed else {
                return Err(EngineError::Usage("document declares no crossed module".into()));
            };
            let cm = crossed_module_from_doc(doc, &na, top_mu, phi)?;
            let hn = crossed_to_strict(&cm)?;
            let result = Document {
                name: Some(format!("{}-strict", doc.label())),
                two_term: Some((hn.ainf.clone(), Some(hn.op.clone()))),
                ..Document::default()
            };
            embed_document(&mut out, "strict_document", &result);
            ctx.note("crossed module converted to a strict 2-term structure");
            Ok((Value::Object(out), true))
        }
        "induce-nsinf" => {
            let (g, op) = doc.graded_ainf()?;
            let op = op.ok_or_else(|| {
                EngineError::Usage("induce-nsinf needs the graded operator".into())
            })?;
            let ns = induced_nsinf(&g, &op)?;
            let dim = ns.dim();
            let mut etas = Vec::new();
            for n in 1..=ns.arity_cap() {
                let comps = ns.components(n).expect("within cap");
                let comp_values: Vec<Value> = comps
                    .iter()
                    .map(|c| {
                        let dims: Vec<usize> = std::iter::repeat(dim).take(n + 1).collect();
                        tensor_value(&crate::doc::multimap_to_doc_tensor(c), &dims)
                    })
                    .collect();
                let mut eo = Map::new();
                eo.insert("arity".into(), Value::Number((n as u64).into()));
                eo.insert("components".into(), Value::Array(comp_values));
                etas.push(Value::Object(eo));
            }
            out.insert("eta".into(), Value::Array(etas));
            out.insert("verified".into(), Value::Bool(true));
            ctx.note("NS-infinity structure induced and verified");
            Ok((Value::Object(out), true))
        }
        "deform" => {
            let (g, op) = doc.graded_ainf()?;
            let op = op
                .ok_or_else(|| EngineError::Usage("deform needs the graded operator".into()))?;
            let deformed = deformed_ainf(&g, &op)?;
            let ops: Vec<(usize, Vec<crate::scalar::Scalar>)> = (1..=deformed.arity_cap())
                .map(|n| (n, crate::doc::multimap_to_doc_tensor(deformed.op(n).unwrap())))
                .collect();
            let result = Document {
                name: Some(format!("{}-deformed", doc.label())),
                graded: Some((deformed.space().clone(), ops, Some(op))),
                ..Document::default()
            };
            embed_document(&mut out, "deformed_document", &result);
            ctx.note("deformed A-infinity structure built and verified");
            Ok((Value::Object(out), true))
        }
        other => Err(EngineError::Usage(format!("unknown homotopy action `{other}`"))),
    }
}

fn embed_document(out: &mut Map<String, Value>, key: &str, doc: &Document) {
    let embedded: Value =
        serde_json::from_str(&emit_document(doc)).expect("document emits valid JSON");
    out.insert(key.to_string(), embedded);
}

fn cmd_ns(doc: &Document, ctx: &mut Ctx) -> Result<(Value, bool)> {
    let na = doc.nij_algebra(ctx.seed)?;
    let ns = induced_ns(&na);
    let v = verify_ns(&ns);
    let mc = is_maurer_cartan(&encode_pi(&ns))?;
    let d = ns.dim();
    ctx.note(format!(
        "induced NS-algebra: ok = {}, dendriform = {}, maurer-cartan = {mc}",
        v.report.ok, v.dendriform
    ));
    let mut out = base_value("ns", Some(doc));
    out.insert("report".into(), report_value(&v.report));
    out.insert("dendriform".into(), Value::Bool(v.dendriform));
    out.insert("maurer_cartan".into(), Value::Bool(mc));
    out.insert("prec".into(), tensor_value(ns.prec_tensor(), &[d, d, d]));
    out.insert("succ".into(), tensor_value(ns.succ_tensor(), &[d, d, d]));
    out.insert("curly".into(), tensor_value(ns.curly_tensor(), &[d, d, d]));
    let ok = v.report.ok && mc;
    Ok((Value::Object(out), ok))
}
