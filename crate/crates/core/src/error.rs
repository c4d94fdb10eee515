use thiserror::Error;

use crate::algebra::Report;

/// Engine-level failures. Law violations discovered by `verify` calls are
/// not errors — they come back inside a [`Report`] — but operations whose
/// preconditions require a verified structure reject invalid input with
/// `InvalidStructure`, carrying the offending report.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("{context}: structure fails verification ({} violation(s), first: {})",
        report.violations.len(),
        report.violations.first().map(|v| v.law.clone()).unwrap_or_default())]
    InvalidStructure { context: String, report: Report },
    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCap { requested: usize, cap: usize },
    #[error("not a cocycle: differential of the given degree-{degree} cochain is nonzero")]
    NotCocycle { degree: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl EngineError {
    pub fn invalid(context: impl Into<String>, report: Report) -> Self {
        EngineError::InvalidStructure {
            context: context.into(),
            report,
        }
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
