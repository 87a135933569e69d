//! Subcommand logic for the `sphtet` binary, kept out of `main` so it can be
//! tested without spawning processes.

pub mod document;

use std::collections::BTreeMap;

use serde::Serialize;
use sphtet::verify::{verify_batch, BatchSummary, SampleOutcome};
use sphtet::{
    dihedrals_from_lengths, lengths_from_dihedrals, reciprocity_report, sample_tetrahedra,
    DerivativeReport, EdgeId, GeometryError, SampleConfig, TetAngles, TetLengths,
};

use document::{Kind, Metadata, TetDocument, SCHEMA_VERSION};

/// Exit status: malformed input or a failed verification.
pub const EXIT_INVALID: i32 = 1;
/// Exit status: degenerate or unrealizable geometry.
pub const EXIT_NUMERICAL: i32 = 2;

/// An error that ends the process, with its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            kind: "invalid_input",
            message: message.into(),
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message, "exit_code": self.code }
        })
        .to_string()
    }
}

impl From<GeometryError> for CliError {
    fn from(err: GeometryError) -> Self {
        let kind = match err {
            GeometryError::Domain(_) => "domain",
            GeometryError::Degenerate(_) => "degenerate",
            GeometryError::NotRealizable(_) => "not_realizable",
            GeometryError::StepTooLarge { .. } => "step_too_large",
            GeometryError::Exhausted { .. } => "exhausted",
        };
        let code = if err.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_INVALID
        };
        Self {
            code,
            kind,
            message: err.to_string(),
        }
    }
}

pub fn parse_step(step: f64) -> Result<f64, CliError> {
    if step.is_finite() && step > 0.0 {
        Ok(step)
    } else {
        Err(CliError::input(format!(
            "--fd-step must be positive, got {step}"
        )))
    }
}

/// Lengths for a document of either kind.
pub fn document_lengths(doc: &TetDocument) -> Result<TetLengths, CliError> {
    match doc.kind {
        Kind::Lengths => {
            let lengths = TetLengths(doc.values);
            // validates as a side effect
            dihedrals_from_lengths(&lengths)?;
            Ok(lengths)
        }
        Kind::Angles => Ok(lengths_from_dihedrals(&TetAngles(doc.values))?),
    }
}

/// Converts to the other kind and records the round-trip residual.
pub fn convert(doc: &TetDocument) -> Result<TetDocument, CliError> {
    let (mut out, residual) = match doc.kind {
        Kind::Lengths => {
            let lengths = TetLengths(doc.values);
            let angles = dihedrals_from_lengths(&lengths)?;
            let back = lengths_from_dihedrals(&angles)?;
            (TetDocument::angles(&angles), back.max_abs_diff(&lengths))
        }
        Kind::Angles => {
            let angles = TetAngles(doc.values);
            let lengths = lengths_from_dihedrals(&angles)?;
            let back = dihedrals_from_lengths(&lengths)?;
            (TetDocument::lengths(&lengths), back.max_abs_diff(&angles))
        }
    };
    debug_assert_eq!(out.kind, doc.kind.other());
    out.label = doc.label.clone();
    out.metadata = Some(Metadata {
        round_trip_residual: residual,
    });
    Ok(out)
}

/// A derivative report as written by `wigner`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub edge: String,
    pub opposite: String,
    pub fd_step: f64,
    pub gram_det: f64,
    pub analytic_wigner: f64,
    pub analytic_inverse: f64,
    pub wigner_via_links: f64,
    pub inverse_via_links: f64,
    pub fd_wigner: f64,
    pub fd_inverse: f64,
    pub remark_reciprocal: f64,
    pub remark_fd_reciprocal: f64,
    pub remark_fd_secant: f64,
    pub wigner_residual: f64,
    pub inverse_residual: f64,
}

impl ReportDocument {
    fn new(r: DerivativeReport, label: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            label,
            edge: r.edge.to_string(),
            opposite: r.opposite.to_string(),
            fd_step: r.step,
            gram_det: r.gram_det,
            analytic_wigner: r.analytic_wigner,
            analytic_inverse: r.analytic_inverse,
            wigner_via_links: r.wigner_via_links,
            inverse_via_links: r.inverse_via_links,
            fd_wigner: r.fd_wigner,
            fd_inverse: r.fd_inverse,
            remark_reciprocal: r.remark_reciprocal,
            remark_fd_reciprocal: r.remark_fd_reciprocal,
            remark_fd_secant: r.remark_fd_secant,
            wigner_residual: r.wigner_residual,
            inverse_residual: r.inverse_residual,
        }
    }
}

pub fn parse_pair(pair: &str) -> Result<EdgeId, CliError> {
    pair.parse::<EdgeId>().map_err(CliError::input)
}

pub fn wigner(doc: &TetDocument, edge: EdgeId, step: f64) -> Result<ReportDocument, CliError> {
    let lengths = document_lengths(doc)?;
    let report = reciprocity_report(&lengths, edge, parse_step(step)?)?;
    Ok(ReportDocument::new(report, doc.label.clone()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedSample {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedSample {
    pub index: usize,
    /// Residual classes above tolerance.
    pub classes: Vec<&'static str>,
}

/// The summary printed by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub schema_version: u32,
    pub status: &'static str,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub fd_step: f64,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub retried: usize,
    pub max_residuals: BTreeMap<&'static str, f64>,
    pub failures: Vec<FailedSample>,
    pub skips: Vec<SkippedSample>,
}

impl VerifySummary {
    fn new(batch: &BatchSummary) -> Self {
        let mut failures = Vec::new();
        let mut skips = Vec::new();
        for (index, outcome) in batch.outcomes.iter().enumerate() {
            match outcome {
                SampleOutcome::Checked { residuals, .. } => {
                    let classes: Vec<_> = residuals
                        .entries()
                        .into_iter()
                        .filter(|(_, v)| v.is_nan() || *v > batch.tol)
                        .map(|(name, _)| name)
                        .collect();
                    if !classes.is_empty() {
                        failures.push(FailedSample { index, classes });
                    }
                }
                SampleOutcome::Skipped { reason } => skips.push(SkippedSample {
                    index,
                    reason: reason.clone(),
                }),
            }
        }
        let status = if batch.skipped > 0 {
            "degenerate"
        } else if batch.failed > 0 {
            "fail"
        } else {
            "pass"
        };
        Self {
            schema_version: SCHEMA_VERSION,
            status,
            seed: batch.seed,
            count: batch.count,
            tol: batch.tol,
            fd_step: batch.step,
            passed: batch.passed,
            failed: batch.failed,
            skipped: batch.skipped,
            retried: batch.retried,
            max_residuals: batch.max.entries().into_iter().collect(),
            failures,
            skips,
        }
    }

    /// 0 when every residual is within tolerance, 2 when a sample was
    /// skipped, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            "pass" => 0,
            "degenerate" => EXIT_NUMERICAL,
            _ => EXIT_INVALID,
        }
    }
}

pub fn verify(seed: u64, count: usize, tol: f64, step: f64) -> Result<VerifySummary, CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::input(format!(
            "--tol must be non-negative, got {tol}"
        )));
    }
    let config = SampleConfig::new(seed, count);
    let batch = verify_batch(&config, tol, parse_step(step)?)?;
    Ok(VerifySummary::new(&batch))
}

pub fn sample(seed: u64, count: usize) -> Result<Vec<TetDocument>, CliError> {
    let lengths = sample_tetrahedra(&SampleConfig::new(seed, count))?;
    Ok(lengths
        .iter()
        .enumerate()
        .map(|(i, l)| TetDocument {
            label: Some(format!("seed{seed}-{i}")),
            ..TetDocument::lengths(l)
        })
        .collect())
}
