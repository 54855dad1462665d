//! Machine-readable verdicts for grid-based inequality checks.

use serde::{Deserialize, Serialize};

/// Description of the parameter grid a check was run over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub description: String,
    pub points: usize,
}

impl GridSpec {
    pub fn new(description: impl Into<String>, points: usize) -> Self {
        Self {
            description: description.into(),
            points,
        }
    }
}

/// One inequality, checked over a grid.
///
/// `min_margin` is the smallest value of (larger side − smaller side) seen on
/// the grid, and `witness` names the grid location where it occurred. A check
/// passes iff `min_margin > -tolerance`; strict inequalities use a zero
/// tolerance, identities that are tight somewhere on the grid use a small
/// rounding allowance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub grid: GridSpec,
    pub pass: bool,
    pub min_margin: f64,
    pub tolerance: f64,
    pub witness: serde_json::Value,
}

impl VerificationReport {
    pub fn new(
        lemma_id: impl Into<String>,
        grid: GridSpec,
        min_margin: f64,
        tolerance: f64,
        witness: serde_json::Value,
    ) -> Self {
        let pass = min_margin.is_finite() && min_margin > -tolerance;
        Self {
            lemma_id: lemma_id.into(),
            grid,
            pass,
            min_margin,
            tolerance,
            witness,
        }
    }

    /// Collapse several reports into one: the minimum margin wins and the
    /// combined check passes only if every part does.
    pub fn merge(lemma_id: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let points = parts.iter().map(|r| r.grid.points).sum();
        let worst = parts
            .iter()
            .min_by(|a, b| (a.min_margin + a.tolerance).total_cmp(&(b.min_margin + b.tolerance)));
        let grid = GridSpec::new(
            parts
                .iter()
                .map(|r| r.lemma_id.as_str())
                .collect::<Vec<_>>()
                .join(" + "),
            points,
        );
        match worst {
            None => Self::new(lemma_id, grid, f64::NAN, 0.0, serde_json::Value::Null),
            Some(w) => {
                let mut r = Self::new(
                    lemma_id,
                    grid,
                    w.min_margin,
                    w.tolerance,
                    serde_json::json!({ "part": w.lemma_id, "at": w.witness }),
                );
                r.pass = parts.iter().all(|p| p.pass);
                r
            }
        }
    }
}

/// Running minimum of a margin over grid points, remembering where it
/// happened.
#[derive(Debug, Clone)]
pub(crate) struct MarginTracker {
    pub min: f64,
    pub at: serde_json::Value,
}

impl MarginTracker {
    pub fn new() -> Self {
        Self {
            min: f64::INFINITY,
            at: serde_json::Value::Null,
        }
    }

    pub fn push(&mut self, margin: f64, at: impl FnOnce() -> serde_json::Value) {
        // A NaN margin is a failure and must stay the witness.
        if self.min.is_nan() {
            return;
        }
        if margin.is_nan() || margin < self.min {
            self.min = margin;
            self.at = at();
        }
    }

    pub fn finish(self, lemma_id: &str, grid: GridSpec, tolerance: f64) -> VerificationReport {
        VerificationReport::new(lemma_id, grid, self.min, tolerance, self.at)
    }
}
