//! Machine-readable reports emitted by the command-line front end.
//!
//! Every numeric claim carries the tolerance it was checked at; defect
//! claims are either exact (with the certificate that pins them) or honest
//! intervals.

use serde::Serialize;
use serde_json::Value;

use crate::cyclic::{LevelSetStructure, VerdictReason};
use crate::matrix::Inertia;
use crate::superdiag::SuperdiagCase;

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub rows: usize,
    pub cols: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsOut {
    pub lower: usize,
    pub upper: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InertiaOut {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub tolerance: f64,
}

impl From<Inertia> for InertiaOut {
    fn from(i: Inertia) -> Self {
        Self {
            n_plus: i.n_plus,
            n_minus: i.n_minus,
            n_zero: i.n_zero,
            tolerance: i.tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualOut {
    pub absolute: f64,
    pub relative: f64,
    /// Threshold the relative residual is compared against.
    pub tolerance: f64,
}

/// Defect statement: a point value only when certified.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefectClaim {
    Exact {
        value: usize,
        certificate: String,
    },
    Interval {
        lower: usize,
        upper: usize,
        lower_certificate: String,
        upper_certificate: String,
    },
}

impl DefectClaim {
    pub fn exact_value(&self) -> Option<usize> {
        match self {
            DefectClaim::Exact { value, .. } => Some(*value),
            DefectClaim::Interval { .. } => None,
        }
    }

    pub fn range(&self) -> (usize, usize) {
        match self {
            DefectClaim::Exact { value, .. } => (*value, *value),
            DefectClaim::Interval { lower, upper, .. } => (*lower, *upper),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftOut {
    pub holds: bool,
    pub reason: VerdictReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<LevelSetStructure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletionOut {
    pub size: usize,
    pub defect: usize,
    pub residual: ResidualOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub matrix: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOut {
    pub k: usize,
    pub found: bool,
    pub best_residual: f64,
    pub success_tol: f64,
    pub restarts_used: usize,
    pub iterations_used: usize,
    pub seed: u64,
    pub real_only: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationOut {
    pub normal: bool,
    pub embeds: bool,
    pub residual: ResidualOut,
    pub embedding_tolerance: f64,
    /// Extension size of the candidate, i.e. the defect it certifies.
    pub implied_upper_bound: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockOut {
    pub applies: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combined_nd: Option<usize>,
    pub per_block: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureFileOut {
    pub label: String,
    pub path: String,
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completes: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// The single JSON document printed to stdout by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputInfo>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<InertiaOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normality: Option<ResidualOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<SuperdiagCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<DefectClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion: Option<CompletionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub files: Option<Vec<FixtureFileOut>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, tolerance: f64) -> Self {
        Self {
            command: command.into(),
            inputs: Vec::new(),
            tolerance,
            bounds: None,
            inertia: None,
            normality: None,
            case: None,
            shift: None,
            defect: None,
            completion: None,
            search: None,
            verification: None,
            blocks: None,
            files: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
