//! Machine-readable run reports.
//!
//! Reports are plain JSON. Identical inputs and seed produce identical
//! reports except for the timing fields, which all carry an `_ms` suffix
//! so downstream tooling can strip them when diffing.

use serde::Serialize;

use bfgp_core::evaluation::EvaluationVector;
use bfgp_core::interpreter::{ExecutionOutcome, FailReason};
use bfgp_core::search::SearchStats;

#[derive(Serialize, Debug, Default)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointers: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_detection: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_limit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_secs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct SearchReport {
    pub expanded: u64,
    pub evaluated: u64,
    pub open_peak: usize,
    pub termination: String,
    pub wall_ms: u64,
}

impl SearchReport {
    pub fn new(stats: &SearchStats, wall_ms: u64) -> Self {
        SearchReport {
            expanded: stats.expanded,
            evaluated: stats.evaluated,
            open_peak: stats.open_peak,
            termination: stats.termination.to_string(),
            wall_ms,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct InstanceReport {
    pub name: String,
    pub outcome: String,
    pub steps: u64,
    pub plan_len: u64,
    /// Recorded program states (revisit detection only).
    pub visited_states: u64,
    /// Rough footprint of the revisit set in bytes.
    pub est_peak_bytes: u64,
    pub wall_ms: u64,
}

pub fn outcome_label(outcome: &ExecutionOutcome) -> String {
    match outcome {
        ExecutionOutcome::Solved { .. } => "solved".to_string(),
        ExecutionOutcome::Failed { reason, .. } => match reason {
            FailReason::Incorrect => "failed:incorrect",
            FailReason::Infinite => "failed:infinite",
            FailReason::BoundExceeded => "failed:bound-exceeded",
            FailReason::StepLimit => "failed:step-limit",
        }
        .to_string(),
        ExecutionOutcome::ReachedUndefined { line, .. } => format!("undefined-line:{line}"),
    }
}

#[derive(Serialize, Debug)]
pub struct EvaluationReport {
    pub f1: i64,
    pub f2: i64,
    pub f3: i64,
    pub f4: i64,
    pub f5: Option<i64>,
    pub f6: i64,
    pub f7: i64,
    pub f8: Option<i64>,
    pub f9: Option<i64>,
}

impl From<&EvaluationVector> for EvaluationReport {
    fn from(v: &EvaluationVector) -> Self {
        EvaluationReport {
            f1: v.f1,
            f2: v.f2,
            f3: v.f3,
            f4: v.f4,
            f5: v.f5,
            f6: v.f6,
            f7: v.f7,
            f8: v.f8,
            f9: v.f9,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: String,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub instances: Vec<InstanceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    /// Bit-vector encoding of the solution, first line in the most
    /// significant digits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_encoding_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvaluationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            config: ConfigEcho::default(),
            search: None,
            instances: Vec::new(),
            solution: None,
            solution_encoding_hex: None,
            evaluation: None,
            error: None,
        }
    }

    pub fn write_json(&self, path: &std::path::Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        std::fs::write(path, text)
    }
}
