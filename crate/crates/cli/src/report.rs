//! Structured records written to standard output, one JSON object per line.
//!
//! Entropy-valued fields are expressed in the unit named by the record's `unit` field.

use qae_core::qstate::BipartiteDims;
use qae_core::search::Method;
use qae_core::{CompressionReport, EntropyUnit, OptimizationResult, SearchConfig, YoungTableau};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n1: usize,
    pub n2: usize,
    pub n_d: usize,
    pub seed: u64,
    pub exhaustive_threshold: String,
    pub jobs: usize,
}

impl From<&SearchConfig> for ConfigEcho {
    fn from(c: &SearchConfig) -> Self {
        Self {
            n1: c.n1,
            n2: c.n2,
            n_d: c.n_d,
            seed: c.seed,
            exhaustive_threshold: c.exhaustive_threshold.to_string(),
            jobs: c.parallelism,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub search_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub unit: EntropyUnit,
    pub dims: BipartiteDims,
    pub tableau_count: String,
    pub config: ConfigEcho,
    pub result: OptimizationResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compression: Option<CompressionReport>,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub version: String,
    pub input_digest: String,
    pub unit: EntropyUnit,
    pub dims: BipartiteDims,
    /// `"random"` (seeded regular tableau) or `"identity"` (no encoding).
    pub plan: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau: Option<YoungTableau>,
    pub compression: CompressionReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub record: String,
    pub index: usize,
    pub instance_seed: u64,
    pub search_seed: u64,
    pub method: Method,
    pub initial_mi: f64,
    pub final_mi: f64,
    /// `final_mi` raised to at least `1e-15`, as plotted on a log axis.
    pub final_mi_floored: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub record: String,
    pub experiment: String,
    pub instance_kind: String,
    pub sampling: String,
    pub version: String,
    pub unit: EntropyUnit,
    pub dims: BipartiteDims,
    pub states: usize,
    pub config: ConfigEcho,
    pub mean_initial_mi: f64,
    pub mean_final_mi: f64,
    pub mean_final_mi_floored: f64,
    pub max_final_mi: f64,
    /// Every instance ended at or below its canonicalized starting value.
    pub all_improved: bool,
    pub total_seconds: f64,
}

pub fn convert_result(r: &OptimizationResult, unit: EntropyUnit) -> OptimizationResult {
    OptimizationResult {
        best_mi: unit.from_nats(r.best_mi),
        initial_mi: unit.from_nats(r.initial_mi),
        trajectory: r.trajectory.iter().map(|&v| unit.from_nats(v)).collect(),
        ..r.clone()
    }
}

pub fn convert_compression(c: &CompressionReport, unit: EntropyUnit) -> CompressionReport {
    CompressionReport {
        mi_middle: unit.from_nats(c.mi_middle),
        rel_entropy_out: unit.from_nats(c.rel_entropy_out),
        residual: unit.from_nats(c.residual),
        ..c.clone()
    }
}

/// Serializes a record as a single JSON line.
pub fn to_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("reports always serialize")
}
