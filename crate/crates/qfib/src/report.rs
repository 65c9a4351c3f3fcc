//! Machine-readable run reports: request echo, result, evidence, timing.

use serde::{Deserialize, Serialize};

use crate::ch0::Evidence;

/// One report per request. Two runs of the same request produce identical
/// reports except for the timing field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub request: serde_json::Value,
    pub result: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<Evidence>,
    pub timing_us: u128,
    pub version: String,
}

impl Report {
    pub fn new(
        request: serde_json::Value,
        result: serde_json::Value,
        evidence: Vec<Evidence>,
        timing_us: u128,
    ) -> Report {
        Report {
            request,
            result,
            evidence,
            timing_us,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is serializable")
    }

    /// Error report used by batch mode, mirroring the process exit codes.
    pub fn error(request: serde_json::Value, code: i32, message: String) -> Report {
        Report::new(
            request,
            serde_json::json!({ "error": message, "exit_code": code }),
            Vec::new(),
            0,
        )
    }
}
