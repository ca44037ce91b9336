//! The JSON run report.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    /// Command-line arguments after the program name; rerunning them
    /// replays the report.
    pub args: Vec<String>,
    pub regime: String,
    pub seed: u64,
    pub params: Value,
    pub trials: Vec<Value>,
    pub aggregate: Value,
    /// The only field that differs between replays.
    pub wall_clock_ms: f64,
}

impl RunReport {
    pub fn new(experiment: &str, regime: &str, seed: u64, params: Value) -> Self {
        RunReport {
            experiment: experiment.to_string(),
            args: Vec::new(),
            regime: regime.to_string(),
            seed,
            params,
            trials: Vec::new(),
            aggregate: Value::Null,
            wall_clock_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// The report text with the wall-clock field zeroed, for replay comparison.
pub fn without_timing(json: &str) -> serde_json::Result<String> {
    let mut r: RunReport = serde_json::from_str(json)?;
    r.wall_clock_ms = 0.0;
    Ok(r.to_json())
}

/// Fraction of `outcomes` equal to `which`.
pub fn rate(outcomes: &[&str], which: &str) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().filter(|&&o| o == which).count() as f64 / outcomes.len() as f64
}
