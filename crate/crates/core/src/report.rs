use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope for every machine-readable output: the scenario, a full echo of
/// the inputs, and the results.
#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Value,
    pub results: T,
}

impl<T: Serialize> ReportBundle<T> {
    pub fn new(scenario: impl Into<String>, inputs: Value, results: T) -> Self {
        Self { tool: TOOL, version: VERSION, scenario: scenario.into(), seed: None, inputs, results }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
