use serde::{Deserialize, Serialize};

use crate::CliError;

const ECHO_PREFIX: &str = "# config: ";

/// Everything that determines a report, echoed as its first line.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strong_side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registry: Option<String>,
    /// sha256 of the machine file's canonical form, first 16 hex digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<String>,
    pub schedule: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<String>,
    pub out: String,
}

impl RunConfig {
    pub fn echo(&self) -> String {
        format!("{ECHO_PREFIX}{}\n", serde_json::to_string(self).expect("config serializes"))
    }
}

/// The config echoed at the top of a report.
pub fn parse_config_echo(report: &str) -> Result<RunConfig, CliError> {
    let line = report
        .lines()
        .find_map(|l| l.strip_prefix(ECHO_PREFIX))
        .ok_or_else(|| CliError::Usage("report has no config echo".into()))?;
    serde_json::from_str(line).map_err(|e| CliError::Usage(format!("bad config echo: {e}")))
}
