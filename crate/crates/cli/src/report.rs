use serde::Serialize;
use serde_json::Value;

use diffnull::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_FOUND: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

pub const SCHEMA_VERSION: u32 = 1;

/// The JSON report. Field order is fixed, so identical runs give identical bytes.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub caps: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    /// Text printed to stdout.
    #[serde(skip)]
    pub human: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, caps: Value, human: String) -> Self {
        Self { schema: SCHEMA_VERSION, command: command.into(), inputs, results, caps, timing_ms: None, human }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
    /// Partial results worth reporting despite the failure.
    pub report: Option<Box<Report>>,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, msg: msg.into(), report: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) => EXIT_USAGE,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::Capped(_) => EXIT_CAP,
        };
        Self { code, msg: e.to_string(), report: None }
    }
}
