use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// Bumped on any breaking change to the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// What a subcommand hands back: structured results, the human rendering,
/// and whether the queried property holds.
pub struct Outcome {
    pub results: Value,
    pub text: String,
    pub holds: bool,
}

impl Outcome {
    pub fn new(results: Value, text: String) -> Self {
        Outcome { results, text, holds: true }
    }

    pub fn holds(mut self, holds: bool) -> Self {
        self.holds = holds;
        self
    }
}

#[derive(Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub results: Value,
    pub timing: Timing,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(command: Vec<String>, outcome: Outcome, elapsed: Duration) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            results: outcome.results,
            timing: Timing {
                wall_seconds: elapsed.as_secs_f64(),
            },
            text: outcome.text,
        }
    }
}
