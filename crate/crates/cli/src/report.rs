use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const RUN_REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One named check. `certificate` holds whatever the owning module needs to
/// replay the verdict offline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// A [`concc_core::tower::TowerReport`].
    Tower { report: Value },
    /// A non-conjugacy record over a named presentation.
    NonConjugacy { presentation: String, record: Value },
    /// Parameters that a deterministic recomputation needs.
    Recompute { params: Value },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub command: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: Option<u64>) -> RunReport {
        RunReport {
            version: RUN_REPORT_VERSION,
            command,
            seed,
            status: Status::Pass,
            checks: Vec::new(),
            elapsed_ms: 0,
        }
    }

    /// Runs `f` and records its outcome with timing.
    pub fn check<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce() -> (Status, String, Option<Certificate>),
    {
        let start = Instant::now();
        let (status, detail, certificate) = f();
        self.checks.push(Check {
            name: name.to_string(),
            status,
            detail,
            certificate,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }

    /// Fail dominates unknown, unknown dominates pass.
    pub fn finish(&mut self, elapsed_ms: u64) {
        let any = |s| self.checks.iter().any(|c| c.status == s);
        self.status = if any(Status::Fail) {
            Status::Fail
        } else if any(Status::Unknown) {
            Status::Unknown
        } else {
            Status::Pass
        };
        self.elapsed_ms = elapsed_ms;
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Unknown => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
