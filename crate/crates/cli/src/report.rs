use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one named check. Wall time is only filled in on request so
/// that JSON output stays reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckReport {
    /// Runs `f`, turning an error into a failing report with the error as
    /// witness.
    pub fn run(
        check: &str,
        instance: &str,
        f: impl FnOnce() -> anyhow::Result<usize>,
    ) -> CheckReport {
        let t = Instant::now();
        let r = f();
        let wall_ms = Some(t.elapsed().as_millis() as u64);
        match r {
            Ok(cases) => CheckReport {
                check: check.into(),
                instance: instance.into(),
                status: Status::Pass,
                witness: None,
                cases,
                wall_ms,
            },
            Err(e) => CheckReport {
                check: check.into(),
                instance: instance.into(),
                status: Status::Fail,
                witness: Some(format!("{e:#}")),
                cases: 0,
                wall_ms,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn without_timing(mut self) -> Self {
        self.wall_ms = None;
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "{status} {} [{}] ({} cases", self.check, self.instance, self.cases)?;
        if let Some(ms) = self.wall_ms {
            write!(f, ", {ms} ms")?;
        }
        f.write_str(")")?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: u32,
    pub reports: Vec<CheckReport>,
}

impl ReportFile {
    pub fn new(reports: Vec<CheckReport>) -> Self {
        ReportFile {
            schema: SCHEMA,
            reports,
        }
    }
}
