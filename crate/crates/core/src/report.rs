//! Pass/fail bookkeeping for verification runs: every check becomes one
//! printed line plus a serializable record.

use crate::error::Result;
use serde::Serialize;
use std::fmt;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<44} {:>7.2}s  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Default, Serialize)]
pub struct ReportSet {
    pub checks: Vec<CheckResult>,
}

impl ReportSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Time a check; Ok carries the detail line, Err becomes the
    /// failure detail. Returns whether it passed.
    pub fn run<F>(&mut self, name: &str, f: F) -> bool
    where
        F: FnOnce() -> Result<String>,
    {
        let start = Instant::now();
        let outcome = f();
        let seconds = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(e) => (false, e.to_string().replace('\n', " | ")),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass,
            detail,
            seconds,
        });
        pass
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn summary(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        format!("{} of {} checks passed", passed, self.checks.len())
    }
}

impl fmt::Display for ReportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}", c)?;
        }
        write!(f, "{}", self.summary())
    }
}
