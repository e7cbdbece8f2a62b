//! Uniform pass/fail reporting for verification routines.

use serde::Serialize;
use std::fmt;

/// One named check with its outcome and an optional detail line.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// An ordered collection of check results for one verification run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<CheckEntry>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(CheckEntry {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, false, Some(detail.into()));
    }

    /// True when every recorded check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(f, "  [{mark}] {}: {}", c.name, d)?,
                None => writeln!(f, "  [{mark}] {}", c.name)?,
            }
        }
        Ok(())
    }
}
