//! Pass/fail reports shared by the symbolic checkers and the table verifiers.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub subject: String,
    pub passed: bool,
    /// One line per failing cell or finding.
    pub details: Vec<String>,
}

impl CheckResult {
    pub fn new(check: &str, subject: &str) -> Self {
        Self { check: check.to_string(), subject: subject.to_string(), passed: true, details: Vec::new() }
    }

    pub fn fail(&mut self, detail: impl Into<String>) {
        self.passed = false;
        self.details.push(detail.into());
    }

    /// Records a finding without failing the check.
    pub fn note(&mut self, detail: impl Into<String>) {
        self.details.push(detail.into());
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}
