//! Pass/fail reports rendered as stable `key: value` text.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Informational `key: value` lines printed before the checks.
    pub facts: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.facts.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// Only the `key: value` lines, for commands that compute rather than check.
    pub fn facts_text(&self) -> String {
        self.facts.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.facts.extend(other.facts);
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.facts {
            writeln!(f, "{k}: {v}")?;
        }
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{}: {status}", c.name)?;
            } else {
                writeln!(f, "{}: {status} ({})", c.name, c.detail)?;
            }
        }
        writeln!(f, "result: {}", if self.all_passed() { "pass" } else { "FAIL" })
    }
}
