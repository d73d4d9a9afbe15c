//! Check reports: lists of violated axioms with basis-index witnesses.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Short name of the violated axiom, e.g. `"jacobi"`.
    pub check: String,
    /// Basis indices that exhibit the failure.
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, check: &str, witness: Vec<usize>, detail: impl Into<String>) {
        self.violations.push(Violation { check: check.to_string(), witness, detail: detail.into() });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// True if some violation carries the given check name.
    pub fn has(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    pub fn first(&self, check: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.check == check)
    }
}
