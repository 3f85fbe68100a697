//! Outcome types shared by every verification routine.
//!
//! A check either passes, fails with a human-readable witness, or is
//! skipped because a prerequisite already failed.  Routines never abort on
//! a mathematical failure; they return the witness so the caller can put it
//! in a certificate.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        };
        f.write_str(s)
    }
}

/// Result of a single verification routine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub status: CheckStatus,
    /// On FAIL: a concrete counterexample or reason.  On SKIPPED: the
    /// prerequisite that failed.
    pub witness: Option<String>,
    /// Free-form facts worth surfacing even on PASS (ranks, calibrations).
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport { status: CheckStatus::Pass, witness: None, notes: Vec::new() }
    }

    pub fn pass_with_notes(notes: Vec<String>) -> Self {
        CheckReport { status: CheckStatus::Pass, witness: None, notes }
    }

    pub fn fail(witness: String) -> Self {
        CheckReport { status: CheckStatus::Fail, witness: Some(witness), notes: Vec::new() }
    }

    pub fn skipped(reason: String) -> Self {
        CheckReport { status: CheckStatus::Skipped, witness: Some(reason), notes: Vec::new() }
    }

    pub fn is_pass(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn note(mut self, line: String) -> Self {
        self.notes.push(line);
        self
    }

    /// Combines sub-results: first failure wins, notes accumulate.
    pub fn merge(self, other: CheckReport) -> CheckReport {
        match (self.status, other.status) {
            (CheckStatus::Fail, _) => {
                let mut out = self;
                out.notes.extend(other.notes);
                out
            }
            (_, CheckStatus::Fail) | (_, CheckStatus::Skipped) => {
                let mut out = other;
                let mut notes = self.notes;
                notes.extend(std::mem::take(&mut out.notes));
                out.notes = notes;
                out
            }
            _ => {
                let mut out = self;
                out.notes.extend(other.notes);
                out
            }
        }
    }
}
