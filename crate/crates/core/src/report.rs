//! Structured verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// One checked statement with the number of instances examined and any
/// counterexamples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub statement: String,
    pub status: Status,
    pub checked: usize,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
}

/// Witness lists are truncated to this many entries.
pub const MAX_WITNESSES: usize = 8;

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            seed: None,
            checks: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Starts a check; record instances on the returned handle.
    pub fn check(&mut self, statement: impl Into<String>) -> &mut Check {
        self.checks.push(Check {
            statement: statement.into(),
            status: Status::Pass,
            checked: 0,
            witnesses: Vec::new(),
        });
        self.checks.last_mut().expect("just pushed")
    }

    pub fn not_applicable(&mut self, statement: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            statement: statement.into(),
            status: Status::NotApplicable,
            checked: 0,
            witnesses: vec![Value::String(reason.into())],
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_text(&self) -> String {
        let mut out = self.title.clone();
        if let Some(seed) = self.seed {
            out.push_str(&format!(" (seed {seed})"));
        }
        out.push('\n');
        let width = self.checks.iter().map(|c| c.statement.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "n/a ",
            };
            out.push_str(&format!(
                "  {tag}  {:<width$}  [{} checked]\n",
                c.statement, c.checked
            ));
            for w in &c.witnesses {
                out.push_str(&format!("        {w}\n"));
            }
        }
        out
    }
}

impl Check {
    /// Records one instance; a `Some` witness marks the check failed.
    pub fn record(&mut self, witness: Option<Value>) {
        self.checked += 1;
        if let Some(w) = witness {
            self.status = Status::Fail;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn ok(&mut self) {
        self.record(None);
    }

    pub fn fail(&mut self, witness: Value) {
        self.record(Some(witness));
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}
