//! Pass/fail reports produced by the axiom and identity checkers.

use std::fmt;

use serde::Serialize;

/// One named check with an optional counterexample witness.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckItem {
    pub fn pass(label: impl Into<String>) -> CheckItem {
        CheckItem { label: label.into(), passed: true, witness: None }
    }

    pub fn fail(label: impl Into<String>, witness: impl Into<String>) -> CheckItem {
        CheckItem {
            label: label.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }
}

/// A group of checks run by one verifier.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> CheckReport {
        CheckReport { name: name.into(), items: vec![], passed: true }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.passed &= item.passed;
        self.items.push(item);
    }

    /// Records a labelled condition; `witness` is consulted only on failure.
    pub fn record(&mut self, label: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.push(CheckItem::pass(label));
        } else {
            self.push(CheckItem::fail(label, witness()));
        }
    }

    pub fn item(&self, label: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.label == label)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed { "PASS" } else { "FAIL" })?;
        for item in &self.items {
            write!(f, "  {}: {}", item.label, if item.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &item.witness {
                write!(f, " [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
