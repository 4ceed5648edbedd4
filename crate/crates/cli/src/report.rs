//! Report records and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::scene::{Metadata, Scene};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub value: String,
    pub agrees: bool,
}

/// One computed quantity. Values are exact integers, rationals `p/q` or
/// integer vectors and matrices, never floating point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub formula: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
}

/// An identity that must hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub scene: String,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Combinatorial scene replaying a polynomial run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<Scene>,
    /// Minimized scenes reproducing property violations.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Scene>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, scene: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            scene: scene.to_string(),
            seed,
            entries: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            replay: None,
            counterexamples: Vec::new(),
            passed: true,
        }
    }

    pub fn entry(&mut self, name: impl Into<String>, value: impl ToString, formula: &str, hypotheses: &[&str]) -> &mut Entry {
        self.entries.push(Entry {
            name: name.into(),
            value: value.to_string(),
            formula: formula.to_string(),
            hypotheses: hypotheses.iter().map(|h| h.to_string()).collect(),
            oracle: None,
        });
        self.entries.last_mut().expect("just pushed")
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl ToString) {
        self.entry(name, value, "", &[]);
    }

    pub fn check(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), holds, detail: detail.into() });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value.as_str())
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    /// Compares against the scene's regression values and sets `passed`.
    pub fn finish(&mut self, metadata: &Metadata) {
        for (name, want) in &metadata.expected {
            let check = match self.get(name) {
                Some(got) if got == want.value => Check { name: format!("expected {name}"), holds: true, detail: String::new() },
                Some(got) => Check {
                    name: format!("expected {name}"),
                    holds: false,
                    detail: format!("got {got}, expected {}", want.value),
                },
                None => Check { name: format!("expected {name}"), holds: false, detail: "not computed".into() },
            };
            self.checks.push(check);
        }
        for e in &self.entries {
            if let Some(o) = &e.oracle {
                if !o.agrees {
                    self.checks.push(Check {
                        name: format!("oracle {}", e.name),
                        holds: false,
                        detail: format!("combinatorial {} vs oracle {}", e.value, o.value),
                    });
                }
            }
        }
        self.passed = self.checks.iter().all(|c| c.holds);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} (seed {})", self.command, self.scene, self.seed);
        let width = self.entries.iter().map(|e| e.name.chars().count()).max().unwrap_or(0);
        for e in &self.entries {
            let _ = write!(out, "  {:width$} = {}", e.name, e.value);
            if let Some(o) = &e.oracle {
                let _ = write!(out, "  [oracle {}{}]", o.value, if o.agrees { "" } else { " MISMATCH" });
            }
            if !e.formula.is_empty() {
                let _ = write!(out, "  ({})", e.formula);
            }
            if !e.hypotheses.is_empty() {
                let _ = write!(out, "  assuming {}", e.hypotheses.join(", "));
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let _ = write!(out, "  [{}] {}", if c.holds { " ok " } else { "FAIL" }, c.name);
                if !c.detail.is_empty() {
                    let _ = write!(out, ": {}", c.detail);
                }
                out.push('\n');
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for s in &self.counterexamples {
            let _ = writeln!(out, "counterexample:\n{}", s.to_json());
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

pub fn fmt_vec<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

pub fn fmt_matrix(m: &dicrit_core::IntMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}
