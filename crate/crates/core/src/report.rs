use serde::{Deserialize, Serialize};

/// A single failed law instance: which law, under which variable assignment,
/// and the two sides that disagreed.  Elements are rendered as strings so a
/// witness stays readable regardless of backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub assignment: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of validating one object (carrier, action, crossed module, ...).
///
/// `checks` counts individual law instances evaluated; `laws` lists the law
/// families that were covered; `violations` holds one witness per failing
/// instance (callers may cap how many get collected); `notes` records
/// anything the validator decided *not* to check and why, so a green report
/// is honest about its own coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: usize,
    pub laws: Vec<String>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            checks: 0,
            laws: Vec::new(),
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn law(&mut self, name: impl Into<String>) {
        self.laws.push(name.into());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Merge a sub-report produced while validating a component of a larger
    /// object.  Violations keep their law names; notes are prefixed so their
    /// origin stays visible.
    pub fn absorb(&mut self, sub: ValidationReport) {
        self.checks += sub.checks;
        for law in sub.laws {
            if !self.laws.contains(&law) {
                self.laws.push(law);
            }
        }
        self.violations.extend(sub.violations);
        for note in sub.notes {
            self.notes.push(format!("{}: {}", sub.subject, note));
        }
    }
}

/// How many violation witnesses a report collects before it stops recording
/// (checking continues so `checks` stays meaningful, but storage is bounded).
pub const MAX_WITNESSES: usize = 16;

pub(crate) fn push_violation(report: &mut ValidationReport, v: Violation) {
    if report.violations.len() < MAX_WITNESSES {
        report.violations.push(v);
    }
}
