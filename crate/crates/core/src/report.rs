//! Law-suite reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub case: String,
    pub witnesses: Vec<String>,
}

/// A two-sided bound on a quantity that should vanish, kept for the record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub case: String,
    pub lower: String,
    pub upper: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub cases_run: usize,
    pub violations: Vec<Violation>,
    pub residuals: Vec<Residual>,
    pub notes: Vec<String>,
    pub tolerance: Option<String>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(suite: &str) -> RunReport {
        RunReport {
            suite: suite.to_string(),
            cases_run: 0,
            violations: Vec::new(),
            residuals: Vec::new(),
            notes: Vec::new(),
            tolerance: None,
            elapsed_ms: 0,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_clean() {
            0
        } else {
            1
        }
    }

    pub fn absorb(&mut self, other: RunReport) {
        self.cases_run += other.cases_run;
        self.violations.extend(other.violations);
        self.residuals.extend(other.residuals);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.is_clean() { "ok" } else { "FAILED" };
        let _ = writeln!(
            out,
            "suite {}: {} checks, {} violations ({verdict}, {} ms)",
            self.suite,
            self.cases_run,
            self.violations.len(),
            self.elapsed_ms
        );
        if let Some(t) = &self.tolerance {
            let _ = writeln!(out, "tolerance {t}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation: {} on {}", v.law, v.case);
            for w in &v.witnesses {
                let _ = writeln!(out, "    {w}");
            }
        }
        for r in &self.residuals {
            let _ = writeln!(out, "residual {} on {}: [{}, {}]", r.name, r.case, r.lower, r.upper);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// Accumulates checks for one case.
#[derive(Debug)]
pub struct Checker {
    case: String,
    report: RunReport,
}

impl Checker {
    pub fn new(case: &str) -> Checker {
        Checker {
            case: case.to_string(),
            report: RunReport::new(""),
        }
    }

    pub fn case(&self) -> &str {
        &self.case
    }

    /// Records one law instance; witnesses are only built on failure.
    pub fn check<F>(&mut self, law: &str, ok: bool, witnesses: F) -> bool
    where
        F: FnOnce() -> Vec<String>,
    {
        self.report.cases_run += 1;
        if !ok {
            self.report.violations.push(Violation {
                law: law.to_string(),
                case: self.case.clone(),
                witnesses: witnesses(),
            });
        }
        ok
    }

    pub fn fail(&mut self, law: &str, witnesses: Vec<String>) {
        self.check(law, false, || witnesses);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(format!("{}: {}", self.case, note.into()));
    }

    pub fn residual(&mut self, name: &str, lower: String, upper: String) {
        self.report.residuals.push(Residual {
            name: name.to_string(),
            case: self.case.clone(),
            lower,
            upper,
        });
    }

    pub fn finish(self) -> RunReport {
        self.report
    }
}
