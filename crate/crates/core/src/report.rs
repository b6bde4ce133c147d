//! Line-oriented verification reports with a deterministic `OK`/`FAIL n`
//! summary, shared by the verification sweeps and the CLI.

use std::fmt;

/// A report accumulates informational lines and violation lines; the
/// summary line is `OK` when no violations were recorded and `FAIL n`
/// otherwise.
#[derive(Debug, Clone, Default)]
pub struct Report {
    lines: Vec<String>,
    violations: usize,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn violation(&mut self, text: impl Into<String>) {
        self.lines.push(format!("FAIL {}", text.into()));
        self.violations += 1;
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.violations += other.violations;
    }

    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn is_ok(&self) -> bool {
        self.violations == 0
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    /// The summary line rendered at the end of the report.
    pub fn summary(&self) -> String {
        if self.violations == 0 {
            "OK".to_string()
        } else {
            format!("FAIL {}", self.violations)
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        write!(f, "{}", self.summary())
    }
}
