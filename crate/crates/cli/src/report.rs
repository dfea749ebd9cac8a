//! Command reports and their two renderings.
//!
//! The machine rendering is line oriented and stable:
//!
//! ```text
//! META <key> <value>
//! VALUE <name> <text>
//! VERDICT <name> <true|false> [witness: var=val,...]
//! NOTE <text>
//! ```
//!
//! META lines come first, then values, verdicts and notes in the order they
//! were recorded. The human rendering carries the same verdicts.

use std::fmt::Write as _;

use jetgauge_core::prolong::ProlongedField;
use jetgauge_core::{OracleConfig, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictLine {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub meta: Vec<(String, String)>,
    pub values: Vec<(String, String)>,
    pub verdicts: Vec<VerdictLine>,
    pub notes: Vec<String>,
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl Report {
    pub fn new(command: &str, input: &str, oracle: &OracleConfig) -> Self {
        let meta = vec![
            ("command".to_string(), command.to_string()),
            ("input".to_string(), input.to_string()),
            ("seed".to_string(), format!("{:#x}", oracle.seed)),
            ("samples".to_string(), oracle.samples.to_string()),
            ("tol".to_string(), format!("{:e}", oracle.tol)),
        ];
        Report { title: format!("{command} {input}"), meta, ..Report::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), one_line(&value.to_string())));
    }

    pub fn value(&mut self, name: &str, value: impl ToString) {
        self.values.push((name.to_string(), one_line(&value.to_string())));
    }

    /// One value per row of the table, named `<prefix>.eta_<J>`.
    pub fn table(&mut self, prefix: &str, y: &ProlongedField) {
        for (j, row) in y.ordered_rows() {
            let label = if j.is_empty() { "eta".to_string() } else { format!("eta_{}", y.ctx().suffix(&j)) };
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            self.value(&format!("{prefix}.{label}"), format!("({})", cells.join(", ")));
        }
        if !y.p().is_empty() {
            let cells: Vec<String> = y.p().iter().map(|e| e.to_string()).collect();
            self.value(&format!("{prefix}.P"), format!("({})", cells.join(", ")));
        }
    }

    pub fn verdict(&mut self, name: &str, v: &Verdict) {
        let (witness, detail) = match v {
            Verdict::Equal => (None, None),
            Verdict::Different(w) => (Some(w.to_string()).filter(|s| !s.is_empty()), Some(format!("lhs={:.12e} rhs={:.12e}", w.lhs, w.rhs))),
            Verdict::Unsampleable { attempts, reason } => (None, Some(format!("no valid sample in {attempts} attempts: {reason}"))),
        };
        self.verdicts.push(VerdictLine { name: name.to_string(), holds: v.holds(), witness, detail });
    }

    pub fn check(&mut self, name: &str, holds: bool, detail: Option<String>) {
        self.verdicts.push(VerdictLine { name: name.to_string(), holds, witness: None, detail: detail.map(|d| one_line(&d)) });
    }

    pub fn note(&mut self, text: impl ToString) {
        self.notes.push(one_line(&text.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "META {k} {v}");
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "VALUE {k} {v}");
        }
        for v in &self.verdicts {
            let _ = write!(out, "VERDICT {} {}", v.name, v.holds);
            if let Some(w) = &v.witness {
                let _ = write!(out, " witness: {w}");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "NOTE {n}");
        }
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "jetgauge {}", self.title);
        let params: Vec<String> = self.meta.iter().skip(2).map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "  {}", params.join("  "));
        if !self.values.is_empty() {
            out.push('\n');
            let width = self.values.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.values {
                let _ = writeln!(out, "  {k:<width$}  = {v}");
            }
        }
        if !self.verdicts.is_empty() {
            out.push('\n');
            for v in &self.verdicts {
                let tag = if v.holds { "pass" } else { "FAIL" };
                let _ = write!(out, "  [{tag}] {}", v.name);
                if let Some(w) = &v.witness {
                    let _ = write!(out, "  at {w}");
                }
                if let (false, Some(d)) = (v.holds, &v.detail) {
                    let _ = write!(out, "  ({d})");
                }
                out.push('\n');
            }
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for n in &self.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        let passed = self.verdicts.iter().filter(|v| v.holds).count();
        let _ = writeln!(out, "\nresult: {} ({passed}/{} verdicts hold)", if self.passed() { "pass" } else { "FAIL" }, self.verdicts.len());
        out
    }
}
