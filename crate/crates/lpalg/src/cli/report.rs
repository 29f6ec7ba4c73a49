//! Task reports: one record per task, rendered both as human-readable text
//! and as structured JSON carrying identical data. Exact scalars are
//! serialized as rational strings; floats appear only inside norm intervals
//! and are rendered with a fixed twelve significant digits so reports stay
//! byte-diffable.

use crate::lp_norms::NormEstimate;
use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    Pass,
    Fail,
    /// A guard tripped before the question was decided.
    Inconclusive,
}

impl TaskStatus {
    pub fn label(&self) -> &'static str {
        match self {
            TaskStatus::Pass => "pass",
            TaskStatus::Fail => "fail",
            TaskStatus::Inconclusive => "inconclusive-interval",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedInterval {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub method: String,
}

impl NamedInterval {
    pub fn from_estimate(name: impl Into<String>, est: &NormEstimate) -> Self {
        NamedInterval {
            name: name.into(),
            lower: est.lower,
            upper: est.upper,
            method: est.method.tag().to_string(),
        }
    }
}

/// Twelve significant digits, fixed width, locale-free.
pub fn render_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug)]
pub struct TaskReport {
    pub index: usize,
    pub command: String,
    /// The mathematical statement this task checks.
    pub claim: String,
    pub status: TaskStatus,
    pub details: Vec<(String, String)>,
    pub intervals: Vec<NamedInterval>,
    pub timing_ms: u128,
}

impl TaskReport {
    pub fn new(index: usize, command: &str, claim: impl Into<String>) -> Self {
        TaskReport {
            index,
            command: command.to_string(),
            claim: claim.into(),
            status: TaskStatus::Pass,
            details: Vec::new(),
            intervals: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.details.push((key.into(), value.into()));
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.status = TaskStatus::Fail;
        self.details.push(("failure".into(), message.into()));
    }

    pub fn inconclusive(&mut self, message: impl Into<String>) {
        self.status = TaskStatus::Inconclusive;
        self.details.push(("guard".into(), message.into()));
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.tasks.iter().any(|t| t.status == TaskStatus::Fail)
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let _ = writeln!(out, "== task {} ({}) — {}", t.index, t.command, t.status.label());
            let _ = writeln!(out, "   claim: {}", t.claim);
            for (k, v) in &t.details {
                let _ = writeln!(out, "   {k}: {v}");
            }
            for iv in &t.intervals {
                let _ = writeln!(
                    out,
                    "   interval {}: [{}, {}] ({})",
                    iv.name,
                    render_float(iv.lower),
                    render_float(iv.upper),
                    iv.method
                );
            }
            let _ = writeln!(out, "   timing_ms: {}", t.timing_ms);
        }
        let failed = self.tasks.iter().filter(|t| t.status == TaskStatus::Fail).count();
        let _ = writeln!(
            out,
            "== summary: {} tasks, {} failed",
            self.tasks.len(),
            failed
        );
        out
    }

    /// Structured rendering; identical content to the text form.
    pub fn render_json(&self) -> String {
        let tasks: Vec<Value> = self
            .tasks
            .iter()
            .map(|t| {
                json!({
                    "index": t.index,
                    "command": t.command,
                    "claim": t.claim,
                    "status": t.status.label(),
                    "details": t.details.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
                    "intervals": t.intervals.iter().map(|iv| json!({
                        "name": iv.name,
                        "lower": render_float(iv.lower),
                        "upper": render_float(iv.upper),
                        "method": iv.method,
                    })).collect::<Vec<_>>(),
                    "timing_ms": t.timing_ms,
                })
            })
            .collect();
        let root = json!({
            "tasks": tasks,
            "failed": self.tasks.iter().filter(|t| t.status == TaskStatus::Fail).count(),
        });
        serde_json::to_string_pretty(&root).expect("report JSON serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rendering_is_fixed_width() {
        assert_eq!(render_float(1.0), "1.00000000000e0");
        assert_eq!(render_float(2.0f64.sqrt()), "1.41421356237e0");
    }

    #[test]
    fn json_round_trips_for_diffing() {
        let mut report = Report::default();
        let mut t = TaskReport::new(1, "core", "core equals unit indicators");
        t.detail("dimension", "3");
        t.intervals.push(NamedInterval {
            name: "lambda".into(),
            lower: 1.0,
            upper: 1.0 + 1e-12,
            method: "exact-p1".into(),
        });
        report.tasks.push(t);
        let rendered = report.render_json();
        let parsed: serde_json::Value = serde_json::from_str(&rendered).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), rendered);
    }

    #[test]
    fn empty_report_is_a_pass() {
        let report = Report::default();
        assert!(!report.any_failed());
        assert!(report.render_text().contains("0 tasks"));
    }
}
