use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use mel_core::membership::{EquivalenceReport, SearchOutcome};
use mel_core::phi::ScalarFunctionSpec;
use serde::Serialize;

use crate::{CalculusOp, Common, Format, Kernel};

/// The resolved configuration embedded in every report.
#[derive(Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(rename = "fn", skip_serializing_if = "Option::is_none")]
    pub spec: Option<ScalarFunctionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operation: Option<CalculusOp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Kernel>,
    pub dimensions: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tol: f64,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &'static str, common: &Common, seed: impl Into<Option<u64>>) -> Self {
        Self {
            command,
            spec: None,
            operation: None,
            kernel: None,
            dimensions: vec![],
            trials: None,
            budget: None,
            seed: seed.into(),
            tol: common.tol,
            format: common.format,
        }
    }

    pub fn spec(mut self, spec: &ScalarFunctionSpec) -> Self {
        self.spec = Some(spec.clone());
        self
    }

    pub fn dimensions(mut self, n: &[usize]) -> Self {
        self.dimensions = n.to_vec();
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    fn header(&self) -> String {
        let mut s = self.command.to_string();
        if let Some(spec) = &self.spec {
            let _ = write!(s, "  fn={}", spec.label());
        }
        if let Some(seed) = self.seed {
            let _ = write!(s, "  seed={seed}");
        }
        if let Some(t) = self.trials {
            let _ = write!(s, "  trials={t}");
        }
        if let Some(b) = self.budget {
            let _ = write!(s, "  budget={b}");
        }
        let _ = write!(s, "  tol={:e}", self.tol);
        s
    }
}

/// Rounds to 12 significant digits.
pub fn significant(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

pub fn emit(format: Format, out: Option<&Path>, json: &serde_json::Value, text: &str) -> std::io::Result<()> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(json).expect("reports serialize") + "\n",
        Format::Text => text.to_string(),
    };
    match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn verdict_lines(s: &mut String, r: &EquivalenceReport) {
    for v in &r.verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        let _ = write!(s, "  n={:<2} {:<3} {status}  worst={:+.3e}  trials={}", r.dimension, v.condition.to_string(), v.worst_gap, v.trials);
        if v.skipped > 0 {
            let _ = write!(s, "  skipped={}", v.skipped);
        }
        if let Some(note) = &v.note {
            let _ = write!(s, "  {note}");
        }
        s.push('\n');
    }
}

pub fn equivalence_text(config: &RunConfig, reports: &[EquivalenceReport]) -> String {
    let mut s = config.header() + "\n";
    for r in reports {
        verdict_lines(&mut s, r);
        let _ = writeln!(s, "  n={:<2} outcome={:?} agree={}", r.dimension, r.outcome, r.agree);
    }
    if let Some(w) = reports.iter().flat_map(|r| &r.verdicts).find_map(|v| v.witness.as_ref().map(|w| (v.condition, w))) {
        let _ = writeln!(s, "witness (condition {}):", w.0);
        s += &serde_json::to_string_pretty(w.1).expect("witnesses serialize");
        s.push('\n');
    }
    s
}

pub fn search_text(config: &RunConfig, outcome: &SearchOutcome) -> String {
    let mut s = config.header() + "\n";
    if let Some(note) = &outcome.note {
        let _ = writeln!(s, "  {note}");
    }
    let _ = writeln!(s, "  evaluations={}  worst={:+.3e}", outcome.evaluations, outcome.worst_gap);
    match &outcome.report {
        Some(r) => {
            let _ = writeln!(s, "  violation of condition {} at n={} (gap {:+.6e}):", r.condition, r.dimension, r.gap());
            s += &serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
        }
        None => s += "  no violation found\n",
    }
    s
}

pub fn suite_text(config: &RunConfig, reports: &[EquivalenceReport]) -> String {
    let mut s = config.header() + "\n";
    for r in reports {
        let marks: Vec<&str> = r.verdicts.iter().map(|v| if v.passed { "P" } else { "F" }).collect();
        let _ = writeln!(
            s,
            "  {:<40} n={:<2} {} {:?}{}",
            r.spec.label(),
            r.dimension,
            marks.join(""),
            r.outcome,
            if r.agree { "" } else { "  DISAGREE" }
        );
    }
    let anomalies = reports.iter().filter(|r| !r.agree).count();
    let _ = writeln!(s, "{} runs, {anomalies} anomalies", reports.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(significant(1.0), 1.0);
        assert_eq!(significant(0.1234567890123456), 0.123456789012);
        assert_eq!(significant(-98765.43210987654), -98765.4321099);
        assert_eq!(significant(0.0), 0.0);
    }
}
