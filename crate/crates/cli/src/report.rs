use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::config::{BackendKind, CheckKind, ModeChoice};

#[derive(Serialize, Debug, Clone)]
pub struct StageSummary {
    pub n: usize,
    pub size: usize,
    pub elements: Vec<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct RunSummary {
    pub mode: &'static str,
    pub sizes: Vec<usize>,
    pub stabilized_at: Option<usize>,
    pub certified_truncation: bool,
    pub stages: Vec<StageSummary>,
    /// `connecting[n - 1]` tabulates `Z_(n-1) -> Z_n`.
    pub connecting: Vec<Vec<usize>>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            instances: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.passed = false;
        self.failures.push(why.into());
    }
}

/// Machine-readable outcome of one invocation. Timings are kept out of the
/// serialized form so that equal inputs give byte-identical reports.
#[derive(Serialize, Debug, Clone)]
pub struct RunReport {
    pub command: &'static str,
    pub backend: BackendKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeChoice>,
    pub seed: u64,
    pub requested_checks: Vec<CheckKind>,
    pub runs: Vec<RunSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<CheckOutcome>,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    #[serde(skip)]
    pub timing: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn finish(&mut self) {
        self.passed = self.checks.iter().all(|c| c.passed) && self.agreement.as_ref().is_none_or(|a| a.passed);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} on {}", self.command, self.backend.name());
        if let Some(input) = &self.input {
            let _ = write!(out, " ({input})");
        }
        out.push('\n');
        for run in &self.runs {
            let sizes: Vec<String> = run.sizes.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "[{}] stage sizes: {}", run.mode, sizes.join(" "));
            match run.stabilized_at {
                Some(s) => {
                    let _ = writeln!(out, "[{}] stabilized at stage {s} with {} elements", run.mode, run.sizes[s]);
                }
                None => {
                    let _ = writeln!(
                        out,
                        "[{}] not stabilized within {} stages; stages are a certified truncation",
                        run.mode,
                        run.sizes.len() - 1
                    );
                }
            }
            let shown = &run.stages[run.stabilized_at.unwrap_or(run.stages.len() - 1)];
            if shown.size <= 32 {
                let _ = writeln!(out, "[{}] stage {}: {}", run.mode, shown.n, shown.elements.join(", "));
            }
        }
        if let Some(a) = &self.agreement {
            write_check(&mut out, a);
        }
        for c in &self.checks {
            write_check(&mut out, c);
        }
        if !self.timing.is_empty() {
            let t: Vec<String> =
                self.timing.iter().map(|(k, d)| format!("{k} {:.3}s", d.as_secs_f64())).collect();
            let _ = writeln!(out, "time: {}", t.join(", "));
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn write_check(out: &mut String, c: &CheckOutcome) {
    let verdict = if c.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "check {}: {verdict} ({} checked)", c.name, c.instances);
    for n in &c.notes {
        let _ = writeln!(out, "  {n}");
    }
    for f in c.failures.iter().take(10) {
        let _ = writeln!(out, "  failure: {f}");
    }
    if c.failures.len() > 10 {
        let _ = writeln!(out, "  ... {} more failures", c.failures.len() - 10);
    }
}
