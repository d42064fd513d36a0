//! Step-by-step certificate reports, rendered as text or JSON.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub example: String,
    pub title: String,
    pub steps: Vec<Step>,
    pub verdict: String,
}

impl Report {
    pub fn new(example: impl Into<String>, title: impl Into<String>) -> Self {
        Report {
            example: example.into(),
            title: title.into(),
            steps: Vec::new(),
            verdict: String::new(),
        }
    }

    pub fn step(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        lines: Vec<String>,
        data: impl Serialize,
    ) -> bool {
        self.steps.push(Step {
            name: name.into(),
            passed,
            lines,
            data: serde_json::to_value(data).expect("report data serializes"),
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    /// First failing step, if any.
    pub fn failed_step(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.passed)
    }

    /// `verbose` adds each step's detail lines.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = format!("{}: {}\n", self.example, self.title);
        for s in &self.steps {
            out.push_str(&format!("[{}] {}\n", if s.passed { "ok" } else { "FAIL" }, s.name));
            if verbose {
                for l in &s.lines {
                    out.push_str(&format!("    {l}\n"));
                }
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
