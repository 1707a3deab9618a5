use std::fmt::Write;
use std::path::Path;

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    /// A construction or a reported number with nothing to assert.
    Info,
}

impl Outcome {
    fn tag(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::Info => "INFO",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// One check or construction in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub check: String,
    /// Which construction or statement the check reproduces.
    pub anchor: String,
    pub outcome: Outcome,
    pub details: Vec<(String, String)>,
}

impl Entry {
    pub fn new(check: impl Into<String>, anchor: impl Into<String>, outcome: Outcome) -> Self {
        Entry { check: check.into(), anchor: anchor.into(), outcome, details: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub title: String,
    pub seed: u64,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(title: impl Into<String>, seed: u64) -> Self {
        Report { title: title.into(), seed, entries: Vec::new() }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    /// 1 if any check failed, else 3 if any was inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.outcome == Outcome::Fail) {
            1
        } else if self.entries.iter().any(|e| e.outcome == Outcome::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "report: {}", self.title);
        let _ = writeln!(s, "seed: {}", self.seed);
        for e in &self.entries {
            let _ = writeln!(s, "\n[{}] {}", e.outcome.tag(), e.check);
            let _ = writeln!(s, "  anchor: {}", e.anchor);
            for (k, v) in &e.details {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        let (pass, fail, inc) = self.entries.iter().fold((0, 0, 0), |(p, f, i), e| match e.outcome {
            Outcome::Pass => (p + 1, f, i),
            Outcome::Fail => (p, f + 1, i),
            Outcome::Inconclusive => (p, f, i + 1),
            Outcome::Info => (p, f, i),
        });
        let _ = writeln!(s, "\nsummary: {pass} passed, {fail} failed, {inc} inconclusive");
        s
    }
}

/// A serialized operator written next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub fn write_outputs(dir: &Path, report: &Report, artifacts: &[Artifact]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.txt"), report.render())?;
    for a in artifacts {
        std::fs::write(dir.join(&a.name), &a.contents)?;
    }
    Ok(())
}

/// Fixed-format numbers keep reports byte-identical across runs.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn num(x: f64) -> String {
    format!("{x:.10}")
}
