//! Report entries, verdicts, JSON payload and text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::Section;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// A documented discrepancy in the source claims; never fails a run.
    Flagged,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::Flagged => "FLAG",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub anchor: &'static str,
    pub status: Status,
    pub data: Value,
    /// Why an entry was skipped or failed outside its own comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Entry {
    pub fn new(name: impl Into<String>, anchor: &'static str, status: Status, data: Value) -> Self {
        Entry {
            name: name.into(),
            anchor,
            status,
            data,
            diagnostic: None,
        }
    }

    /// Resource and precision limits, and inputs a section cannot handle,
    /// downgrade to `skipped`; anything else is a failure.
    pub fn from_error(name: impl Into<String>, anchor: &'static str, err: &Error) -> Self {
        let status = match err {
            Error::ResourceLimit(_) | Error::Precision(_) | Error::Input(_) => Status::Skipped,
            _ => Status::Fail,
        };
        Entry {
            name: name.into(),
            anchor,
            status,
            data: Value::Null,
            diagnostic: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub section: Section,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub flagged: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub group: String,
    pub config: Value,
    pub sections: Vec<SectionReport>,
    /// Wall-clock time per section; excluded from the payload.
    pub durations_ms: Vec<(Section, f64)>,
}

pub const SCHEMA: &str = "lcs-verify-report/1";

impl Report {
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.sections.iter().flat_map(|s| s.entries.iter())
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts {
            pass: 0,
            fail: 0,
            skipped: 0,
            flagged: 0,
        };
        for e in self.entries() {
            match e.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skipped => c.skipped += 1,
                Status::Flagged => c.flagged += 1,
            }
        }
        c
    }

    pub fn passed(&self) -> bool {
        self.entries().all(|e| e.status != Status::Fail)
    }

    /// 0 when nothing failed, 1 otherwise. Configuration errors (2) never
    /// produce a report.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn section(&self, s: Section) -> Option<&SectionReport> {
        self.sections.iter().find(|r| r.section == s)
    }

    pub fn entry(&self, s: Section, name: &str) -> Option<&Entry> {
        self.section(s)?.entries.iter().find(|e| e.name == name)
    }

    /// The deterministic part of the report.
    pub fn payload_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "group": self.group,
            "config": self.config,
            "sections": self.sections,
            "counts": self.counts(),
            "verdict": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.payload_json();
        let durations: serde_json::Map<String, Value> = self
            .durations_ms
            .iter()
            .map(|(s, ms)| (s.name().to_string(), json!(ms)))
            .collect();
        v["durations_ms"] = Value::Object(durations);
        v
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group: {}", self.group);
        for s in &self.sections {
            let ms = self
                .durations_ms
                .iter()
                .find(|(k, _)| *k == s.section)
                .map_or(0.0, |(_, ms)| *ms);
            let _ = writeln!(out, "[{}] {:.0} ms", s.section.name(), ms);
            for e in &s.entries {
                let _ = writeln!(out, "  {}  {}    {}", e.status.label(), e.name, e.anchor);
                if let Some(d) = &e.diagnostic {
                    let _ = writeln!(out, "        {d}");
                }
            }
        }
        let c = self.counts();
        let _ = writeln!(
            out,
            "verdict: {} ({} pass, {} fail, {} skipped, {} flagged)",
            if self.passed() { "PASS" } else { "FAIL" },
            c.pass,
            c.fail,
            c.skipped,
            c.flagged
        );
        out
    }
}
