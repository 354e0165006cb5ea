//! Serialization: CSV at 17 significant digits, JSON with numbers carried as
//! decimal strings, and the run manifest wrapped around every JSON payload.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checks::{Outcome, Relation};

pub const SCHEMA: &str = "efimov-run-manifest/1";

/// Shortest representation that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// 17 significant digits, the CSV convention.
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Header {
    pub schema: String,
    pub command: String,
    pub version: String,
    pub started_unix_s: u64,
    pub wall_clock_s: String,
    /// Per-step wall-clock seconds, e.g. per verification criterion.
    pub timings: BTreeMap<String, String>,
}

/// The data section is everything that must be reproducible run to run;
/// clock readings live only in the header.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub header: Header,
    pub parameters: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, String>,
    pub data: Value,
}

impl RunManifest {
    pub fn write(&self, mut w: impl Write) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub measured: String,
    pub bound: String,
    pub relation: String,
    pub margin: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CriterionRecord {
    pub id: u8,
    pub suite: String,
    pub title: String,
    pub passed: bool,
    pub error: Option<String>,
    pub budget_s: String,
    pub checks: Vec<CheckRecord>,
}

pub fn criterion_record(o: &Outcome) -> CriterionRecord {
    CriterionRecord {
        id: o.id,
        suite: format!("{:?}", o.suite).to_lowercase(),
        title: o.title.to_string(),
        passed: o.passed(),
        error: o.error.clone(),
        budget_s: num(o.budget_s),
        checks: o
            .checks
            .iter()
            .map(|c| CheckRecord {
                name: c.name.clone(),
                measured: num(c.measured),
                bound: num(c.bound),
                relation: match c.relation {
                    Relation::Below => "<".into(),
                    Relation::Above => ">".into(),
                },
                margin: num(c.margin()),
                passed: c.passed,
            })
            .collect(),
    }
}

pub fn text_report(outcomes: &[Outcome], mut w: impl Write) -> std::io::Result<()> {
    for o in outcomes {
        let tag = if o.passed() { "PASS" } else { "FAIL" };
        writeln!(w, "{tag} [{:02}] {} ({:.2}s / {}s)", o.id, o.title, o.elapsed_s, o.budget_s)?;
        if let Some(e) = &o.error {
            writeln!(w, "    error: {e}")?;
        }
        for c in &o.checks {
            let rel = match c.relation {
                Relation::Below => "<",
                Relation::Above => ">",
            };
            let mark = if c.passed { "ok " } else { "BAD" };
            writeln!(w, "    {mark} {} = {:.6e} {rel} {:.3e}", c.name, c.measured, c.bound)?;
        }
    }
    Ok(())
}
