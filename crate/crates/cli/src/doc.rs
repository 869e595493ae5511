//! Report documents and CSV tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use waist_core::report::{BoundRef, EstimateReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub bound_ref: Vec<BoundRef>,
    /// None for plain estimates that assert nothing.
    pub pass: Option<bool>,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub std_error: Option<f64>,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Record {
    pub fn new(id: impl Into<String>, refs: &[BoundRef]) -> Self {
        Record {
            id: id.into(),
            bound_ref: refs.to_vec(),
            pass: None,
            measured: None,
            bound: None,
            samples: None,
            seed: None,
            std_error: None,
            detail: Value::Null,
            timing: None,
        }
    }

    pub fn pass(mut self, p: bool) -> Self {
        self.pass = Some(p);
        self
    }

    pub fn measured(mut self, v: f64) -> Self {
        self.measured = Some(v);
        self
    }

    pub fn bound(mut self, v: f64) -> Self {
        self.bound = Some(v);
        self
    }

    /// Carries value, samples, seed and standard error of a stochastic estimate.
    pub fn estimate(mut self, e: &EstimateReport) -> Self {
        self.measured = Some(e.value);
        self.samples = Some(e.samples);
        self.seed = Some(e.seed);
        self.std_error = Some(e.std_error);
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn detail(mut self, d: impl Serialize) -> Self {
        self.detail = serde_json::to_value(d).expect("report values serialize");
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    pub pass: bool,
    pub failures: Vec<String>,
    pub timing: Timing,
}

impl ReportDocument {
    pub fn new(command: &str, config: BTreeMap<String, String>, records: Vec<Record>, seconds: f64) -> Self {
        let failures: Vec<String> = records.iter().filter(|r| r.pass == Some(false)).map(|r| r.id.clone()).collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: "waistlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            pass: failures.is_empty(),
            failures,
            records,
            timing: Timing { wall_seconds: seconds },
        }
    }
}

/// A CSV table written next to the report for plotting.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Shortest round-trip formatting, so CSV values are reproducible.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn join(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")
}

/// Removes every `timing` field, for comparing reports across runs.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
