//! Report documents and their JSON / CSV encodings.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The node budget ran out; the rows computed so far are kept.
    BudgetPartial,
}

/// Provenance tags attached to numeric results.
pub mod provenance {
    pub const EXACT: &str = "exact";
    pub const BOUND: &str = "bound";

    pub fn estimated(err: f64) -> String {
        format!("estimated±{err:.3e}")
    }

    /// A compensated sum of exactly known terms.
    pub fn exact_sum(err: f64) -> String {
        format!("exact-sum±{err:.3e}")
    }

    pub fn stirling(err: f64) -> String {
        format!("stirling±{err:.3e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub spec: Option<String>,
    pub seed: u64,
    pub status: Status,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(default)]
    pub summary: BTreeMap<String, Value>,
    /// Seconds since the Unix epoch; excluded from determinism comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(experiment: &str, spec: Option<String>, seed: u64, columns: &[&str]) -> Self {
        Report {
            experiment: experiment.to_string(),
            spec,
            seed,
            status: Status::Ok,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            timestamp: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn stamp(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs());
        self
    }

    /// The report without its timestamp.
    pub fn canonical(&self) -> Report {
        Report { timestamp: None, ..self.clone() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The row table as CSV; strings unquoted where possible, null as empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
