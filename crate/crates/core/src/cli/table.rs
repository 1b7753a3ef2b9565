use serde::{Deserialize, Serialize};

use super::RunSpec;

/// Column-major-by-name, row-major data: one row per time (or check) point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Everything a run writes: the spec that produced it and its table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub spec: RunSpec,
    pub notes: Vec<String>,
    pub table: Table,
}

/// Nine significant digits, scientific, locale independent.
pub fn format_value(v: f64) -> String {
    // no "-0"
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.8e}")
}

impl RunOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# spec: {}\n",
            serde_json::to_string(&self.spec).expect("spec serializes")
        ));
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out.push_str(&self.table.columns.join(","));
        out.push('\n');
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output serializes");
        s.push('\n');
        s
    }
}
