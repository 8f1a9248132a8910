//! Tabular output: `#` metadata lines, a header row, then rows of floats in
//! `{:.16e}` (17 significant digits, exact round-trip).

use serde_json::{json, Map, Value};

use super::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Non-finite values become `null`.
    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let v = json!({
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("tables serialize");
        s.push('\n');
        s
    }
}

/// Reads a table written by [`Table::to_csv`].
pub fn parse_csv(text: &str) -> Result<Table, String> {
    let mut meta = Vec::new();
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = loop {
        let line = lines.next().ok_or("missing header row")?;
        match line.strip_prefix('#') {
            Some(m) => {
                let (k, v) = m.trim().split_once('=').unwrap_or((m.trim(), ""));
                meta.push((k.to_string(), v.to_string()));
            }
            None => break line,
        }
    };
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| format!("bad cell '{c}': {e}")))
            .collect::<Result<Vec<f64>, String>>()?;
        if row.len() != columns.len() {
            return Err(format!("row has {} cells, header has {}", row.len(), columns.len()));
        }
        rows.push(row);
    }
    Ok(Table { meta, columns, rows })
}
