//! Column-oriented result tables with CSV and JSON writers.

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Version string echoed into every table.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    Real(Vec<f64>),
    Label(Vec<String>),
}

impl Values {
    fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Label(v) => v.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Values,
}

/// Named columns of equal length plus a `key=value` parameter echo.
/// Rows are in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

/// Reals are written in scientific notation with 14 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.13e}")
}

impl SweepTable {
    pub fn new(kind: &str) -> Self {
        Self {
            metadata: vec![
                ("version".into(), ARTIFACT_VERSION.into()),
                ("table".into(), kind.into()),
            ],
            columns: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn real(mut self, name: &str, values: Vec<f64>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            values: Values::Real(values),
        });
        self
    }

    pub fn label(mut self, name: &str, values: Vec<String>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            values: Values::Label(values),
        });
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&Values> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.values)
    }

    pub fn reals(&self, name: &str) -> Option<&[f64]> {
        match self.column(name)? {
            Values::Real(v) => Some(v),
            Values::Label(_) => None,
        }
    }

    /// Equal column lengths and finite reals.
    pub fn validate(&self) -> Result<()> {
        let n = self.rows();
        for c in &self.columns {
            if c.values.len() != n {
                return Err(CliError::Invalid(format!(
                    "column {} has {} rows, expected {n}",
                    c.name,
                    c.values.len()
                )));
            }
            if let Values::Real(v) = &c.values {
                if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                    return Err(CliError::Invalid(format!(
                        "column {} row {i} is not finite: {}",
                        c.name, v[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn cell(&self, col: &Column, row: usize) -> String {
        match &col.values {
            Values::Real(v) => format_real(v[row]),
            Values::Label(v) => v[row].clone(),
        }
    }

    /// `# key=value` lines, a header row, then one row per grid point.
    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Invalid(format!("csv encoding failed: {e}"));
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .map_err(csv_err)?;
        for row in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| self.cell(c, row)))
                .map_err(csv_err)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| CliError::Invalid(format!("csv encoding failed: {e}")))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    /// `{"metadata": {...}, "columns": {name: [...]}}`.
    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let columns: Map<String, Value> = self
            .columns
            .iter()
            .map(|c| {
                let values = match &c.values {
                    Values::Real(v) => v.iter().map(|&x| Value::from(x)).collect(),
                    Values::Label(v) => v.iter().map(|s| Value::String(s.clone())).collect(),
                };
                (c.name.clone(), Value::Array(values))
            })
            .collect();
        let doc = serde_json::json!({ "metadata": metadata, "columns": columns });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        SweepTable::new("demo")
            .meta("n_s", 0.01)
            .real("x", vec![0.0, 0.5])
            .label("tag", vec!["a".into(), "b".into()])
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[2], "# n_s=0.01");
        assert_eq!(lines[3], "x,tag");
        assert_eq!(lines[4], "0.0000000000000e0,a");
        assert_eq!(lines[5], "5.0000000000000e-1,b");
    }

    #[test]
    fn json_mirrors_columns() {
        let v: Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        assert_eq!(v["columns"]["x"][1], 0.5);
        assert_eq!(v["columns"]["tag"][0], "a");
        assert_eq!(v["metadata"]["table"], "demo");
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let t = SweepTable::new("bad").real("x", vec![f64::NAN]);
        assert!(t.to_csv().is_err());
    }

    #[test]
    fn ragged_columns_are_rejected() {
        let t = SweepTable::new("bad")
            .real("x", vec![1.0])
            .real("y", vec![]);
        assert!(t.validate().is_err());
    }
}
