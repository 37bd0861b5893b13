use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub density: String,
    pub tol: f64,
}

/// A rectangular table of reals.
#[derive(Clone, Debug, Serialize)]
pub struct OutputTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: Meta,
}

impl OutputTable {
    pub fn new(columns: &[&str], density: impl Into<String>, tol: f64) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Meta { density: density.into(), tol },
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "ragged output row");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_real(*v))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_reals() {
        let mut t = OutputTable::new(&["x", "y"], "uniform", 1e-10);
        t.push(vec![0.1, 1.0 / 3.0]);
        t.push(vec![-2.5e-300, f64::NAN]);
        let s = t.render(Format::Csv).unwrap();
        assert!(!s.contains('\r'));
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x,y");
        let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
        assert!(lines[2].ends_with(",NaN"));
    }

    #[test]
    fn json_schema() {
        let mut t = OutputTable::new(&["t", "f"], "cheb-u", 1e-10);
        t.push(vec![1.0, 1.0]);
        let v: serde_json::Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["columns"][1], "f");
        assert_eq!(v["rows"][0][0], 1.0);
        assert_eq!(v["meta"]["density"], "cheb-u");
        assert_eq!(v["meta"]["tol"], 1e-10);
    }
}
