//! Column-oriented reports rendered as CSV or JSON with identical fields.

use super::config::Format;
use crate::numeric::{fmt_real, json_real};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i128),
    /// Arbitrary-precision integer, already in decimal.
    Big(String),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Real(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Self::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Self::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&crate::BigCount> for Cell {
    fn from(v: &crate::BigCount) -> Self {
        Self::Big(v.to_string())
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Real(v) => fmt_real(*v),
            Self::Int(v) => v.to_string(),
            Self::Big(s) => s.clone(),
            Self::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
            Self::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Self::Real(v) => json_real(*v),
            Self::Int(v) => v.to_string(),
            Self::Big(s) | Self::Text(s) => json_string(s),
            Self::Bool(b) => b.to_string(),
            Self::Null => "null".into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    pub fn csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// An array of objects keyed by the column names.
    pub fn json(&self) -> String {
        let mut s = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("\n{");
            for (j, (c, v)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{}:{}", json_string(c), v.json()).unwrap();
            }
            s.push('}');
        }
        s.push_str("\n]\n");
        s
    }
}
