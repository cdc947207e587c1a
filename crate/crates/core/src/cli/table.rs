//! Tables indexed by `n` (rows) and `k` (columns).

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Human,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Value {
        value: String,
        exact: bool,
    },
    /// Not computed, rendered as `*`.
    Missing,
}

impl Cell {
    pub fn exact(v: impl ToString) -> Self {
        Cell::Value {
            value: v.to_string(),
            exact: true,
        }
    }

    pub fn value(&self) -> Option<&str> {
        match self {
            Cell::Value { value, .. } => Some(value),
            Cell::Missing => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub n: u64,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub rows: Vec<Row>,
    /// JSON values are decimal strings rather than numbers.
    pub string_values: bool,
    /// Counting method attached to every JSON record.
    pub method: Option<String>,
    /// Extra lines printed under the human-readable table.
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct Record<'a> {
    n: u64,
    k: usize,
    value: serde_json::Value,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<&'a str>,
}

impl Table {
    pub fn new(title: impl Into<String>) -> Self {
        Table {
            title: title.into(),
            rows: Vec::new(),
            string_values: false,
            method: None,
            notes: Vec::new(),
        }
    }

    pub fn k_max(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).max().unwrap_or(0)
    }

    pub fn has_missing(&self) -> bool {
        self.rows.iter().any(|r| r.cells.contains(&Cell::Missing))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.csv(),
            OutputFormat::Json => self.json(),
            OutputFormat::Human => self.human(),
        }
    }

    pub fn csv(&self) -> String {
        let k_max = self.k_max();
        let mut out = String::from("n\\k");
        for k in 1..=k_max {
            write!(out, ",{k}").unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.n).unwrap();
            for k in 0..k_max {
                out.push(',');
                match row.cells.get(k) {
                    Some(Cell::Value { value, .. }) => out.push_str(value),
                    Some(Cell::Missing) => out.push('*'),
                    None => {}
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let mut records = Vec::new();
        for row in &self.rows {
            for (i, cell) in row.cells.iter().enumerate() {
                let (value, exact) = match cell {
                    Cell::Value { value, exact } => {
                        let v = if self.string_values {
                            serde_json::Value::String(value.clone())
                        } else {
                            value
                                .parse::<u64>()
                                .map(serde_json::Value::from)
                                .unwrap_or_else(|_| serde_json::Value::String(value.clone()))
                        };
                        (v, *exact)
                    }
                    Cell::Missing => (serde_json::Value::Null, false),
                };
                records.push(Record {
                    n: row.n,
                    k: i + 1,
                    value,
                    exact,
                    method: self.method.as_deref(),
                });
            }
        }
        let mut s = serde_json::to_string_pretty(&records).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let k_max = self.k_max();
        let text = |c: Option<&Cell>| -> String {
            match c {
                Some(Cell::Value { value, exact: true }) => value.clone(),
                Some(Cell::Value { value, exact: false }) => format!("~{value}"),
                Some(Cell::Missing) => "*".into(),
                None => String::new(),
            }
        };
        let mut widths = vec!["n\\k".len()];
        for k in 0..k_max {
            let w = self.rows.iter().map(|r| text(r.cells.get(k)).len()).max().unwrap_or(0);
            widths.push(w.max((k + 1).to_string().len()));
        }
        widths[0] = widths[0].max(self.rows.iter().map(|r| r.n.to_string().len()).max().unwrap_or(0));
        let mut out = format!("{}\n", self.title);
        write!(out, "{:>w$}", "n\\k", w = widths[0]).unwrap();
        for k in 0..k_max {
            write!(out, "  {:>w$}", k + 1, w = widths[k + 1]).unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{:>w$}", row.n, w = widths[0]).unwrap();
            for k in 0..k_max {
                write!(out, "  {:>w$}", text(row.cells.get(k)), w = widths[k + 1]).unwrap();
            }
            out.push('\n');
        }
        if self
            .rows
            .iter()
            .flat_map(|r| &r.cells)
            .any(|c| matches!(c, Cell::Value { exact: false, .. }))
        {
            out.push_str("~ marks Monte Carlo counts (coefficients modulo 2^61 - 1)\n");
        }
        if self.has_missing() {
            out.push_str("* marks entries not computed within the memory budget\n");
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}
