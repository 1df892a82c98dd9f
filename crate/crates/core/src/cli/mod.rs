//! Sweep, figure and self-check drivers behind the `gouy` binary.
//!
//! Everything here produces a [`Dataset`] (or a list of them) that is
//! rendered as CSV or JSON; nothing writes images.

mod commands;
mod figures;
mod scenario;
mod sweep;

pub use commands::{
    default_oracle_battery, extrema_table, fisher_table, oracle_check, wigner_table, OracleReport,
    OracleRow, ORACLE_FAIL_TOL,
};
pub use figures::{emit_figure, figure_datasets, FigureId, FigureOptions};
pub use scenario::{parse_scenario, Quantity, Scenario, SweepAxis, SweepVariable};
pub use sweep::run_sweep;

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVALID_INPUT: i32 = 1;
    pub const CHECK_FAILED: i32 = 2;
    pub const IO_FAILURE: i32 = 3;
}

/// Exit status for an error that aborted a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => exit::IO_FAILURE,
        _ => exit::INVALID_INPUT,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

/// A table with fixed column order plus an echo of what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// File stem used by the figure emitter.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub echo: Value,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<String>, echo: Value) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            echo,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column, `None` for missing cells.
    pub fn numbers(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Num(v) => Some(v),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Header row, `,` separators, 17 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(v) => write_number(&mut out, *v),
                    Cell::Text(s) => out.push_str(s),
                    Cell::Missing => {}
                }
            }
            out.push('\n');
        }
        out
    }

    /// `{"scenario": echo, "rows": [{column: value, ...}, ...]}`.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(v) => serde_json::Number::from_f64(*v)
                            .map(Value::Number)
                            .unwrap_or(Value::Null),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Missing => Value::Null,
                    };
                    obj.insert(name.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("scenario".into(), self.echo.clone());
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialise");
        s.push('\n');
        s
    }

    pub fn write_to(&self, format: Format, mut sink: impl Write) -> Result<()> {
        sink.write_all(self.render(format).as_bytes())?;
        Ok(())
    }
}

fn write_number(out: &mut String, v: f64) {
    if v.is_finite() {
        let _ = write!(out, "{v:.16e}");
    } else {
        let _ = write!(out, "{v}");
    }
}

/// Join error kinds for a flag cell; never contains a comma.
pub(crate) fn flag_cell(flags: &[String]) -> Cell {
    if flags.is_empty() {
        Cell::Missing
    } else {
        Cell::Text(flags.join(";"))
    }
}
