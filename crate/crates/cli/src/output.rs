//! CSV tables: one header line, every value in 17-significant-digit scientific notation.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_to<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// `d.dddddddddddddddde±XX`: 17 significant digits, signed two-digit exponent.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let v = if v == 0.0 { 0.0 } else { v };
    let s = format!("{v:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// `{"schema": "adc-table/1", "columns": [...], "rows": [[...], ...]}`.
pub fn table_json(table: &Table) -> String {
    let value = serde_json::json!({
        "schema": "adc-table/1",
        "columns": table.header,
        "rows": table.rows,
    });
    serde_json::to_string(&value).expect("finite table values serialize") + "\n"
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(table: &Table, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            table.write_to(io::BufWriter::new(file)).map_err(|e| CliError::io(p, e))
        }
        None => table.write_to(io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e)),
    }
}
