use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::CliError;

/// A column-oriented result; cells are numbers except for integer indices.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Copy)]
pub enum Cell {
    Int(usize),
    Num(f64),
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(&self.header).map_err(CliError::io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| match c {
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(x) => fmt_num(*x),
                    }))
                    .map_err(CliError::io)?;
                }
                w.flush().map_err(CliError::io)?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, c)| {
                                let v = match c {
                                    Cell::Int(i) => Value::from(*i),
                                    // non-finite values become null
                                    Cell::Num(x) => Value::from(*x),
                                };
                                (k.clone(), v)
                            })
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows).map_err(CliError::io)?;
                writeln!(out).map_err(CliError::io)?;
            }
        }
        Ok(())
    }
}
