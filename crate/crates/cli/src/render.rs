use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "gfib-1";

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A CSV view of a payload. `header` is `None` for bare matrices.
pub struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Table {
            header: Some(header.iter().map(|s| s.to_string()).collect()),
            rows: Vec::new(),
        }
    }

    pub fn headless(rows: impl IntoIterator<Item = Vec<String>>) -> Self {
        Table {
            header: None,
            rows: rows.into_iter().collect(),
        }
    }

    pub fn row(mut self, row: Vec<String>) -> Self {
        self.rows.push(row);
        self
    }

    pub fn rows(mut self, rows: impl IntoIterator<Item = Vec<String>>) -> Self {
        self.rows.extend(rows);
        self
    }
}

#[derive(Serialize)]
struct Record<'a> {
    schema_version: &'static str,
    command: &'a str,
    params: &'a serde_json::Value,
    payload: &'a serde_json::Value,
}

/// One command result, renderable in every format.
pub struct Output {
    command: &'static str,
    params: serde_json::Value,
    payload: serde_json::Value,
    text: String,
    table: Table,
}

impl Output {
    pub fn new(
        command: &'static str,
        params: serde_json::Value,
        payload: serde_json::Value,
        text: String,
        table: Table,
    ) -> Self {
        Output {
            command,
            params,
            payload,
            text,
            table,
        }
    }

    pub fn header(&self) -> Option<&[String]> {
        self.table.header.as_deref()
    }

    /// Writes the record; `with_header = false` suppresses a CSV header
    /// already emitted by an earlier record of the same stream.
    pub fn write(&self, format: Format, with_header: bool, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Text => writeln!(out, "{}", self.text),
            Format::Json => {
                let record = Record {
                    schema_version: SCHEMA_VERSION,
                    command: self.command,
                    params: &self.params,
                    payload: &self.payload,
                };
                serde_json::to_writer(&mut *out, &record)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .flexible(true)
                    .terminator(csv::Terminator::CRLF)
                    .from_writer(&mut *out);
                if let Some(h) = self.table.header.as_ref().filter(|_| with_header) {
                    w.write_record(h)?;
                }
                for r in &self.table.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
        }
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
