//! Record rendering. Every command produces a list of JSON objects; the
//! formats differ only in how those are laid out.

use std::io::Write;

use anyhow::Result;
use serde_json::Value;

use crate::args::Format;

pub struct Sink<'a> {
    pub format: Format,
    timestamp: Option<String>,
    out: &'a mut Vec<u8>,
}

/// Scalar rendering for CSV and text cells; arrays stay compact JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl<'a> Sink<'a> {
    pub fn new(format: Format, with_timestamp: bool, out: &'a mut Vec<u8>) -> Self {
        let timestamp = with_timestamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
        Sink { format, timestamp, out }
    }

    /// One JSON object per line (keys sorted), a CSV table with the given
    /// columns, or an aligned text table.
    pub fn records(&mut self, records: &[Value], columns: &[(&str, &str)]) -> Result<()> {
        match self.format {
            Format::Json => self.json_lines(records),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(columns.iter().map(|(name, _)| *name))?;
                for r in records {
                    w.write_record(columns.iter().map(|(_, key)| cell(&r[*key])))?;
                }
                self.out.extend(w.into_inner()?);
                Ok(())
            }
            Format::Text => {
                self.text_header()?;
                let header: Vec<String> = columns.iter().map(|(name, _)| name.to_string()).collect();
                let rows: Vec<Vec<String>> = records
                    .iter()
                    .map(|r| columns.iter().map(|(_, key)| cell(&r[*key])).collect())
                    .collect();
                self.table(&header, &rows)
            }
        }
    }

    pub fn json_lines(&mut self, records: &[Value]) -> Result<()> {
        for r in records {
            let mut r = r.clone();
            if let (Some(ts), Value::Object(map)) = (&self.timestamp, &mut r) {
                map.insert("generated_at".into(), Value::String(ts.clone()));
            }
            serde_json::to_writer(&mut *self.out, &r)?;
            self.out.push(b'\n');
        }
        Ok(())
    }

    pub fn text_header(&mut self) -> Result<()> {
        if let Some(ts) = &self.timestamp {
            writeln!(self.out, "# generated_at {ts}")?;
        }
        Ok(())
    }

    pub fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    pub fn table(&mut self, header: &[String], rows: &[Vec<String>]) -> Result<()> {
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let render = |row: &[String]| {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        writeln!(self.out, "{}", render(header))?;
        for row in rows {
            writeln!(self.out, "{}", render(row))?;
        }
        Ok(())
    }
}
