//! JSON-lines and CSV sinks carrying the same columns.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

enum Sink {
    Json(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

/// Records go to the main output; in CSV mode summaries go to stderr as JSON.
pub struct Output {
    sink: Sink,
    columns: &'static [&'static str],
}

impl Output {
    pub fn open(format: Format, path: Option<&Path>, columns: &'static [&'static str]) -> Result<Self> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let sink = match format {
            Format::Json => Sink::Json(w),
            Format::Csv => {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(columns)?;
                Sink::Csv(Box::new(c))
            }
        };
        Ok(Output { sink, columns })
    }

    pub fn record<T: Serialize>(&mut self, rec: &T) -> Result<()> {
        match &mut self.sink {
            Sink::Json(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")?;
            }
            Sink::Csv(c) => {
                let v = serde_json::to_value(rec)?;
                let row: Vec<String> = self.columns.iter().map(|k| cell(v.get(*k))).collect();
                c.write_record(&row)?;
            }
        }
        Ok(())
    }

    pub fn summary<T: Serialize>(&mut self, summary: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            summary: &'a T,
        }
        let line = serde_json::to_string(&Wrapped { summary })?;
        match &mut self.sink {
            Sink::Json(w) => writeln!(w, "{line}")?,
            Sink::Csv(_) => eprintln!("{line}"),
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        match self.sink {
            Sink::Json(mut w) => w.flush()?,
            Sink::Csv(mut c) => c.flush()?,
        }
        Ok(())
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}
