//! Rendering record lists as JSON, CSV or an aligned table.

use crate::cli::Format;
use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::io::Write;

pub fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            if i < width.len() {
                width[i] = width[i].max(c.chars().count());
            }
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(width[i] - c.chars().count() + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn csv_table(text: &str) -> CliResult<String> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut all = Vec::new();
    for rec in rdr.records() {
        all.push(rec?.iter().map(str::to_string).collect::<Vec<_>>());
    }
    if all.is_empty() {
        return Ok(String::new());
    }
    let header = all.remove(0);
    Ok(table(&header, &all))
}

/// Writes `rows` to `out` in the requested format.
pub fn emit<T: Serialize>(out: &mut dyn Write, rows: &[T], format: Format) -> CliResult<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Csv => out.write_all(to_csv(rows)?.as_bytes())?,
        Format::Table => out.write_all(csv_table(&to_csv(rows)?)?.as_bytes())?,
    }
    Ok(())
}

/// A single record: pretty JSON, or `key  value` lines for table and CSV.
pub fn emit_one<T: Serialize>(out: &mut dyn Write, record: &T, format: Format) -> CliResult<()> {
    if format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, record)?;
        writeln!(out)?;
        return Ok(());
    }
    let value = serde_json::to_value(record)?;
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"])?;
        for (k, v) in &rows {
            w.write_record([k, v])?;
        }
        out.write_all(&w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)?;
    } else {
        let rows: Vec<Vec<String>> = rows.into_iter().map(|(k, v)| vec![k, v]).collect();
        out.write_all(table(&["key".into(), "value".into()], &rows).as_bytes())?;
    }
    Ok(())
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    use serde_json::Value;
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        x => out.push((prefix.to_string(), scalar(x))),
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Null => "-".into(),
        x => x.to_string(),
    }
}
