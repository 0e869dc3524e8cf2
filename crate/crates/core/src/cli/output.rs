//! Report rendering. JSON reports are `{"config": …, "report": …}`; CSV
//! reports start with a `# config: …` comment line followed by a header and
//! one row per record, nested keys joined with dots.

use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use super::{Format, RunConfig};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    report: &'a T,
}

fn flatten_into(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_into(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_owned(), String::new())),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn flatten<T: Serialize>(record: &T) -> Result<Vec<(String, String)>> {
    let value =
        serde_json::to_value(record).map_err(|e| Error::InvalidArgument(format!("unserializable report: {e}")))?;
    let mut out = Vec::new();
    flatten_into("", &value, &mut out);
    Ok(out)
}

fn csv_text<T: Serialize>(config: &RunConfig, rows: &[T]) -> Result<String> {
    let config_json = serde_json::to_string(config).expect("config serializes");
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, row) in rows.iter().enumerate() {
        let cells = flatten(row)?;
        if i == 0 {
            w.write_record(cells.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
        }
        w.write_record(cells.iter().map(|(_, v)| v.as_str())).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv");
    Ok(format!("# config: {config_json}\n{body}"))
}

/// Writes `report` as JSON, or `rows` as CSV, to the configured destination.
pub(super) fn emit<T: Serialize, R: Serialize>(config: &RunConfig, report: &T, rows: &[R]) -> Result<()> {
    let text = match config.format.unwrap_or_default() {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope { config, report }).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv_text(config, rows)?,
    };
    match &config.report {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// Single-record variant of [`emit`].
pub(super) fn emit_one<T: Serialize>(config: &RunConfig, report: &T) -> Result<()> {
    emit(config, report, std::slice::from_ref(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Inner {
        x: f64,
        tag: &'static str,
    }

    #[derive(Serialize)]
    struct Row {
        b: f64,
        a: Inner,
        list: [u8; 2],
        missing: Option<u8>,
    }

    #[test]
    fn csv_flattens_in_field_order() {
        let cfg = RunConfig { seed: Some(3), ..RunConfig::default() };
        let rows = [Row { b: 0.5, a: Inner { x: f64::MAX, tag: "t" }, list: [1, 2], missing: None }];
        let text = csv_text(&cfg, &rows).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# config: {\"seed\":3}"));
        assert_eq!(lines.next(), Some("b,a.x,a.tag,list.0,list.1,missing"));
        assert_eq!(lines.next(), Some("0.5,1.7976931348623157e+308,t,1,2,"));
    }
}
