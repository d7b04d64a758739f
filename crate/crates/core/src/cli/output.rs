//! CSV and JSON emission with 15 significant digits.

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::numfmt::{fmt_g, round_sig};

/// Rounds every float in `v` to the digits that get printed.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn scalar_cell(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => fmt_g(n.as_f64().expect("float number")),
        }),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Flattens nested objects to dotted keys; arrays of scalars become `;`-joined cells.
pub fn flatten(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(inner, &key, out);
            }
        }
        Value::Array(a) => {
            let cells: Option<Vec<String>> = a.iter().map(scalar_cell).collect();
            let cell = match cells {
                Some(c) => c.join(";"),
                None => serde_json::to_string(v).expect("JSON values always serialize"),
            };
            out.push((prefix.to_string(), cell));
        }
        scalar => out.push((prefix.to_string(), scalar_cell(scalar).expect("scalar"))),
    }
}

/// Rows of one result: one per element of a top-level array, otherwise one.
pub fn result_rows(v: &Value) -> Vec<Vec<(String, String)>> {
    let items: Vec<&Value> = match v {
        Value::Array(a) => a.iter().collect(),
        other => vec![other],
    };
    items
        .into_iter()
        .map(|item| {
            let mut row = Vec::new();
            flatten(item, if item.is_object() { "" } else { "value" }, &mut row);
            row
        })
        .collect()
}

/// Writes rows under the ordered union of their keys, with `trailing` keys moved
/// to the end; missing cells stay empty.
pub fn to_csv(rows: &[Vec<(String, String)>], trailing: &[&str]) -> Result<String> {
    let mut header: Vec<String> = Vec::new();
    for row in rows {
        for (k, _) in row {
            if !header.contains(k) && !trailing.contains(&k.as_str()) {
                header.push(k.clone());
            }
        }
    }
    header.extend(trailing.iter().map(|t| t.to_string()));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameters(format!("CSV write failed: {e}"));
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let record = header.iter().map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or(""));
        w.write_record(record).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameters(format!("CSV flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 cells"))
}

/// Object with keys in insertion order.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
