use serde::Serialize;
use serde_json::Value;

use crate::args::OutputFormat;
use crate::{CliError, CliResult};

fn internal(e: impl ToString) -> CliError {
    CliError { code: 1, message: e.to_string() }
}

/// Renders a report. `table` names the array shown as rows in CSV output.
pub fn render<T: Serialize>(report: &T, format: OutputFormat, table: Option<&str>) -> CliResult<String> {
    let value = serde_json::to_value(report).map_err(internal)?;
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&value).map_err(internal)? + "\n"),
        OutputFormat::Csv => csv_table(&value, table),
        OutputFormat::Text => {
            let mut out = String::new();
            text(&value, 0, &mut out);
            Ok(out)
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Scalars of an object, with one level of nested objects inlined.
fn flat_row(obj: &serde_json::Map<String, Value>) -> Vec<(String, String)> {
    let mut row = Vec::new();
    for (k, v) in obj {
        if let Some(s) = scalar(v) {
            row.push((k.clone(), s));
        } else if let Value::Object(inner) = v {
            row.extend(inner.iter().filter_map(|(ik, iv)| scalar(iv).map(|s| (ik.clone(), s))));
        } else if let Value::Array(items) = v {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            if let Some(parts) = parts {
                row.push((k.clone(), parts.join(";")));
            }
        }
    }
    row
}

fn csv_table(value: &Value, table: Option<&str>) -> CliResult<String> {
    let Value::Object(top) = value else {
        return Err(internal("report is not an object"));
    };
    let rows: Vec<Vec<(String, String)>> = match table.and_then(|t| top.get(t)) {
        Some(Value::Array(items)) => items
            .iter()
            .map(|it| match it {
                Value::Object(o) => flat_row(o),
                other => vec![("value".into(), scalar(other).unwrap_or_default())],
            })
            .collect(),
        _ => vec![flat_row(top)],
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.write_record(first.iter().map(|(k, _)| k)).map_err(internal)?;
        for r in &rows {
            w.write_record(r.iter().map(|(_, v)| v)).map_err(internal)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(internal)?).map_err(internal)
}

fn text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let Value::Object(obj) = value else {
        out.push_str(&format!("{pad}{}\n", scalar(value).unwrap_or_default()));
        return;
    };
    let width = obj.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in obj {
        match v {
            Value::Object(inner) if inner.is_empty() => {}
            Value::Object(_) => {
                out.push_str(&format!("{pad}{k}:\n"));
                text(v, indent + 1, out);
            }
            Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
                let parts: Vec<String> = items.iter().filter_map(scalar).collect();
                out.push_str(&format!("{pad}{k:<width$}  [{}]\n", parts.join(", ")));
            }
            Value::Array(items) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for (i, item) in items.iter().enumerate() {
                    let Value::Object(o) = item else { continue };
                    let cells: Vec<String> = flat_row(o).into_iter().map(|(ik, iv)| format!("{ik}={iv}")).collect();
                    out.push_str(&format!("{pad}  {:>3}  {}\n", i + 1, cells.join("  ")));
                }
            }
            _ => out.push_str(&format!("{pad}{k:<width$}  {}\n", scalar(v).unwrap_or_default())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_uses_named_table() {
        let v = json!({"k": 3, "entries": [{"weight": 0.5, "permutation": "()"}, {"weight": 0.5, "permutation": "(2 4)"}]});
        let out = render(&v, OutputFormat::Csv, Some("entries")).unwrap();
        assert_eq!(out, "weight,permutation\n0.5,()\n0.5,(2 4)\n");
        let single = render(&json!({"a": 1, "extras": {"b": 2}, "p": [1, 2]}), OutputFormat::Csv, None).unwrap();
        assert_eq!(single, "a,b,p\n1,2,1;2\n");
    }

    #[test]
    fn text_layout() {
        let out = render(&json!({"eta": 1.5, "name": "x"}), OutputFormat::Text, None).unwrap();
        assert_eq!(out, "eta   1.5\nname  x\n");
    }
}
