//! JSON and CSV rendering of reports.
//!
//! JSON output is pretty-printed with object keys in sorted order. CSV output
//! picks one table inside the report (named by a JSON pointer) and flattens
//! nested values into dotted column names.

use std::collections::BTreeSet;

use serde_json::Value;

use crate::args::Format;

pub fn render(value: &Value, format: Format, table: &str) -> Result<String, csv::Error> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => to_csv(value.pointer(table).unwrap_or(value)),
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (k, x) in items.iter().enumerate() {
                flatten(&join(&k.to_string()), x, out);
            }
        }
        Value::Array(items) => {
            let cells: Vec<String> = items.iter().map(leaf).collect();
            out.push((prefix.to_string(), cells.join(" ")));
        }
        other => out.push((prefix.to_string(), leaf(other))),
    }
}

fn to_csv(v: &Value) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut out = Vec::new();
                    flatten("", r, &mut out);
                    out
                })
                .collect();
            let header: BTreeSet<&str> = flat.iter().flatten().map(|(k, _)| k.as_str()).collect();
            w.write_record(&header)?;
            for row in &flat {
                let cells = header.iter().map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, x)| x.as_str()));
                w.write_record(cells)?;
            }
        }
        Value::Array(rows) if rows.iter().all(Value::is_array) => {
            for row in rows {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(leaf).collect();
                w.write_record(&cells)?;
            }
        }
        other => {
            let mut out = Vec::new();
            flatten("", other, &mut out);
            w.write_record(["field", "value"])?;
            for (k, x) in out {
                w.write_record([k, x])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV cells are UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_keys_sorted() {
        let v = json!({"zeta": 1, "alpha": {"b": 2, "a": 1}});
        let s = render(&v, Format::Json, "").unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }

    #[test]
    fn csv_tables() {
        let v = json!({"rows": [{"j": "1/2", "k": "3/2", "x": {"y": 1}}, {"j": "3/2", "k": "1/2"}]});
        assert_eq!(render(&v, Format::Csv, "/rows").unwrap(), "j,k,x.y\n1/2,3/2,1\n3/2,1/2,\n");
        let m = json!([["1", "0"], ["0", "-1/3"]]);
        assert_eq!(render(&m, Format::Csv, "").unwrap(), "1,0\n0,-1/3\n");
        let s = json!({"bound": 0, "labels": ["a", "b"]});
        assert_eq!(render(&s, Format::Csv, "").unwrap(), "field,value\nbound,0\nlabels,a b\n");
    }
}
