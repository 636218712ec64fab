//! Plain-text view of a JSON report. Keys keep their JSON order; nothing is
//! added or dropped, so the text carries the same facts as the JSON.

use serde_json::{Map, Value};

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => fields(map, 0, &mut out),
        other => line(&mut out, 0, &scalar(other)),
    }
    out
}

fn line(out: &mut String, depth: usize, text: &str) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(text);
    out.push('\n');
}

/// `(u, v, k)` for `{"unit", "val", "precision"}` objects, `key value` for
/// single-entry objects such as `{"at_least": 20}`.
fn element(map: &Map<String, Value>) -> Option<String> {
    if map.len() == 1 {
        let (k, v) = map.iter().next()?;
        return (!v.is_object() && !v.is_array()).then(|| format!("{k} {}", scalar(v)));
    }
    if map.len() != 3 {
        return None;
    }
    let (u, v, k) = (map.get("unit")?, map.get("val")?, map.get("precision")?);
    Some(format!("({}, {}, {})", scalar(u), scalar(v), scalar(k)))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(m) => element(m).unwrap_or_else(|| v.to_string()),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Values that fit on one line: scalars, elements, and arrays of those.
fn is_inline(v: &Value) -> bool {
    match v {
        Value::Object(m) => element(m).is_some() || m.is_empty(),
        Value::Array(items) => items.iter().all(|i| match i {
            Value::Object(m) => element(m).is_some(),
            Value::Array(_) => false,
            _ => true,
        }),
        _ => true,
    }
}

fn fields(map: &Map<String, Value>, depth: usize, out: &mut String) {
    for (key, v) in map {
        if is_inline(v) {
            line(out, depth, &format!("{key}: {}", scalar(v)));
            continue;
        }
        line(out, depth, &format!("{key}:"));
        nested(v, depth + 1, out);
    }
}

fn nested(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) => fields(map, depth, out),
        Value::Array(items) => {
            for item in items {
                if is_inline(item) {
                    line(out, depth, &format!("- {}", scalar(item)));
                } else {
                    line(out, depth, "-");
                    nested(item, depth + 1, out);
                }
            }
        }
        other => line(out, depth, &scalar(other)),
    }
}
