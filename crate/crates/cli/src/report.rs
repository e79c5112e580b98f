//! Reports are ordered JSON trees; the text form renders the same tree as
//! indented `key: value` lines.

use serde_json::{Map, Value};

/// A finished command: its report and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Map<String, Value>,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render_object(&self.report, 0, &mut out);
        out
    }
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (key, value) in map {
        if let Some(s) = scalar(value) {
            out.push_str(&format!("{pad}{key}: {s}\n"));
            continue;
        }
        out.push_str(&format!("{pad}{key}:\n"));
        match value {
            Value::Object(inner) => render_object(inner, indent + 2, out),
            Value::Array(items) => render_items(items, indent + 2, out),
            _ => unreachable!("scalars handled above"),
        }
    }
}

fn render_items(items: &[Value], indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for item in items {
        let mut body = String::new();
        match item {
            Value::Object(inner) => render_object(inner, indent + 2, &mut body),
            Value::Array(inner) => match scalar(item) {
                Some(s) => body.push_str(&format!("{pad}  {s}\n")),
                None => render_items(inner, indent + 2, &mut body),
            },
            other => body.push_str(&format!("{pad}  {}\n", scalar(other).unwrap_or_default())),
        }
        // the first line carries the list marker
        out.push_str(&pad);
        out.push_str("- ");
        out.push_str(&body[indent + 2..]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_form_keeps_key_order() {
        let Value::Object(report) = json!({
            "command": "scan",
            "zeta": 1,
            "alpha": [1, 2],
            "rows": [{"k": 1, "first": "3"}, {"k": 2, "first": "6"}],
            "nested": {"b": true, "a": null},
        }) else {
            unreachable!()
        };
        let text = Outcome { report, pass: true }.to_text();
        assert_eq!(
            text,
            "command: scan\nzeta: 1\nalpha: [1, 2]\nrows:\n  - k: 1\n    first: 3\n  - k: 2\n    first: 6\nnested:\n  b: true\n  a: none\n"
        );
    }
}
