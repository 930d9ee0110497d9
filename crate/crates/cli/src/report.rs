use serde_json::{Map, Value};

/// A command's result as an ordered key-value tree.
#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    result: Map<String, Value>,
    conventions: Option<Map<String, Value>>,
    failure: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            result: Map::new(),
            conventions: None,
            failure: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Report {
        self.result.insert(key.to_string(), value.into());
        self
    }

    pub fn convention(&mut self, key: &str, value: impl Into<Value>) -> &mut Report {
        self.conventions
            .get_or_insert_with(Map::new)
            .insert(key.to_string(), value.into());
        self
    }

    /// Marks the report as a mathematical failure; it is still printed.
    pub fn fail(&mut self, message: impl Into<String>) -> &mut Report {
        self.failure = Some(message.into());
        self
    }

    pub fn failure_message(&self) -> Option<String> {
        self.failure.clone()
    }

    pub fn result_value(&self) -> Value {
        Value::Object(self.result.clone())
    }

    pub fn is_failure(&self) -> bool {
        self.failure.is_some()
    }

    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), self.command.clone().into());
        top.insert(
            "status".into(),
            if self.failure.is_some() {
                "failure"
            } else {
                "ok"
            }
            .into(),
        );
        if let Some(msg) = &self.failure {
            top.insert("error".into(), msg.clone().into());
        }
        top.insert("result".into(), Value::Object(self.result.clone()));
        if let Some(c) = &self.conventions {
            top.insert("conventions".into(), Value::Object(c.clone()));
        }
        Value::Object(top)
    }

    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(top) = self.to_value() {
            render_map(&top, 0, &mut out);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            Some(format!(
                "[{}]",
                items
                    .iter()
                    .map(|i| scalar(i).unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        }
        _ => None,
    }
}

fn render_map(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for (k, v) in m {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                render_value(v, indent + 1, out);
            }
        }
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => render_map(m, indent, out),
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(item, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_rendering() {
        let mut r = Report::new("demo");
        r.set("mu", 3)
            .set("basis", json!(["1", "y"]))
            .set("table", json!([{"word": "a", "tau": "6*y*z"}]));
        r.convention("jet_order", 8);
        assert_eq!(
            r.to_text(),
            "command: demo\nstatus: ok\nresult:\n  mu: 3\n  basis: [1, y]\n  table:\n    -\n      word: a\n      tau: 6*y*z\nconventions:\n  jet_order: 8\n"
        );
    }

    #[test]
    fn structured_round_trip() {
        let mut r = Report::new("demo");
        r.set("value", "-1/2").fail("not stabilized");
        let text = r.to_structured();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
        assert_eq!(parsed["status"], "failure");
    }
}
