use std::fmt::Display;

use serde_json::{Map, Value};

enum Text {
    Inline(String),
    Block(Vec<String>),
    Section(Report),
}

/// An ordered report rendered either as indented `key: value` text or as a
/// JSON object with the same keys.
#[derive(Default)]
pub struct Report {
    entries: Vec<(String, Value, Text)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, key: &str, json: Value, text: Text) -> &mut Self {
        self.entries.push((key.to_string(), json, text));
        self
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        let s = value.to_string();
        self.push(key, Value::String(s.clone()), Text::Inline(s))
    }

    pub fn num(&mut self, key: &str, value: u64) -> &mut Self {
        self.push(key, Value::from(value), Text::Inline(value.to_string()))
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        let s = if value { "yes" } else { "no" };
        self.push(key, Value::Bool(value), Text::Inline(s.into()))
    }

    pub fn list<T: Display>(&mut self, key: &str, items: &[T]) -> &mut Self {
        let items: Vec<String> = items.iter().map(ToString::to_string).collect();
        let text = format!("[{}]", items.join(", "));
        self.push(key, Value::from(items), Text::Inline(text))
    }

    pub fn block(&mut self, key: &str, lines: Vec<String>) -> &mut Self {
        self.push(key, Value::from(lines.clone()), Text::Block(lines))
    }

    /// A block in text with a structured JSON value.
    pub fn custom(&mut self, key: &str, json: Value, lines: Vec<String>) -> &mut Self {
        self.push(key, json, Text::Block(lines))
    }

    pub fn section(&mut self, key: &str, report: Report) -> &mut Self {
        let json = report.json();
        self.push(key, json, Text::Section(report))
    }

    pub fn json(&self) -> Value {
        let mut map = Map::new();
        for (k, v, _) in &self.entries {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let pad = " ".repeat(indent);
        for (k, _, t) in &self.entries {
            match t {
                Text::Inline(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                Text::Block(lines) if lines.is_empty() => out.push_str(&format!("{pad}{k}: (empty)\n")),
                Text::Block(lines) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    for l in lines {
                        out.push_str(&format!("{pad}  {l}\n"));
                    }
                }
                Text::Section(r) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    r.write_text(out, indent + 2);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree_on_keys() {
        let mut inner = Report::new();
        inner.kv("det", -1).list("factors", &[2, 4]);
        let mut r = Report::new();
        r.flag("ok", true)
            .num("count", 3)
            .block("rows", vec!["0 1".into(), "1 1".into()])
            .block("none", vec![])
            .section("a", inner);
        assert_eq!(
            r.text(),
            "ok: yes\ncount: 3\nrows:\n  0 1\n  1 1\nnone: (empty)\na:\n  det: -1\n  factors: [2, 4]\n"
        );
        let j = r.json();
        assert_eq!(j["ok"], Value::Bool(true));
        assert_eq!(j["a"]["factors"][1], Value::from("4"));
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["ok", "count", "rows", "none", "a"]);
    }
}
