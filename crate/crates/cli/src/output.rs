use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

pub struct Table {
    pub name: &'static str,
    pub header: &'static str,
    pub rows: Vec<Vec<String>>,
}

/// What a subcommand produced, before rendering.
#[derive(Default)]
pub struct Output {
    pub tables: Vec<Table>,
    /// Trailing `#` lines in CSV; mirrored under `"notes"` in JSON.
    pub notes: Vec<String>,
    pub json: Map<String, Value>,
    /// Set when a verification failed; the output is still written.
    pub failure: Option<String>,
}

impl Output {
    pub fn table(&mut self, name: &'static str, header: &'static str, rows: Vec<Vec<String>>) {
        self.tables.push(Table { name, header, rows });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.json.insert(key.to_string(), value.into());
    }

    pub fn render_csv(&self, config: &ExperimentConfig) -> String {
        let mut s = format!("# config: {}\n", config.to_json());
        let many = self.tables.len() > 1;
        for (i, t) in self.tables.iter().enumerate() {
            if many {
                if i > 0 {
                    s.push('\n');
                }
                s.push_str(&format!("# table: {}\n", t.name));
            }
            s.push_str(t.header);
            s.push('\n');
            for row in &t.rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
        }
        for n in &self.notes {
            s.push_str("# ");
            s.push_str(n);
            s.push('\n');
        }
        s
    }

    pub fn render_json(&self, config: &ExperimentConfig) -> String {
        let mut obj = Map::new();
        obj.insert(
            "config".into(),
            serde_json::to_value(config).expect("config serializes"),
        );
        for (k, v) in &self.json {
            obj.insert(k.clone(), v.clone());
        }
        if !self.notes.is_empty() {
            obj.insert("notes".into(), self.notes.clone().into());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json renders");
        s.push('\n');
        s
    }
}
