use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// Report schema version, bumped on incompatible JSON changes.
pub const SCHEMA: u32 = 1;

pub struct Report {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn new(ok: bool, body: impl Serialize, text: String) -> Self {
        let json = serde_json::json!({
            "schema": SCHEMA,
            "ok": ok,
            "report": serde_json::to_value(body).expect("reports serialize"),
        });
        Report { ok, json, text }
    }

    pub fn json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("reports serialize")
    }

    pub fn write(&self, dir: &Path, stem: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.json_string() + "\n")?;
        std::fs::write(dir.join(format!("{stem}.txt")), &self.text)
    }
}

/// Accumulates `key: value` lines.
#[derive(Default)]
pub struct Text(pub String);

impl Text {
    pub fn line(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.0, "{key}: {value}").expect("writing to a string");
        self
    }

    pub fn raw(&mut self, s: impl std::fmt::Display) -> &mut Self {
        writeln!(self.0, "{s}").expect("writing to a string");
        self
    }
}
