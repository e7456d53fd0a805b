//! Audit reports: a JSON document and a flattened CSV table.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = concat!("contraction-report/1 ", env!("CARGO_PKG_VERSION"));

/// Violations listed per result; the full count is in the constants.
pub const MAX_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditResult {
    pub name: String,
    pub status: Status,
    pub constants: Map<String, Value>,
    pub violations: Vec<Value>,
    /// `None` unless timing was requested.
    pub millis: Option<u64>,
}

impl AuditResult {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        AuditResult {
            name: name.into(),
            status,
            constants: Map::new(),
            violations: Vec::new(),
            millis: None,
        }
    }

    pub fn constant(mut self, key: &str, value: impl Serialize) -> Self {
        self.constants.insert(key.to_string(), to_value(value));
        self
    }

    /// Adds every field of a serializable struct as a constant.
    pub fn constants_from(mut self, value: impl Serialize) -> Self {
        match to_value(value) {
            Value::Object(m) => self.constants.extend(m),
            other => {
                self.constants.insert("value".into(), other);
            }
        }
        self
    }

    /// Lists violations and fails the result when there are any.
    pub fn violations<T: Serialize>(mut self, vs: &[T]) -> Self {
        self.constants.insert("violation_count".into(), vs.len().into());
        self.violations = vs.iter().take(MAX_VIOLATIONS).map(to_value).collect();
        if !vs.is_empty() {
            self.status = Status::Fail;
        }
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub version: &'static str,
    pub config: Value,
    pub results: Vec<AuditResult>,
}

impl AuditReport {
    pub fn new(config: Value) -> Self {
        AuditReport {
            version: SCHEMA_VERSION,
            config,
            results: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per result; constants flattened with dotted keys, columns
    /// in sorted order.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<(String, String)>> = self
            .results
            .iter()
            .map(|r| {
                let mut cells = Vec::new();
                for (k, v) in &r.constants {
                    flatten(k, v, &mut cells);
                }
                cells
            })
            .collect();
        let keys: BTreeSet<&str> = rows.iter().flatten().map(|(k, _)| k.as_str()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["name", "status", "violations", "millis"];
        header.extend(keys.iter().copied());
        w.write_record(&header).expect("in-memory csv");
        for (r, cells) in self.results.iter().zip(&rows) {
            let mut rec = vec![
                r.name.clone(),
                to_value(r.status).as_str().unwrap_or_default().to_string(),
                r.violations.len().to_string(),
                r.millis.map(|m| m.to_string()).unwrap_or_default(),
            ];
            for k in &keys {
                rec.push(
                    cells
                        .iter()
                        .find(|(c, _)| c == k)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default(),
                );
            }
            w.write_record(&rec).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_and_aligns() {
        let mut rep = AuditReport::new(Value::Null);
        rep.results.push(
            AuditResult::new("a", Status::Pass)
                .constant("x", 1)
                .constant("nested", serde_json::json!({"k": [1, 2], "s": "t"})),
        );
        rep.results
            .push(AuditResult::new("b", Status::Pass).constant("y", 2.5).violations(&[(0, 1)]));
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,status,violations,millis,nested.k,nested.s,violation_count,x,y");
        assert_eq!(lines[1], "a,pass,0,,\"[1,2]\",t,,1,");
        assert_eq!(lines[2], "b,fail,1,,,,1,,2.5");
        assert!(rep.failed());
    }

    #[test]
    fn status_names() {
        assert_eq!(to_value(Status::NotApplicable), Value::from("not-applicable"));
    }
}
