//! Report rendering: a `#`-commented metadata header, a CSV (or JSON)
//! payload, and a trailing checksum line.
//!
//! The checksum covers the payload bytes only, never the metadata, so two
//! runs with identical configuration and seed produce identical checksums
//! even though the embedded wall-clock differs.

use sha2::{Digest, Sha256};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Csv,
    Json,
}

pub enum Payload {
    /// Column header plus data rows.
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    /// Pre-formatted text (matrix dumps).
    Text(String),
}

pub struct Report {
    meta: Vec<(String, String)>,
    payload: Payload,
}

impl Report {
    pub fn table(columns: &[&str]) -> Self {
        Report {
            meta: Vec::new(),
            payload: Payload::Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows: Vec::new(),
            },
        }
    }

    pub fn text(text: String) -> Self {
        Report {
            meta: Vec::new(),
            payload: Payload::Text(text),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        match &mut self.payload {
            Payload::Table { columns, rows } => {
                assert_eq!(cells.len(), columns.len(), "row width mismatch");
                rows.push(cells);
            }
            Payload::Text(_) => panic!("text reports take no rows"),
        }
        self
    }

    fn payload_string(&self) -> String {
        match &self.payload {
            Payload::Table { columns, rows } => {
                let mut out = columns.join(",");
                out.push('\n');
                for row in rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Payload::Text(text) => text.clone(),
        }
    }

    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.payload_string().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        format!("sha256:{hex}")
    }

    pub fn render(&self, format: Format, wall_clock_ms: u128) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    out.push_str(&format!("# {k}: {v}\n"));
                }
                out.push_str(&format!("# wall_clock_ms: {wall_clock_ms}\n"));
                out.push_str(&self.payload_string());
                out.push_str(&format!("# checksum: {}\n", self.checksum()));
                out
            }
            Format::Json => {
                let meta: serde_json::Map<String, serde_json::Value> = self
                    .meta
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                let mut doc = serde_json::Map::new();
                doc.insert("meta".into(), meta.into());
                doc.insert("wall_clock_ms".into(), (wall_clock_ms as u64).into());
                match &self.payload {
                    Payload::Table { columns, rows } => {
                        doc.insert(
                            "columns".into(),
                            columns
                                .iter()
                                .map(|c| serde_json::Value::String(c.clone()))
                                .collect::<Vec<_>>()
                                .into(),
                        );
                        doc.insert(
                            "rows".into(),
                            rows.iter()
                                .map(|row| {
                                    row.iter()
                                        .map(|c| serde_json::Value::String(c.clone()))
                                        .collect::<Vec<_>>()
                                        .into()
                                })
                                .collect::<Vec<serde_json::Value>>()
                                .into(),
                        );
                    }
                    Payload::Text(text) => {
                        doc.insert("text".into(), serde_json::Value::String(text.clone()));
                    }
                }
                doc.insert("checksum".into(), self.checksum().into());
                let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
                    .expect("report serialization");
                out.push('\n');
                out
            }
        }
    }
}
