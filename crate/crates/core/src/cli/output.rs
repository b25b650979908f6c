use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance of one command invocation. Every data file carries its
/// `manifest_id`, which hashes everything except the timestamp and output
/// paths, so equal ids mean equal data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub manifest_id: String,
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, params: Value, seed: u64) -> Self {
        let tool_version = env!("CARGO_PKG_VERSION").to_owned();
        let identity = serde_json::json!({
            "command": command,
            "params": params,
            "seed": seed,
            "tool_version": tool_version,
        });
        let digest = Sha256::digest(identity.to_string().as_bytes());
        Self {
            schema_version: SCHEMA_VERSION,
            manifest_id: hex::encode(digest)[..16].to_owned(),
            command: command.to_owned(),
            params,
            seed,
            tool_version,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_text(path, &pretty(&serde_json::to_value(self)?)?)
    }
}

/// `<dir>/<stem>.manifest.json` next to a data file.
pub fn manifest_path_for(data: &Path) -> PathBuf {
    let stem = data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    data.with_file_name(format!("{stem}.manifest.json"))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn pretty(v: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Single JSON object with `schema_version` and `manifest_id` added.
pub fn envelope<T: Serialize>(body: &T, manifest_id: &str) -> Result<Value, CliError> {
    let mut map = match serde_json::to_value(body)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("data".into(), other);
            m
        }
    };
    map.insert("schema_version".into(), SCHEMA_VERSION.into());
    map.insert("manifest_id".into(), manifest_id.into());
    Ok(Value::Object(map))
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    }
}

/// RFC 4180 CSV. Columns come from the first row, plus `manifest_id`.
pub fn to_csv(rows: &[Value], manifest_id: &str) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    };
    let mut cols = header.clone();
    cols.push("manifest_id".into());
    w.write_record(&cols)?;
    for row in rows {
        let mut rec: Vec<String> = header
            .iter()
            .map(|k| row.get(k).map(cell).unwrap_or_default())
            .collect();
        rec.push(manifest_id.to_owned());
        w.write_record(&rec)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn manifest_id_ignores_time() {
        let a = RunManifest::new("x", json!({"a": 1}), 3);
        let mut b = RunManifest::new("x", json!({"a": 1}), 3);
        b.timestamp += 100;
        assert_eq!(a.manifest_id, b.manifest_id);
        assert_ne!(a.manifest_id, RunManifest::new("x", json!({"a": 2}), 3).manifest_id);
        assert_ne!(a.manifest_id, RunManifest::new("x", json!({"a": 1}), 4).manifest_id);
    }

    #[test]
    fn csv_quotes_and_references_manifest() {
        let rows = vec![json!({"a": "x,y", "b": 1.5, "c": null})];
        let text = to_csv(&rows, "abc").unwrap();
        assert_eq!(text, "a,b,c,manifest_id\n\"x,y\",1.5,,abc\n");
    }

    #[test]
    fn manifest_paths() {
        assert_eq!(
            manifest_path_for(Path::new("out/key.json")),
            PathBuf::from("out/key.manifest.json")
        );
    }
}
