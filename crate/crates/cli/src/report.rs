use std::path::{Path, PathBuf};

use hardy::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Domain(#[from] hardy::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

/// Parses a JSON file, returning the typed value and the raw document for the input echo.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, Value), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let raw: Value = serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })?;
    let typed = serde_json::from_value(raw.clone()).map_err(|source| CliError::Json { path: path.into(), source })?;
    Ok((typed, raw))
}

pub fn cx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn cxs(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|z| cx(*z)).collect())
}

pub fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

/// A machine-readable run report.
#[derive(Debug, Default)]
pub struct Report {
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub flags: Map<String, Value>,
}

impl Report {
    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), v.into());
        self
    }

    pub fn tolerance(&mut self, key: &str, v: f64) -> &mut Self {
        self.tolerances.insert(key.into(), v.into());
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.flags.insert(key.into(), v.into());
        self
    }

    pub fn render(self, command: &str, error: Option<&CliError>) -> Value {
        let mut doc = json!({
            "schema": SCHEMA,
            "command": command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "tolerances": self.tolerances,
            "flags": self.flags,
        });
        if let Some(e) = error {
            doc["error"] = json!({ "message": e.to_string() });
            if let CliError::Domain(hardy::Error::NotConverged { best, n }) = e {
                doc["error"]["best"] = json!(best);
                doc["error"]["n"] = json!(n);
            }
        }
        doc
    }
}
