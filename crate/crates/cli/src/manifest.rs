use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one invocation: enough to rerun it and to check its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub tool: &'static str,
    pub version: &'static str,
    pub elapsed_seconds: f64,
    pub exit_code: i32,
    pub outputs: BTreeMap<String, String>,
}

pub struct Recorder {
    command: String,
    parameters: BTreeMap<String, serde_json::Value>,
    outputs: Vec<PathBuf>,
    start: Instant,
}

impl Recorder {
    pub fn new(command: &str) -> Self {
        Recorder {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), v);
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn finish(self, exit_code: i32) -> Result<RunManifest> {
        let mut outputs = BTreeMap::new();
        for p in &self.outputs {
            let bytes = std::fs::read(p).with_context(|| format!("reading {}", p.display()))?;
            let digest = Sha256::digest(&bytes);
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            outputs.insert(p.display().to_string(), format!("sha256:{hex}"));
        }
        Ok(RunManifest {
            command: self.command,
            parameters: self.parameters,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            exit_code,
            outputs,
        })
    }
}
