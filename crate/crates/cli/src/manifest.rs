use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::CliResult;

/// Record written next to every output file so the run can be repeated from it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub tool_version: &'static str,
    pub seed: Option<u64>,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub outputs: Vec<PathBuf>,
}

pub fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

impl RunManifest {
    pub fn start(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            command: command.into(),
            argv: std::env::args().collect(),
            config,
            tool_version: env!("CARGO_PKG_VERSION"),
            seed,
            started_unix_s: now_unix(),
            finished_unix_s: 0.0,
            outputs: Vec::new(),
        }
    }

    /// Path of the manifest belonging to `output`.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn finish(mut self, outputs: Vec<PathBuf>) -> CliResult {
        let Some(first) = outputs.first() else {
            return Ok(());
        };
        let path = Self::path_for(first);
        self.outputs = outputs;
        self.finished_unix_s = now_unix();
        std::fs::write(&path, serde_json::to_string_pretty(&self)?)?;
        Ok(())
    }
}

/// Serialises `value` with a `manifest` field naming the manifest of `manifest_for`.
pub fn json_with_manifest<T: Serialize>(value: &T, manifest_for: &Path) -> CliResult<String> {
    let mut v = serde_json::to_value(value)?;
    if let serde_json::Value::Object(map) = &mut v {
        let m = RunManifest::path_for(manifest_for);
        let name = m.file_name().map_or(m.clone(), PathBuf::from);
        map.insert("manifest".into(), serde_json::Value::String(name.display().to_string()));
    }
    Ok(serde_json::to_string_pretty(&v)?)
}
