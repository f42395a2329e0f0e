//! Sidecar describing how a data file was produced.
//!
//! Data files carry no timestamps so that reruns with the same flags are
//! byte-identical; everything run-specific goes into `<file>.manifest.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub started: String,
    pub finished: String,
    pub threads: usize,
    pub seed: Option<u64>,
    pub data_file: String,
    pub version: &'static str,
}

pub struct ManifestBuilder {
    command: String,
    parameters: BTreeMap<String, String>,
    started: DateTime<Utc>,
    seed: Option<u64>,
}

impl ManifestBuilder {
    pub fn start(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            started: Utc::now(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Write `contents` to `path` and the manifest next to it.
    pub fn write(&self, path: &Path, contents: &str) -> Result<PathBuf> {
        fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
        let manifest = RunManifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            started: self.started.to_rfc3339_opts(SecondsFormat::Millis, true),
            finished: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            threads: rayon::current_num_threads(),
            seed: self.seed,
            data_file: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            version: env!("CARGO_PKG_VERSION"),
        };
        let side = sidecar_path(path);
        let json = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&side, json).with_context(|| format!("writing {}", side.display()))?;
        Ok(side)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
