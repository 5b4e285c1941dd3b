//! Run manifests: the resolved configuration and arguments of a finished
//! command, written as a JSON sidecar next to each output. The embedded
//! `config` object is itself a valid `--config` input, so any run can be
//! reproduced from its manifest.

use std::collections::BTreeMap;
use std::path::Path;

use roomflock_core::io::{write_atomic, FileError, RunConfigFile};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Fully resolved configuration (defaults materialized, overrides applied).
    pub config: RunConfigFile,
    /// Command-specific resolved arguments.
    pub args: serde_json::Value,
    pub seed: u64,
    pub workers: usize,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub wall_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, config: RunConfigFile, seed: u64, workers: usize) -> Self {
        Self {
            tool: "roomflock",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            args: serde_json::Value::Null,
            seed,
            workers,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn input(&mut self, role: &str, path: &Path) {
        self.inputs
            .insert(role.to_string(), path.display().to_string());
    }

    pub fn output(&mut self, role: &str, path: &Path) {
        self.outputs
            .insert(role.to_string(), path.display().to_string());
    }

    /// Writes `<out>.manifest.json` next to the primary output.
    pub fn write_sidecar(&self, primary_out: &Path) -> Result<(), FileError> {
        let path = sidecar_path(primary_out);
        write_atomic(&path, |w| {
            serde_json::to_writer_pretty(&mut *w, self)?;
            use std::io::Write;
            writeln!(w)?;
            Ok(())
        })
    }
}

pub fn sidecar_path(primary_out: &Path) -> std::path::PathBuf {
    std::path::PathBuf::from(format!("{}.manifest.json", primary_out.display()))
}
