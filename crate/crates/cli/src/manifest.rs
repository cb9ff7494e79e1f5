//! Run manifests: every file-producing run writes one next to its outputs,
//! with the subcommand, the fully resolved configuration, and the output
//! paths. Replaying a manifest reproduces the outputs byte-identically for
//! the same toolkit version (the manifest's own timestamp is the only thing
//! that differs between runs).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use mixregime::montecarlo::ExperimentConfig;

use crate::{AppError, AppResult};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    #[serde(flatten)]
    pub spec: RunSpec,
    pub outputs: Vec<String>,
}

/// The resolved work a run performed; enough to re-execute it exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum RunSpec {
    FilterTrace {
        tokens: String,
        rho: f64,
        pi_init: f64,
        gamma: f64,
    },
    Sweep {
        kind: String,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pi0: Option<f64>,
    },
    Montecarlo {
        experiment: String,
        workers: usize,
        config: ExperimentConfig,
    },
}

impl RunManifest {
    pub fn new(spec: RunSpec, outputs: Vec<String>) -> Self {
        RunManifest {
            tool: "mixregime".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            spec,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> AppResult<()> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| AppError::Runtime(format!("manifest serialization: {e}")))?;
        fs::write(path, body + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> AppResult<Self> {
        let body = fs::read_to_string(path)?;
        serde_json::from_str(&body)
            .map_err(|e| AppError::Usage(format!("malformed manifest {}: {e}", path.display())))
    }
}

/// Manifest path for a single-file output: `<file>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Emit a CSV either to stdout (no manifest; stdout is the primary output)
/// or to a file with a manifest beside it.
pub fn emit_csv(csv_text: &str, out: Option<&Path>, spec: RunSpec) -> AppResult<()> {
    match out {
        None => {
            print!("{csv_text}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, csv_text)?;
            let manifest = RunManifest::new(spec, vec![path.display().to_string()]);
            manifest.write(&manifest_path_for(path))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}
