use crate::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

/// Provenance written next to every run's outputs.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub config_sha256: String,
    pub seed: u64,
    pub replicates: usize,
    pub outputs: Vec<String>,
    /// The configuration text exactly as read.
    pub config: &'a str,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl<'a> Manifest<'a> {
    pub fn new(command: &'a str, config: &'a str, seed: u64, replicates: usize) -> Self {
        Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: sha256_hex(config),
            seed,
            replicates,
            outputs: Vec::new(),
            config,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}
