//! Every run writes a manifest recording the resolved configuration, the
//! binary version, and a SHA-256 checksum per artifact, so identical
//! configs are verifiably bit-identical.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    pub outputs: Vec<ManifestEntry>,
}

/// Collects artifacts for one run and writes `manifest.json` at the end.
pub struct Run {
    out_dir: PathBuf,
    command: String,
    config: serde_json::Value,
    outputs: Vec<ManifestEntry>,
}

impl Run {
    pub fn new(out_dir: &Path, command: &str, config: serde_json::Value) -> Result<Self> {
        fs::create_dir_all(out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
        Ok(Run {
            out_dir: out_dir.to_path_buf(),
            command: command.to_string(),
            config,
            outputs: Vec::new(),
        })
    }

    /// Write one artifact under the run directory and record its checksum.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let dest = self.out_dir.join(name);
        if let Some(parent) = dest.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&dest, contents).with_context(|| format!("writing {}", dest.display()))?;
        self.outputs.push(ManifestEntry {
            file: name.to_string(),
            sha256: hex_sha256(contents.as_bytes()),
        });
        Ok(dest)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Finalize: emit manifest.json (sorted by file name for determinism).
    pub fn finish(mut self) -> Result<()> {
        self.outputs.sort_by(|a, b| a.file.cmp(&b.file));
        let manifest = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config,
            outputs: self.outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let dest = self.out_dir.join("manifest.json");
        fs::write(&dest, text).with_context(|| format!("writing {}", dest.display()))
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
