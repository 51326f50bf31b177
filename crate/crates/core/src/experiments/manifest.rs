//! Run manifest: config echo, seeds, content hashes and timing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    /// SHA-256 over git blob framing: `"blob <len>\0" ++ content`.
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<usize>,
}

pub fn digest_bytes(path: impl Into<String>, content: &[u8]) -> FileDigest {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    let sha256 = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    FileDigest {
        path: path.into(),
        bytes: content.len() as u64,
        sha256,
        lines: None,
    }
}

pub fn digest_file(path: &Path) -> Result<FileDigest> {
    let content = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(digest_bytes(path.display().to_string(), &content))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Running,
    Complete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub crate_version: String,
    pub status: RunStatus,
    pub seed: u64,
    /// Worker threads used; results do not depend on it.
    pub jobs: usize,
    /// Fully resolved configuration, defaults included.
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_clock_seconds: f64,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, jobs: usize, config: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            status: RunStatus::Running,
            seed,
            jobs,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
            error: None,
            wall_clock_seconds: 0.0,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn git_blob_framing() {
        // `git hash-object --object-format=sha256` of an empty file.
        assert_eq!(
            digest_bytes("x", b"").sha256,
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
