//! Run manifests: the resolved configuration of a command plus a SHA-256
//! digest of every file it wrote.
//!
//! ```text
//! command = agreement
//! version = 0.1.0
//! n = 100
//! seed = 20240917
//! ...
//! output.csv = agreement.csv
//! output.csv.sha256 = 9c1e...
//! ```
//!
//! Passing a manifest back through `--config` replays the run.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(command: &str, config: Vec<(String, String)>) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            outputs: Vec::new(),
        }
    }

    /// Writes `contents` to `path` and records its digest under `name`.
    pub fn write_output(&mut self, name: &str, path: &Path, contents: &[u8]) -> CliResult<()> {
        fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(OutputFile {
            name: name.to_string(),
            path: path.to_path_buf(),
            sha256: sha256_hex(contents),
        });
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut lines = vec![
            format!("command = {}", self.command),
            format!("version = {}", self.version),
        ];
        lines.extend(self.config.iter().map(|(k, v)| format!("{k} = {v}")));
        for out in &self.outputs {
            lines.push(format!("output.{} = {}", out.name, out.path.display()));
            lines.push(format!("output.{}.sha256 = {}", out.name, out.sha256));
        }
        lines.join("\n") + "\n"
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

/// Reads a `key = value` config or manifest for `command`. Manifest
/// bookkeeping keys are dropped; a manifest of another command is rejected.
pub fn read_config(path: &Path, command: &str) -> CliResult<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let pairs = rankeval::formats::parse_key_values(&text)?;
    let mut out = Vec::new();
    for (k, v) in pairs {
        match k.as_str() {
            "command" if v != command => {
                return Err(CliError::Usage(format!(
                    "{} was written by '{v}', not '{command}'",
                    path.display()
                )))
            }
            "command" | "version" => {}
            _ if k.starts_with("output.") => {}
            _ => out.push((k, v)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn render_and_read_back() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::new("agreement", vec![("n".into(), "5".into()), ("seed".into(), "1".into())]);
        m.write_output("csv", &dir.path().join("a.csv"), b"x\n").unwrap();
        let path = dir.path().join("m.txt");
        m.save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("command = agreement\nversion = "));
        assert!(text.contains(&format!("output.csv.sha256 = {}", sha256_hex(b"x\n"))));
        let back = read_config(&path, "agreement").unwrap();
        assert_eq!(back, vec![("n".into(), "5".into()), ("seed".into(), "1".into())]);
        assert!(matches!(read_config(&path, "properties"), Err(CliError::Usage(_))));
    }
}
