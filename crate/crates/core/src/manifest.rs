//! Run manifests: a flat `key=value` record written next to each output.
//!
//! A manifest captures the command, every resolved parameter (defaults
//! included), the seed, a SHA-256 digest of each input file and the tool
//! version. Nothing time- or host-dependent is recorded, so rerunning the
//! same manifest reproduces identical outputs and an identical manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    /// `(path as given, sha256 hex)`.
    pub inputs: Vec<(String, String)>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            params: Vec::new(),
            seed: None,
            inputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records `path` with the digest of its current contents.
    pub fn input(mut self, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        self.inputs
            .push((path.display().to_string(), file_digest(&bytes)));
        Ok(self)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        let _ = writeln!(out, "tool_version={}", self.version);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed={seed}");
        }
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k}={v}");
        }
        for (p, digest) in &self.inputs {
            let _ = writeln!(out, "input.{p}=sha256:{digest}");
        }
        out
    }

    /// Parses the output of [`render`](Self::render).
    pub fn parse(text: &str) -> Option<Self> {
        let mut m = RunManifest::new("");
        m.version.clear();
        for line in text.lines().filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once('=')?;
            match k {
                "command" => m.command = v.to_owned(),
                "tool_version" => m.version = v.to_owned(),
                "seed" => m.seed = Some(v.parse().ok()?),
                _ => {
                    if let Some(p) = k.strip_prefix("param.") {
                        m.params.push((p.to_owned(), v.to_owned()));
                    } else {
                        let p = k.strip_prefix("input.")?;
                        let digest = v.strip_prefix("sha256:")?;
                        m.inputs.push((p.to_owned(), digest.to_owned()));
                    }
                }
            }
        }
        Some(m)
    }

    /// Writes the manifest to `<output>.manifest` and returns that path.
    pub fn write_next_to(&self, output: &Path) -> Result<PathBuf> {
        let path = manifest_path(output);
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

pub fn file_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
