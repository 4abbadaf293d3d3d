//! Content-addressed result cache. One JSON file per (what, spec), keyed
//! by a SHA-256 of the engine version and the spec.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use polylat::EnsembleSpec;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::json;

pub const ENV_VAR: &str = "POLYLAT_CACHE";
pub const DEFAULT_DIR: &str = ".polylat-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// `POLYLAT_CACHE` wins over `flag`; `None` when disabled.
    pub fn resolve(flag: Option<PathBuf>, disabled: bool) -> Cache {
        if disabled {
            return Cache { dir: None };
        }
        let dir = std::env::var_os(ENV_VAR)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(flag)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { dir: Some(dir) }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(what: &str, spec: &EnsembleSpec) -> String {
        let mut h = Sha256::new();
        h.update(polylat::ENGINE_VERSION.as_bytes());
        h.update(b"\n");
        h.update(what.as_bytes());
        h.update(b"\n");
        h.update(json::spec(spec).to_string().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, what: &str, spec: &EnsembleSpec) -> Option<PathBuf> {
        let k = Cache::key(what, spec);
        self.dir.as_ref().map(|d| d.join(&k[..2]).join(format!("{k}.json")))
    }

    /// A missing or unreadable entry is a miss.
    pub fn get(&self, what: &str, spec: &EnsembleSpec) -> Option<Value> {
        let text = fs::read_to_string(self.path(what, spec)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        (v["engine"] == polylat::ENGINE_VERSION).then_some(v)
    }

    pub fn put(&self, what: &str, spec: &EnsembleSpec, v: &Value) -> std::io::Result<()> {
        match self.path(what, spec) {
            Some(p) => write_atomic(&p, json::render(v).as_bytes()),
            None => Ok(()),
        }
    }
}

/// Writes to a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
