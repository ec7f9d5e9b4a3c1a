//! On-disk result cache. Reports are stored as JSON wrapped with the
//! SHA-256 of their payload; modules go through the FFMX writer of the
//! core crate. Every write lands in a temporary file or directory first
//! and is renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use blockmorita_core::modrep::{header_of, save_module, GModule};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const DEFAULT_CACHE_DIR: &str = ".blockmorita-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    root: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    digest: String,
    payload: Value,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn payload_digest(v: &Value) -> String {
    sha256_hex(
        serde_json::to_string(v)
            .expect("json value serialises")
            .as_bytes(),
    )
}

/// Content key for a job: kind, canonical parameters, seed, field and the
/// tool version.
pub fn job_key(kind: &str, params: &Value, seed: u64, field_e: Option<u32>) -> String {
    let canon = serde_json::json!({
        "kind": kind,
        "params": params,
        "seed": seed,
        "fieldE": field_e,
        "version": env!("CARGO_PKG_VERSION"),
    });
    payload_digest(&canon)
}

impl Cache {
    pub fn disabled() -> Cache {
        Cache { root: None }
    }

    pub fn at(root: impl Into<PathBuf>) -> Cache {
        Cache {
            root: Some(root.into()),
        }
    }

    /// `$BLOCKMORITA_CACHE`, or the default directory.
    pub fn from_env() -> Cache {
        let dir = std::env::var_os("BLOCKMORITA_CACHE").map(PathBuf::from);
        Cache::at(dir.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)))
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn report_path(&self, key: &str) -> Option<PathBuf> {
        self.root
            .as_ref()
            .map(|r| r.join("reports").join(format!("{key}.json")))
    }

    /// The cached payload for `key`. Corrupt entries are removed with a
    /// warning and reported as missing.
    pub fn load(&self, key: &str) -> Option<Value> {
        let path = self.report_path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        let entry: Option<Entry> = serde_json::from_str(&text).ok();
        match entry {
            Some(e) if e.key == key && e.digest == payload_digest(&e.payload) => Some(e.payload),
            _ => {
                log::warn!("discarding corrupt cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    /// Stores `payload` under `key`. Failures are logged, not fatal.
    pub fn store(&self, key: &str, payload: &Value) {
        let Some(path) = self.report_path(key) else {
            return;
        };
        let entry = Entry {
            key: key.to_string(),
            digest: payload_digest(payload),
            payload: payload.clone(),
        };
        if let Err(e) = write_atomic(
            &path,
            &serde_json::to_vec_pretty(&entry).expect("entry serialises"),
        ) {
            log::warn!("cache write failed for {}: {e}", path.display());
        }
    }

    /// Writes a module below `modules/`; returns its directory.
    pub fn store_module(&self, v: &GModule) -> Option<PathBuf> {
        let root = self.root.as_ref()?.join("modules");
        match store_module_atomic(v, &root) {
            Ok(p) => Some(p),
            Err(e) => {
                log::warn!(
                    "cache write failed for a module of dimension {}: {e}",
                    v.dim()
                );
                None
            }
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn store_module_atomic(v: &GModule, root: &Path) -> blockmorita_core::Result<PathBuf> {
    fs::create_dir_all(root)?;
    let target = root.join(format!("{}.gmod", header_of(v)?.digest()));
    if target.is_dir() {
        return Ok(target);
    }
    let staging = tempfile::Builder::new()
        .prefix(".staging")
        .tempdir_in(root)?;
    let written = save_module(v, staging.path())?;
    match fs::rename(&written, &target) {
        Ok(()) => Ok(target),
        // another writer got there first with identical content
        Err(_) if target.is_dir() => Ok(target),
        Err(e) => Err(e.into()),
    }
}
