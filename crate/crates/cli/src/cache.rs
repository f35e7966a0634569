//! Content-addressed result cache.
//!
//! Entries live in one JSON file per request, named by the SHA-256 of the
//! canonical request key. A file written by another engine version is treated
//! as a miss and overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever payload layouts or engine results change.
pub const VERSION_TAG: &str = concat!("ns2-", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub key: Value,
    pub verified: bool,
    pub payload: Value,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache encoding: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

pub fn digest(key: &Value) -> String {
    hex::encode(Sha256::digest(key.to_string().as_bytes()))
}

impl Cache {
    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    /// Opens (creating if needed) a cache directory. Failure disables the
    /// cache with a warning on stderr.
    pub fn open(dir: Option<PathBuf>) -> Cache {
        let Some(dir) = dir else { return Cache::disabled() };
        match fs::create_dir_all(&dir).and_then(|_| probe_writable(&dir)) {
            Ok(()) => Cache { dir: Some(dir) },
            Err(e) => {
                eprintln!("ns2: warning: cache disabled, {} is not writable: {e}", dir.display());
                Cache::disabled()
            }
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(&self, key: &Value) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", digest(key))))
    }

    /// The stored entry for a key, if one exists with the current version tag.
    pub fn load(&self, key: &Value) -> Option<CacheEntry> {
        let path = self.path(key)?;
        let text = fs::read_to_string(path).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.version == VERSION_TAG && &entry.key == key).then_some(entry)
    }

    /// Writes an entry through a temporary file and an atomic rename.
    pub fn store(&self, key: &Value, payload: &Value, verified: bool) -> Result<(), CacheError> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else { return Ok(()) };
        let entry = CacheEntry { version: VERSION_TAG.to_string(), key: key.clone(), verified, payload: payload.clone() };
        let bytes = serde_json::to_vec(&entry)?;
        let io = |source| CacheError::Io { path: path.clone(), source };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        tmp.write_all(&bytes).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(())
    }
}

fn probe_writable(dir: &Path) -> std::io::Result<()> {
    tempfile::NamedTempFile::new_in(dir).map(drop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roundtrip_and_stale_tags() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(Some(dir.path().to_path_buf()));
        let key = json!({"command": "gram", "m": 2});
        assert!(cache.load(&key).is_none());
        let payload = json!({"rank": 3, "entries": [["1/2"]]});
        cache.store(&key, &payload, true).unwrap();
        let hit = cache.load(&key).unwrap();
        assert_eq!(hit.payload, payload);
        assert!(hit.verified);

        let path = dir.path().join(format!("{}.json", digest(&key)));
        let mut stale: CacheEntry = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        stale.version = "ns2-0.0.0/0".into();
        fs::write(&path, serde_json::to_vec(&stale).unwrap()).unwrap();
        assert!(cache.load(&key).is_none());
        cache.store(&key, &payload, true).unwrap();
        assert!(cache.load(&key).is_some());
    }

    #[test]
    fn unwritable_directory_disables() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain-file");
        fs::write(&file, b"x").unwrap();
        let cache = Cache::open(Some(file.join("sub")));
        assert!(!cache.is_enabled());
        cache.store(&json!(1), &json!(2), true).unwrap();
    }
}
