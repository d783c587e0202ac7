//! Content-addressed on-disk cache of computed blocks.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::homology::{ComplexBlock, HomologyRow};

pub const CACHE_ENV: &str = "GRAPHHOM_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".graphhom-cache";

/// Bumped whenever a change could alter cached bases, matrices or dims.
pub const CODE_VERSION: &str = "graphhom-blocks-1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    /// The block description the key was hashed from.
    pub block: String,
    pub bases: BTreeMap<i64, Vec<String>>,
    /// Matrices in the sparse text format of the exact module.
    pub matrices: BTreeMap<i64, String>,
    pub rows: Vec<HomologyRow>,
}

impl CacheEntry {
    pub fn new(key: String, block: String, b: &ComplexBlock, rows: Vec<HomologyRow>) -> Self {
        CacheEntry {
            key,
            block,
            bases: b
                .bases
                .iter()
                .map(|(d, v)| (*d, v.iter().map(|g| g.to_string()).collect()))
                .collect(),
            matrices: b.matrices.iter().map(|(d, m)| (*d, m.to_sms())).collect(),
            rows,
        }
    }
}

pub fn cache_key(description: &str) -> String {
    let mut h = Sha256::new();
    h.update(CODE_VERSION.as_bytes());
    h.update(b"\n");
    h.update(description.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `--cache-dir`, else `$GRAPHHOM_CACHE`, else `.graphhom-cache/`.
    pub fn open(dir: Option<PathBuf>) -> io::Result<Cache> {
        let dir = dir
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A readable entry under `key`. Unreadable or mismatched files count as
    /// misses.
    pub fn load(&self, key: &str) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: CacheEntry = serde_json::from_str(&text).ok()?;
        (e.key == key).then_some(e)
    }

    /// Writes through a temporary file and a rename, so readers in other
    /// processes never see a partial entry. An existing entry is left alone.
    pub fn store(&self, entry: &CacheEntry) -> io::Result<()> {
        let path = self.path(&entry.key);
        if path.exists() {
            return Ok(());
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, entry)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => Ok(()),
            Err(e) if path.exists() => {
                drop(e);
                Ok(())
            }
            Err(e) => Err(e.error),
        }
    }
}

/// Writes `contents` to `path` atomically.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
