//! Persistent derivative cache: one JSON document per key, checksummed,
//! written atomically (temp file + rename). A checksum mismatch quarantines
//! the file and reads as a miss.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use super::{DerivVector, EvalMethod, FunctionKind};
use crate::ball::BallComplex;
use crate::error::Result;

pub const CACHE_DIR_ENV: &str = "ETALAB_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub point: String,
    pub function: FunctionKind,
    pub method: EvalMethod,
    pub order: usize,
    pub digits: u32,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    key: CacheKey,
    point: String,
    values: Vec<String>,
    checksum: String,
}

fn payload_checksum(key: &CacheKey, point: &str, values: &[String]) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(key).unwrap());
    h.update(point.as_bytes());
    for v in values {
        h.update(v.as_bytes());
    }
    hex_string(&h.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: PathBuf) -> Result<DiskCache> {
        std::fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    /// Resolve the directory from ETALAB_CACHE_DIR, or a default under the
    /// system temp dir.
    pub fn resolve_dir() -> PathBuf {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) => PathBuf::from(d),
            None => std::env::temp_dir().join("etalab-cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_for(&self, key: &CacheKey) -> PathBuf {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(key).unwrap());
        self.dir.join(format!("{}.json", hex_string(&h.finalize())))
    }

    /// Exact-key lookup. Corrupt files are quarantined and read as a miss.
    pub fn get(&self, key: &CacheKey) -> Result<Option<DerivVector>> {
        let path = self.file_for(key);
        let data = match std::fs::read_to_string(&path) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let parsed: CacheFile = match serde_json::from_str(&data) {
            Ok(p) => p,
            Err(_) => {
                self.quarantine(&path);
                return Ok(None);
            }
        };
        if parsed.key != *key
            || payload_checksum(&parsed.key, &parsed.point, &parsed.values) != parsed.checksum
        {
            self.quarantine(&path);
            return Ok(None);
        }
        let point = match BallComplex::from_wire(&parsed.point) {
            Ok(p) => p,
            Err(_) => {
                self.quarantine(&path);
                return Ok(None);
            }
        };
        let mut values = Vec::with_capacity(parsed.values.len());
        for v in &parsed.values {
            match BallComplex::from_wire(v) {
                Ok(b) => values.push(b),
                Err(_) => {
                    self.quarantine(&path);
                    return Ok(None);
                }
            }
        }
        match DerivVector::new(point, values, key.function, key.method, key.digits) {
            Ok(v) if v.values.len() == key.order + 1 => Ok(Some(v)),
            _ => {
                self.quarantine(&path);
                Ok(None)
            }
        }
    }

    pub fn put(&self, key: &CacheKey, v: &DerivVector) -> Result<()> {
        let point = v.point.to_wire();
        let values: Vec<String> = v.values.iter().map(|b| b.to_wire()).collect();
        let checksum = payload_checksum(key, &point, &values);
        let file = CacheFile { key: key.clone(), point, values, checksum };
        let body = serde_json::to_string(&file).unwrap();
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{}", std::process::id(), n));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, self.file_for(key))?;
        Ok(())
    }

    fn quarantine(&self, path: &Path) {
        let mut q = path.to_path_buf();
        q.set_extension("corrupt");
        let _ = std::fs::rename(path, q);
    }

    /// Number of entries and total bytes.
    pub fn info(&self) -> Result<(usize, u64)> {
        let mut count = 0usize;
        let mut bytes = 0u64;
        for entry in std::fs::read_dir(&self.dir)? {
            let entry = entry?;
            if entry.path().extension().and_then(|e| e.to_str()) == Some("json") {
                count += 1;
                bytes += entry.metadata()?.len();
            }
        }
        Ok((count, bytes))
    }

    pub fn clear(&self) -> Result<usize> {
        let mut removed = 0usize;
        for entry in std::fs::read_dir(&self.dir)? {
            let entry = entry?;
            let p = entry.path();
            let ext = p.extension().and_then(|e| e.to_str());
            if matches!(ext, Some("json") | Some("corrupt")) {
                std::fs::remove_file(&p)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
