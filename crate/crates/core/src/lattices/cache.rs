//! On-disk cache for expensive vector enumerations.
//!
//! Entries are named by a SHA-256 of (format version, lattice label,
//! operation, bounds) and hold one comma-separated integer vector per line,
//! in the order the computation produced them.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_VERSION: &str = "fbm-cache-1";

#[derive(Clone, Debug)]
pub struct EnumerationCache {
    dir: PathBuf,
}

pub fn cache_key(label: &str, op: &str, bounds: &str) -> String {
    let mut h = Sha256::new();
    for part in [CACHE_VERSION, label, op, bounds] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

pub fn encode_vectors(vectors: &[Vec<i64>]) -> String {
    let mut s = String::new();
    for v in vectors {
        let parts: Vec<String> = v.iter().map(i64::to_string).collect();
        s.push_str(&parts.join(","));
        s.push('\n');
    }
    s
}

pub fn decode_vectors(text: &str) -> Result<Vec<Vec<i64>>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|line| {
            if line.is_empty() {
                return Ok(Vec::new());
            }
            line.split(',')
                .map(|x| x.parse::<i64>().map_err(|e| Error::Input(format!("corrupt cache line {line:?}: {e}"))))
                .collect()
        })
        .collect()
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, label: &str, op: &str, bounds: &str) -> PathBuf {
        self.dir.join(format!("{}.txt", cache_key(label, op, bounds)))
    }

    pub fn load(&self, label: &str, op: &str, bounds: &str) -> Result<Option<Vec<Vec<i64>>>> {
        let path = self.path(label, op, bounds);
        match fs::read_to_string(&path) {
            Ok(text) => {
                let header = header(label, op, bounds);
                match text.strip_prefix(&header) {
                    Some(body) => Ok(Some(decode_vectors(body)?)),
                    None => Ok(None),
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn store(&self, label: &str, op: &str, bounds: &str, vectors: &[Vec<i64>]) -> Result<()> {
        let path = self.path(label, op, bounds);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let mut text = header(label, op, bounds);
        text.push_str(&encode_vectors(vectors));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Returns the cached vectors or computes and stores them. The flag is
    /// true on a cache hit.
    pub fn get_or_compute<F>(&self, label: &str, op: &str, bounds: &str, compute: F) -> Result<(Vec<Vec<i64>>, bool)>
    where
        F: FnOnce() -> Result<Vec<Vec<i64>>>,
    {
        if let Some(v) = self.load(label, op, bounds)? {
            return Ok((v, true));
        }
        let v = compute()?;
        self.store(label, op, bounds, &v)?;
        Ok((v, false))
    }
}

fn header(label: &str, op: &str, bounds: &str) -> String {
    format!("# {CACHE_VERSION} {label} {op} {bounds}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumerationCache::new(dir.path()).unwrap();
        let vs = vec![vec![1, -2, 3], vec![], vec![0]];
        let (a, hit) = cache.get_or_compute("L", "op", "b=1", || Ok(vs.clone())).unwrap();
        assert!(!hit);
        let (b, hit) = cache.get_or_compute("L", "op", "b=1", || unreachable!()).unwrap();
        assert!(hit);
        assert_eq!(a, b);
        assert_eq!(encode_vectors(&a), encode_vectors(&vs));
        assert_ne!(cache_key("L", "op", "b=1"), cache_key("L", "op", "b=2"));
    }
}
