//! On-disk cache of coefficient tables.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! "QSER1"  u8 version  u64 key_hash  u64 modulus (0 = exact)  u64 trunc  u64 payload_len
//! payload: trunc + 1 residues as u64, or for exact tables trunc + 1 records
//!          of (u64 byte length, two's-complement bytes)
//! ```
//!
//! Writes go to a temporary file in the cache directory and are renamed
//! into place, so readers never see a partial table.

use std::fs;
use std::hash::Hasher;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use num_bigint::BigInt;
use qser_core::{Ring, Series};
use thiserror::Error;

pub const MAGIC: &[u8; 5] = b"QSER1";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 5 + 1 + 4 * 8;
const EXTENSION: &str = "qser";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("not a cache file (bad magic)")]
    BadMagic,
    #[error("unsupported cache format version {0}")]
    Version(u8),
    #[error("file is truncated or has trailing bytes")]
    Length,
    #[error("payload is malformed: {0}")]
    Payload(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub key_hash: u64,
    pub modulus: u64,
    pub trunc: u64,
    pub payload_len: u64,
}

/// FNV-1a hash of a canonical key string.
pub fn key_hash(key: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(key.as_bytes());
    h.finish()
}

/// Canonical key for the generating function of `R*_ell`.
pub fn rbar_key(ell: u64) -> String {
    format!("rbar:{ell}")
}

fn payload(series: &Series) -> Vec<u8> {
    match series.as_residues() {
        Some(values) => values.iter().flat_map(|v| v.to_le_bytes()).collect(),
        None => {
            let mut out = Vec::new();
            for c in series.as_exact().expect("exact when not residues") {
                let bytes = c.to_signed_bytes_le();
                out.extend_from_slice(&(bytes.len() as u64).to_le_bytes());
                out.extend_from_slice(&bytes);
            }
            out
        }
    }
}

pub fn encode(key_hash: u64, series: &Series) -> Vec<u8> {
    let body = payload(series);
    let mut out = Vec::with_capacity(HEADER_LEN + body.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for field in [key_hash, series.modulus().unwrap_or(0), series.trunc() as u64, body.len() as u64] {
        out.extend_from_slice(&field.to_le_bytes());
    }
    out.extend_from_slice(&body);
    out
}

fn read_u64(bytes: &[u8], at: usize) -> Result<u64, CacheError> {
    bytes
        .get(at..at + 8)
        .map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
        .ok_or(CacheError::Length)
}

pub fn decode_header(bytes: &[u8]) -> Result<Header, CacheError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let version = *bytes.get(5).ok_or(CacheError::Length)?;
    if version != VERSION {
        return Err(CacheError::Version(version));
    }
    Ok(Header {
        key_hash: read_u64(bytes, 6)?,
        modulus: read_u64(bytes, 14)?,
        trunc: read_u64(bytes, 22)?,
        payload_len: read_u64(bytes, 30)?,
    })
}

pub fn decode(bytes: &[u8]) -> Result<(Header, Series), CacheError> {
    let h = decode_header(bytes)?;
    let body = &bytes[HEADER_LEN.min(bytes.len())..];
    if body.len() as u64 != h.payload_len {
        return Err(CacheError::Length);
    }
    let count = usize::try_from(h.trunc).ok().and_then(|t| t.checked_add(1)).ok_or(CacheError::Length)?;
    let series = if h.modulus == 0 {
        let mut coeffs = Vec::with_capacity(count.min(body.len()));
        let mut at = 0usize;
        for _ in 0..count {
            let len = usize::try_from(read_u64(body, at)?).map_err(|_| CacheError::Length)?;
            at += 8;
            let end = at.checked_add(len).filter(|&e| e <= body.len()).ok_or(CacheError::Length)?;
            coeffs.push(BigInt::from_signed_bytes_le(&body[at..end]));
            at = end;
        }
        if at != body.len() {
            return Err(CacheError::Length);
        }
        Series::from_bigints(coeffs, Ring::INTEGERS)
    } else {
        if body.len() as u128 != count as u128 * 8 {
            return Err(CacheError::Length);
        }
        let values = body.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        Series::from_residues(h.modulus, values).map_err(|e| CacheError::Payload(e.to_string()))?
    };
    Ok((h, series))
}

/// One cached table, as listed by `cache info`.
#[derive(Clone, Debug)]
pub struct EntryInfo {
    pub path: PathBuf,
    pub header: Result<Header, String>,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct CoefficientCache {
    dir: PathBuf,
}

impl CoefficientCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(CoefficientCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, key: &str, ring: Ring) -> PathBuf {
        self.dir.join(format!("{:016x}-{}.{EXTENSION}", key_hash(key), ring.modulus().unwrap_or(0)))
    }

    /// A table for `key` over `ring` with at least `trunc` coefficients,
    /// truncated to `trunc`. Unreadable or corrupt files are misses (with a
    /// warning on stderr).
    pub fn get(&self, key: &str, ring: Ring, trunc: usize) -> Option<Series> {
        let path = self.path_for(key, ring);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return None,
            Err(e) => {
                eprintln!("warning: cannot read cache file {}: {e}", path.display());
                return None;
            }
        };
        match decode(&bytes) {
            Ok((h, series)) => {
                let matches = h.key_hash == key_hash(key) && h.modulus == ring.modulus().unwrap_or(0);
                if !matches {
                    eprintln!("warning: cache file {} belongs to another key; ignoring it", path.display());
                    return None;
                }
                (series.trunc() >= trunc).then(|| series.truncate(trunc))
            }
            Err(e) => {
                eprintln!("warning: ignoring corrupt cache file {}: {e}", path.display());
                None
            }
        }
    }

    /// Store `series` under `key`, atomically replacing any previous table.
    pub fn put(&self, key: &str, series: &Series) -> Result<PathBuf, CacheError> {
        let path = self.path_for(key, series.ring());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(&encode(key_hash(key), series)).map_err(io_err(tmp.path()))?;
        tmp.as_file().sync_all().map_err(io_err(&path))?;
        tmp.persist(&path).map_err(|e| CacheError::Io { path: path.clone(), source: e.error })?;
        Ok(path)
    }

    /// Cached table if deep enough, otherwise compute, store and return it.
    pub fn get_or_compute(&self, key: &str, ring: Ring, trunc: usize, compute: impl FnOnce() -> Series) -> Series {
        if let Some(s) = self.get(key, ring, trunc) {
            return s;
        }
        let s = compute();
        if let Err(e) = self.put(key, &s) {
            eprintln!("warning: could not write cache: {e}");
        }
        s
    }

    fn files(&self) -> Result<Vec<PathBuf>, CacheError> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir).map_err(io_err(&self.dir))? {
            let path = entry.map_err(io_err(&self.dir))?.path();
            if path.extension().is_some_and(|e| e == EXTENSION) {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn info(&self) -> Result<Vec<EntryInfo>, CacheError> {
        self.files()?
            .into_iter()
            .map(|path| {
                let bytes = fs::read(&path).map_err(io_err(&path))?;
                let header = decode_header(&bytes).map_err(|e| e.to_string());
                Ok(EntryInfo { path, header, bytes: bytes.len() as u64 })
            })
            .collect()
    }

    /// Delete every cached table; returns how many were removed.
    pub fn clear(&self) -> Result<usize, CacheError> {
        let files = self.files()?;
        for f in &files {
            fs::remove_file(f).map_err(io_err(f))?;
        }
        Ok(files.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache() -> (tempfile::TempDir, CoefficientCache) {
        let dir = tempfile::tempdir().unwrap();
        let c = CoefficientCache::open(dir.path()).unwrap();
        (dir, c)
    }

    #[test]
    fn put_then_get() {
        let (_d, c) = cache();
        let s = qser_core::congruence::rbar_series(6, 500, Ring::modular(8).unwrap());
        c.put("rbar:6", &s).unwrap();
        assert_eq!(c.get("rbar:6", s.ring(), 500), Some(s.clone()));
        assert_eq!(c.get("rbar:6", s.ring(), 100), Some(s.truncate(100)));
        assert_eq!(c.get("rbar:6", s.ring(), 501), None);
        assert_eq!(c.get("rbar:7", s.ring(), 10), None);
        assert_eq!(c.get("rbar:6", Ring::modular(16).unwrap(), 10), None);
    }

    #[test]
    fn exact_tables_round_trip() {
        let (_d, c) = cache();
        let s = qser_core::congruence::rbar_series(3, 300, Ring::INTEGERS).sub(&Series::monomial(7, 1000, 300, Ring::INTEGERS)).unwrap();
        c.put("x", &s).unwrap();
        assert_eq!(c.get("x", Ring::INTEGERS, 300), Some(s));
    }

    #[test]
    fn truncated_file_is_a_miss() {
        let (_d, c) = cache();
        let s = qser_core::congruence::rbar_series(6, 100, Ring::modular(8).unwrap());
        let path = c.put("k", &s).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert_eq!(c.get("k", s.ring(), 10), None);
        fs::write(&path, b"QSER").unwrap();
        assert_eq!(c.get("k", s.ring(), 10), None);
    }

    #[test]
    fn header_fields() {
        let s = Series::from_ints(&[1, 2, 3], Ring::modular(5).unwrap());
        let bytes = encode(42, &s);
        let h = decode_header(&bytes).unwrap();
        assert_eq!(h, Header { key_hash: 42, modulus: 5, trunc: 2, payload_len: 24 });
        assert_eq!(bytes.len(), HEADER_LEN + 24);
    }

    #[test]
    fn info_and_clear() {
        let (_d, c) = cache();
        c.put("a", &Series::one(3, Ring::INTEGERS)).unwrap();
        c.put("b", &Series::one(3, Ring::modular(2).unwrap())).unwrap();
        assert_eq!(c.info().unwrap().len(), 2);
        assert_eq!(c.clear().unwrap(), 2);
        assert!(c.info().unwrap().is_empty());
    }
}
