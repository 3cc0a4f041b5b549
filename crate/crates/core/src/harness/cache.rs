//! On-disk cache of assembled operator matrices.
//!
//! One text file per `(source fingerprint, kind, level)`:
//!
//! ```text
//! btlab-matrix v1
//! kind toeplitz
//! source <sha256 of the canonical symbol>
//! level 8
//! provenance exact
//! dim 9
//! checksum <sha256 of the body>
//! ---
//! <re> <im> <re> <im> ...      one row per line
//! ```
//!
//! Files are written to a temporary name and renamed into place, so concurrent
//! writers never expose a half-written entry.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::Result;
use crate::operators::{prequantum_geometric, toeplitz_exact, OperatorKind, OperatorMatrix, Provenance};
use crate::semiclassics::Assembler;
use crate::symbolic::CanonicalSymbol;

/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "BTLAB_CACHE_DIR";

const MAGIC: &str = "btlab-matrix v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("corrupt cache entry {path}: {reason}")]
    Corruption { path: PathBuf, reason: String },
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
}

/// Cache root from [`CACHE_ENV`], else `.btlab-cache` in the working directory.
pub fn default_cache_root() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".btlab-cache"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    /// Entries that failed validation and were recomputed.
    pub corrupt: u64,
    /// Matrices assembled from scratch.
    pub assemblies: u64,
}

pub struct MatrixCache {
    root: PathBuf,
    hits: AtomicU64,
    misses: AtomicU64,
    corrupt: AtomicU64,
    assemblies: AtomicU64,
    locks: Mutex<HashMap<PathBuf, Arc<Mutex<()>>>>,
    warnings: Mutex<Vec<String>>,
}

fn encode_body(entries: &DMatrix<Complex64>) -> String {
    let mut body = String::new();
    for j in 0..entries.nrows() {
        let row: Vec<String> = (0..entries.ncols())
            .map(|k| {
                let c = entries[(j, k)];
                format!("{:.16e} {:.16e}", c.re, c.im)
            })
            .collect();
        body.push_str(&row.join(" "));
        body.push('\n');
    }
    body
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Serialises a matrix in the cache file format.
pub fn encode_matrix(matrix: &OperatorMatrix) -> String {
    let body = encode_body(&matrix.entries);
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "kind {}", matrix.kind.as_str());
    let _ = writeln!(out, "source {}", matrix.source);
    let _ = writeln!(out, "level {}", matrix.level);
    let _ = writeln!(out, "provenance {}", matrix.provenance);
    let _ = writeln!(out, "dim {}", matrix.dim());
    let _ = writeln!(out, "checksum {}", checksum(&body));
    out.push_str("---\n");
    out.push_str(&body);
    out
}

/// Parses a cache file; `path` only labels errors.
pub fn decode_matrix(text: &str, path: &Path) -> std::result::Result<OperatorMatrix, CacheError> {
    let bad = |reason: &str| CacheError::Corruption {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let (header, body) = text.split_once("---\n").ok_or_else(|| bad("missing header separator"))?;
    let mut lines = header.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("bad magic line"));
    }
    let mut fields = HashMap::new();
    for line in lines {
        let (k, v) = line.split_once(' ').ok_or_else(|| bad("malformed header line"))?;
        fields.insert(k, v);
    }
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("missing {k}")));
    if field("checksum")? != checksum(body) {
        return Err(bad("checksum mismatch"));
    }
    let kind = OperatorKind::parse(field("kind")?).ok_or_else(|| bad("unknown kind"))?;
    let provenance = Provenance::parse(field("provenance")?).ok_or_else(|| bad("unknown provenance"))?;
    let level: u32 = field("level")?.parse().map_err(|_| bad("bad level"))?;
    let dim: usize = field("dim")?.parse().map_err(|_| bad("bad dim"))?;
    if dim != level as usize + 1 {
        return Err(bad("dimension does not match level"));
    }
    let nums: Vec<f64> = body
        .split_ascii_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad("unparsable entry"))?;
    if nums.len() != 2 * dim * dim {
        return Err(bad("wrong number of entries"));
    }
    let entries = DMatrix::from_fn(dim, dim, |j, k| {
        let i = 2 * (j * dim + k);
        Complex64::new(nums[i], nums[i + 1])
    });
    Ok(OperatorMatrix {
        level,
        entries,
        provenance,
        kind,
        source: field("source")?.to_string(),
    })
}

impl MatrixCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self {
            root: root.into(),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            corrupt: AtomicU64::new(0),
            assemblies: AtomicU64::new(0),
            locks: Mutex::new(HashMap::new()),
            warnings: Mutex::new(Vec::new()),
        }
    }

    pub fn from_env() -> Self {
        Self::new(default_cache_root())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn entry_path(&self, kind: OperatorKind, source: &str, m: u32) -> PathBuf {
        self.root
            .join("matrices")
            .join(format!("{source}-{}-m{m}.mat", kind.as_str()))
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            corrupt: self.corrupt.load(Ordering::Relaxed),
            assemblies: self.assemblies.load(Ordering::Relaxed),
        }
    }

    pub fn take_warnings(&self) -> Vec<String> {
        std::mem::take(&mut *self.warnings.lock().expect("warning list poisoned"))
    }

    fn warn(&self, msg: String) {
        log::warn!("{msg}");
        self.warnings.lock().expect("warning list poisoned").push(msg);
    }

    pub fn store(&self, matrix: &OperatorMatrix) -> std::result::Result<PathBuf, CacheError> {
        let path = self.entry_path(matrix.kind, &matrix.source, matrix.level);
        let dir = path.parent().expect("entry path has a parent");
        std::fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
            std::process::id()
        ));
        std::fs::write(&tmp, encode_matrix(matrix))?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// `Ok(None)` when absent. Entries whose header disagrees with the key are corrupt.
    pub fn load(
        &self,
        kind: OperatorKind,
        source: &str,
        m: u32,
    ) -> std::result::Result<Option<OperatorMatrix>, CacheError> {
        let path = self.entry_path(kind, source, m);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                return Err(CacheError::Corruption {
                    path,
                    reason: "not valid utf-8".into(),
                })
            }
            Err(e) => return Err(e.into()),
        };
        let matrix = decode_matrix(&text, &path)?;
        if matrix.kind != kind || matrix.source != source || matrix.level != m {
            return Err(CacheError::Corruption {
                path,
                reason: "header does not match the requested key".into(),
            });
        }
        Ok(Some(matrix))
    }

    /// Stores `matrix` and reads it back.
    pub fn roundtrip(&self, matrix: &OperatorMatrix) -> std::result::Result<OperatorMatrix, CacheError> {
        self.store(matrix)?;
        self.load(matrix.kind, &matrix.source, matrix.level)?
            .ok_or_else(|| CacheError::Io(io::Error::new(io::ErrorKind::NotFound, "entry vanished")))
    }

    pub fn clear(&self) -> io::Result<()> {
        match std::fs::remove_dir_all(self.root.join("matrices")) {
            Err(e) if e.kind() != io::ErrorKind::NotFound => Err(e),
            _ => Ok(()),
        }
    }

    fn key_lock(&self, path: PathBuf) -> Arc<Mutex<()>> {
        self.locks
            .lock()
            .expect("lock table poisoned")
            .entry(path)
            .or_default()
            .clone()
    }

    fn get_or_assemble(
        &self,
        kind: OperatorKind,
        f: &CanonicalSymbol,
        m: u32,
        assemble: impl FnOnce() -> Result<OperatorMatrix>,
    ) -> Result<OperatorMatrix> {
        let source = f.fingerprint();
        let lock = self.key_lock(self.entry_path(kind, &source, m));
        let _guard = lock.lock().expect("entry lock poisoned");
        match self.load(kind, &source, m) {
            Ok(Some(hit)) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(hit);
            }
            Ok(None) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
            }
            Err(e @ CacheError::Corruption { .. }) => {
                self.corrupt.fetch_add(1, Ordering::Relaxed);
                self.misses.fetch_add(1, Ordering::Relaxed);
                self.warn(format!("{e}; recomputing"));
            }
            Err(e) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                self.warn(format!("{e}; recomputing"));
            }
        }
        let matrix = assemble()?;
        self.assemblies.fetch_add(1, Ordering::Relaxed);
        if let Err(e) = self.store(&matrix) {
            self.warn(format!("could not write cache entry: {e}"));
        }
        Ok(matrix)
    }
}

impl Assembler for MatrixCache {
    fn toeplitz(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix> {
        self.get_or_assemble(OperatorKind::Toeplitz, f, m, || Ok(toeplitz_exact(f, m)))
    }

    fn prequantum(&self, f: &CanonicalSymbol, m: u32) -> Result<OperatorMatrix> {
        self.get_or_assemble(OperatorKind::Prequantum, f, m, || prequantum_geometric(f, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::random_real_symbol;

    #[test]
    fn roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::new(dir.path());
        let f = random_real_symbol(5, 3).unwrap();
        let t = toeplitz_exact(&f, 7);
        assert_eq!(cache.roundtrip(&t).unwrap(), t);
        let q = prequantum_geometric(&f, 3).unwrap();
        assert_eq!(cache.roundtrip(&q).unwrap(), q);
    }

    #[test]
    fn tampering_is_detected_and_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::new(dir.path());
        let f = CanonicalSymbol::f0();
        let fresh = cache.toeplitz(&f, 4).unwrap();
        let path = cache.entry_path(OperatorKind::Toeplitz, &f.fingerprint(), 4);
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replacen("0.0000000000000000e0", "1.0000000000000000e0", 1)).unwrap();
        assert!(matches!(
            cache.load(OperatorKind::Toeplitz, &f.fingerprint(), 4),
            Err(CacheError::Corruption { .. })
        ));
        assert_eq!(cache.toeplitz(&f, 4).unwrap(), fresh);
        let stats = cache.stats();
        assert_eq!((stats.corrupt, stats.assemblies, stats.hits), (1, 2, 0));
        assert_eq!(cache.toeplitz(&f, 4).unwrap(), fresh);
        assert_eq!(cache.stats().hits, 1);
        assert_eq!(cache.take_warnings().len(), 1);
    }
}
