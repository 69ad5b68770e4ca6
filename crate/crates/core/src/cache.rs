//! On-disk cache of prime and character tables.
//!
//! The directory comes from `LFLAB_CACHE_DIR`, falling back to
//! `$XDG_CACHE_HOME/lflab` and then `~/.cache/lflab`. Each entry is a JSON
//! envelope holding a format version, the generation parameters and a SHA-256
//! digest of the payload. Entries whose version or digest do not match are
//! rebuilt and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::character::DirichletCharacter;
use crate::primes::PrimeTable;
use crate::{Error, Result};

pub const CACHE_ENV: &str = "LFLAB_CACHE_DIR";
pub const CACHE_VERSION: u32 = 1;

/// Cache directory resolved from the environment.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(dir).join("lflab");
    }
    let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    home.join(".cache").join("lflab")
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The stored entry was stale or corrupt and has been replaced.
    Rebuilt,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    version: u32,
    kind: String,
    params: String,
    sha256: String,
    payload: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn from_env() -> Self {
        Self::new(default_cache_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Identifier of an entry: hash of kind, version and generation parameters.
    pub fn key(kind: &str, params: &str) -> String {
        sha256_hex(format!("{kind}|v{CACHE_VERSION}|{params}").as_bytes())[..16].to_string()
    }

    fn path(&self, kind: &str, params: &str) -> PathBuf {
        self.dir.join(format!("{kind}-v{CACHE_VERSION}-{}.json", Self::key(kind, params)))
    }

    fn load<T: Serialize + DeserializeOwned>(&self, kind: &str, params: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, params)).ok()?;
        let env: Envelope<T> = serde_json::from_str(&text).ok()?;
        if env.version != CACHE_VERSION || env.kind != kind || env.params != params {
            return None;
        }
        let digest = sha256_hex(&serde_json::to_vec(&env.payload).ok()?);
        (digest == env.sha256).then_some(env.payload)
    }

    fn store<T: Serialize>(&self, kind: &str, params: &str, payload: &T) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let bytes = serde_json::to_vec(payload).map_err(|e| Error::Cache(e.to_string()))?;
        let env = Envelope { version: CACHE_VERSION, kind: kind.to_string(), params: params.to_string(), sha256: sha256_hex(&bytes), payload };
        let text = serde_json::to_string(&env).map_err(|e| Error::Cache(e.to_string()))?;
        let path = self.path(kind, params);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    fn get_or_build<T: Serialize + DeserializeOwned>(
        &self,
        kind: &str,
        params: &str,
        valid: impl Fn(&T) -> bool,
        build: impl FnOnce() -> Result<T>,
    ) -> Result<(T, CacheStatus)> {
        let existed = self.path(kind, params).exists();
        if let Some(v) = self.load::<T>(kind, params).filter(|v| valid(v)) {
            return Ok((v, CacheStatus::Hit));
        }
        let v = build()?;
        self.store(kind, params, &v)?;
        Ok((v, if existed { CacheStatus::Rebuilt } else { CacheStatus::Miss }))
    }

    /// Prime table up to `limit`, keyed by `limit`.
    pub fn prime_table(&self, limit: u64) -> Result<(PrimeTable, CacheStatus)> {
        let (primes, status) = self.get_or_build(
            "primes",
            &format!("limit={limit}"),
            |p: &Vec<u64>| p.windows(2).all(|w| w[0] < w[1]) && p.last().is_none_or(|&x| x <= limit),
            || Ok(PrimeTable::new(limit).primes().to_vec()),
        )?;
        Ok((PrimeTable::from_parts(limit, primes)?, status))
    }

    /// All Dirichlet characters modulo `q` in Conrey order, keyed by `q`.
    pub fn characters(&self, q: u64) -> Result<(Vec<DirichletCharacter>, CacheStatus)> {
        self.get_or_build("characters", &format!("q={q}"), |c: &Vec<DirichletCharacter>| c.iter().all(|x| x.modulus() == q), || Ok(DirichletCharacter::all(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let (t, s) = cache.prime_table(1000).unwrap();
        assert_eq!(s, CacheStatus::Miss);
        assert_eq!(t.primes().len(), 168);
        let (t2, s2) = cache.prime_table(1000).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(t, t2);

        let path = cache.path("primes", "limit=1000");
        let text = fs::read_to_string(&path).unwrap().replace("997", "999");
        fs::write(&path, text).unwrap();
        let (t3, s3) = cache.prime_table(1000).unwrap();
        assert_eq!(s3, CacheStatus::Rebuilt);
        assert_eq!(t3, t);

        let (chars, _) = cache.characters(5).unwrap();
        assert_eq!(chars.len(), 4);
        assert_eq!(cache.characters(5).unwrap().1, CacheStatus::Hit);
    }
}
