//! Content-addressed artifact cache for the large matrices. A cache entry
//! is a payload file plus a sha-256 sidecar; a digest mismatch counts as
//! poisoned and triggers recomputation and overwrite. An unusable cache
//! directory degrades to recomputation with a warning on stderr.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

pub const CACHE_ENV: &str = "MATCHBOUND_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheEvent {
    Hit,
    Miss,
    Poisoned,
    Disabled,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Resolution order: explicit flag, then the MATCHBOUND_CACHE variable,
    /// then a per-user default.
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        let dir = flag
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| {
                std::env::var_os("HOME")
                    .map(|home| Path::new(&home).join(".cache").join("matchbound"))
            })
            .or_else(|| Some(std::env::temp_dir().join("matchbound-cache")));
        Self { dir }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn digest(bytes: &[u8]) -> String {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        format!("{:x}", hasher.finalize())
    }

    /// Returns the artifact bytes for `name`, recomputing on miss or on a
    /// digest mismatch. The returned bytes are always exactly what
    /// `compute` would produce.
    pub fn load_or_store(
        &self,
        name: &str,
        compute: impl FnOnce() -> Result<Vec<u8>>,
    ) -> Result<(Vec<u8>, CacheEvent)> {
        let Some(dir) = &self.dir else {
            return Ok((compute()?, CacheEvent::Disabled));
        };
        let path = dir.join(name);
        let sidecar = dir.join(format!("{name}.sha256"));
        if let (Ok(bytes), Ok(stored)) = (fs::read(&path), fs::read_to_string(&sidecar)) {
            if Self::digest(&bytes) == stored.trim() {
                return Ok((bytes, CacheEvent::Hit));
            }
            let bytes = compute()?;
            self.store(&path, &sidecar, &bytes);
            return Ok((bytes, CacheEvent::Poisoned));
        }
        let bytes = compute()?;
        self.store(&path, &sidecar, &bytes);
        Ok((bytes, CacheEvent::Miss))
    }

    fn store(&self, path: &Path, sidecar: &Path, bytes: &[u8]) {
        let write = || -> std::io::Result<()> {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, bytes)?;
            fs::write(sidecar, Self::digest(bytes))?;
            Ok(())
        };
        if let Err(err) = write() {
            eprintln!(
                "warning: cache at {} is not writable ({err}); recomputing without cache",
                path.display()
            );
        }
    }
}
