//! On-disk cache of heavy lattice artifacts, keyed by a hash of the catalogue.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use sextic_k3::report::{catalogue_fingerprint, LatticeData, LATTICE_DATA_VERSION};
use sextic_k3::{Error, Result};

pub struct Cache {
    dir: Option<PathBuf>,
    key: String,
}

pub fn catalogue_hash() -> Result<String> {
    Ok(hex::encode(Sha256::digest(catalogue_fingerprint()?.as_bytes())))
}

impl Cache {
    /// `None` disables caching; every artifact is recomputed.
    pub fn open(dir: Option<&Path>) -> Result<Self> {
        let key = catalogue_hash()?;
        let dir = match dir {
            Some(d) => {
                let sub = d.join(&key);
                fs::create_dir_all(&sub)?;
                Some(sub)
            }
            None => None,
        };
        Ok(Cache { dir, key })
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// Reads `name` if present and valid, otherwise computes and stores it.
    pub fn get_or_compute<T, F>(&self, name: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(format!("{}.json", name));
        if let Ok(text) = fs::read_to_string(&path) {
            match serde_json::from_str::<T>(&text) {
                Ok(v) => {
                    log::debug!("cache hit {}", path.display());
                    return Ok(v);
                }
                Err(e) => log::warn!("ignoring unreadable cache entry {}: {}", path.display(), e),
            }
        }
        let v = compute()?;
        let tmp = dir.join(format!("{}.json.tmp", name));
        fs::write(&tmp, serde_json::to_string(&v)?)?;
        fs::rename(&tmp, &path)?;
        log::debug!("cache store {}", path.display());
        Ok(v)
    }

    pub fn lattice_data(&self) -> Result<LatticeData> {
        let d: LatticeData = self.get_or_compute("lattice", LatticeData::compute)?;
        if d.version != LATTICE_DATA_VERSION {
            return Err(Error::Degenerate(format!(
                "cached lattice data has version {}, expected {}",
                d.version, LATTICE_DATA_VERSION
            )));
        }
        Ok(d)
    }
}
