use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::group::FiniteGroup;

/// Identity of one cached computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    /// Degree and sorted generator images.
    pub group: String,
    pub computation: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(g: &FiniteGroup, computation: impl Into<String>) -> Self {
        let pg = g.perm_group();
        let mut gens: Vec<Vec<u32>> = pg.generators().iter().map(|p| p.images().to_vec()).collect();
        gens.sort();
        let body: Vec<String> =
            gens.iter().map(|v| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
        Self {
            group: format!("{}:{}", pg.degree(), body.join(";")),
            computation: computation.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for part in [&self.group, &self.computation, &self.version] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry<T> {
    key: CacheKey,
    payload: T,
}

/// One JSON file per entry, named by the key hash.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        Self { dir: Some(dir.as_ref().to_path_buf()) }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key.hash())))
    }

    /// A miss on absence, unreadable or corrupt files, and key mismatches.
    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let entry: CacheEntry<T> = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.payload)
    }

    /// Best effort: write failures leave the cache unchanged.
    pub fn put<T: Serialize>(&self, key: &CacheKey, payload: &T) {
        let (Some(dir), Some(path)) = (&self.dir, self.path(key)) else {
            return;
        };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let Ok(text) = serde_json::to_string(&CacheEntry { key: key.clone(), payload }) else {
            return;
        };
        let tmp = path.with_extension("tmp");
        if fs::write(&tmp, text).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    pub fn get_or_compute<T, E>(&self, key: &CacheKey, f: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = f()?;
        self.put(key, &v);
        Ok(v)
    }
}
