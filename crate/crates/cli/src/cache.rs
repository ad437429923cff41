//! On-disk result cache keyed by a SHA-256 of the operation, its parameters
//! and the code version. Entries carry a checksum of their payload.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "SLOPES_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    checksum: String,
    payload: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Stable key: `serde_json` maps are ordered, so equal parameters serialize
/// identically.
pub fn key(op: &str, params: &serde_json::Value) -> String {
    let canonical = serde_json::json!({
        "op": op,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
    });
    sha256_hex(canonical.to_string().as_bytes())
}

pub struct Cache {
    dir: PathBuf,
}

pub enum Lookup {
    Hit(String),
    Miss,
    /// The entry existed but failed validation.
    Corrupt,
}

impl Cache {
    /// `explicit`, else `$SLOPES_CACHE_DIR`, else `$HOME/.cache/slopes`.
    pub fn locate(explicit: Option<&Path>) -> Option<Cache> {
        let dir = match explicit {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os(ENV_VAR) {
                Some(v) if !v.is_empty() => PathBuf::from(v),
                _ => PathBuf::from(std::env::var_os("HOME")?).join(".cache").join("slopes"),
            },
        };
        Some(Cache { dir })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let Ok(text) = fs::read_to_string(self.path(key)) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.checksum == sha256_hex(e.payload.as_bytes()) => Lookup::Hit(e.payload),
            _ => Lookup::Corrupt,
        }
    }

    pub fn put(&self, key: &str, payload: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let e = Entry {
            key: key.to_string(),
            checksum: sha256_hex(payload.as_bytes()),
            payload: payload.to_string(),
        };
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&e)?)?;
        fs::rename(tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_ignore_map_insertion_order() {
        let a = serde_json::json!({"k": 2, "p": 3});
        let mut m = serde_json::Map::new();
        m.insert("p".into(), 3.into());
        m.insert("k".into(), 2.into());
        assert_eq!(key("x", &a), key("x", &serde_json::Value::Object(m)));
        assert_ne!(key("x", &a), key("y", &a));
    }
}
