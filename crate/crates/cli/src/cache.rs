//! On-disk result cache keyed by a canonical request string.
//!
//! Entries are keyed by a hash of (engine version, canonical request);
//! hits must be byte-identical to recomputation, which the test suite spot
//! checks. Writes go through a temporary file and an atomic rename, so
//! concurrent invocations never observe partial entries.

use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;

const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("NCCHERN_CACHE") {
        return PathBuf::from(dir);
    }
    if let Ok(xdg) = std::env::var("XDG_CACHE_HOME") {
        return PathBuf::from(xdg).join("ncchern");
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("ncchern");
    }
    PathBuf::from(".ncchern-cache")
}

pub fn key_for(request: &str) -> String {
    let mut h = Sha256::new();
    h.update(ENGINE_VERSION.as_bytes());
    h.update([0]);
    h.update(request.as_bytes());
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn lookup(request: &str) -> Option<String> {
    let path = cache_dir().join(key_for(request));
    fs::read_to_string(path).ok()
}

/// Best effort: cache failures never fail the command.
pub fn store(request: &str, value: &str) {
    let dir = cache_dir();
    if fs::create_dir_all(&dir).is_err() {
        return;
    }
    let key = key_for(request);
    let tmp = dir.join(format!("{key}.tmp.{}", std::process::id()));
    if fs::write(&tmp, value).is_ok() {
        let _ = fs::rename(&tmp, dir.join(key));
    }
}
