//! Content-hashed cache of computed artifacts under `<dir>/<hash>.json`.

use crate::output::to_json;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io;
use std::path::{Path, PathBuf};

const ENTRY_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry<R, P> {
    format_version: u32,
    request: Option<R>,
    payload: P,
    payload_sha256: String,
}

/// Hex SHA-256 of the canonical serialization of `value`.
pub fn content_hash<T: Serialize + ?Sized>(value: &T) -> String {
    hex::encode(Sha256::digest(to_json(value).as_bytes()))
}

pub enum Lookup<R, P> {
    Hit(P),
    Missing,
    /// Unusable entry; the request is kept when it still hashes to the id.
    Corrupt { request: Option<R>, reason: String },
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    fn write<R: Serialize, P: Serialize>(&self, id: &str, request: Option<&R>, payload: &P) -> io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            format_version: ENTRY_FORMAT_VERSION,
            request,
            payload,
            payload_sha256: content_hash(payload),
        };
        std::fs::write(self.path(id), to_json(&entry))
    }

    /// Store `payload` under the hash of the request that produced it.
    pub fn store<R: Serialize, P: Serialize>(&self, request: &R, payload: &P) -> io::Result<String> {
        let id = content_hash(request);
        self.write(&id, Some(request), payload)?;
        Ok(id)
    }

    /// Store `payload` under its own content hash.
    pub fn store_content<P: Serialize>(&self, payload: &P) -> io::Result<String> {
        let id = content_hash(payload);
        self.write::<(), P>(&id, None, payload)?;
        Ok(id)
    }

    pub fn load<R, P>(&self, id: &str) -> Lookup<R, P>
    where
        R: Serialize + DeserializeOwned,
        P: Serialize + DeserializeOwned,
    {
        let path = self.path(id);
        if !path.exists() {
            return Lookup::Missing;
        }
        match read_entry::<R, P>(&path) {
            Ok(entry) => check_entry(id, entry),
            Err(reason) => Lookup::Corrupt { request: recover_request(&path, id), reason },
        }
    }
}

fn read_entry<R: DeserializeOwned, P: DeserializeOwned>(path: &Path) -> Result<Entry<R, P>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| format!("unreadable entry: {e}"))
}

fn check_entry<R: Serialize, P: Serialize>(id: &str, entry: Entry<R, P>) -> Lookup<R, P> {
    let request = entry.request.filter(|r| content_hash(r) == id);
    if entry.format_version != ENTRY_FORMAT_VERSION {
        return Lookup::Corrupt { request, reason: format!("unknown entry format {}", entry.format_version) };
    }
    let actual = content_hash(&entry.payload);
    if actual != entry.payload_sha256 {
        return Lookup::Corrupt { request, reason: "payload hash mismatch".into() };
    }
    if request.is_none() && actual != id {
        return Lookup::Corrupt { request: None, reason: "entry does not match its id".into() };
    }
    Lookup::Hit(entry.payload)
}

fn recover_request<R: Serialize + DeserializeOwned>(path: &Path, id: &str) -> Option<R> {
    #[derive(Deserialize)]
    struct Partial<R> {
        request: Option<R>,
    }
    let text = std::fs::read_to_string(path).ok()?;
    let partial: Partial<R> = serde_json::from_str(&text).ok()?;
    partial.request.filter(|r| content_hash(r) == id)
}
