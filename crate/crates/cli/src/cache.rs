//! On-disk cache of transducer enumerations, one file per `(k, l_max)`.
//!
//! File layout:
//!
//! ```text
//! depthlab-ilfst-cache <version>
//! key <k> <l_max>
//! checksum <sha256 of the payload, hex>
//! <payload: canonical machine serializations, each followed by a line `end`>
//! ```

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use depthlab_core::fst::{enumerate_ilfsts, parse_fst, serialize_fst, EnumerationLimits, TransducerSpec};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CACHE_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "depthlab-ilfst-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub k: usize,
    pub l_max: usize,
    pub version: u32,
}

impl CacheKey {
    pub fn new(k: usize, l_max: usize) -> Self {
        CacheKey { k, l_max, version: CACHE_FORMAT_VERSION }
    }

    fn file_name(&self) -> String {
        format!("ilfst-k{}-l{}-v{}.txt", self.k, self.l_max, self.version)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub machines: Vec<TransducerSpec>,
    pub checksum: String,
}

fn payload(machines: &[TransducerSpec]) -> String {
    let mut out = String::new();
    for m in machines {
        out.push_str(&serialize_fst(m));
        out.push_str("end\n");
    }
    out
}

fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

impl CacheEntry {
    pub fn new(key: CacheKey, machines: Vec<TransducerSpec>) -> Self {
        let checksum = checksum(&payload(&machines));
        CacheEntry { key, machines, checksum }
    }
}

pub fn cache_path(dir: &Path, key: CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

/// A verified entry, or `None` when the file is absent, malformed or fails its checksum.
pub fn cache_lookup(dir: &Path, key: CacheKey) -> Result<Option<CacheEntry>, CliError> {
    let path = cache_path(dir, key);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) if e.kind() == io::ErrorKind::InvalidData => return Ok(None),
        Err(source) => return Err(CliError::Io { path, source }),
    };
    Ok(decode_entry(&text, key))
}

fn decode_entry(text: &str, key: CacheKey) -> Option<CacheEntry> {
    let mut parts = text.splitn(4, '\n');
    let magic = parts.next()?;
    let key_line = parts.next()?;
    let sum_line = parts.next()?;
    let body = parts.next()?;
    if magic != format!("{MAGIC} {}", key.version) || key_line != format!("key {} {}", key.k, key.l_max) {
        return None;
    }
    let stored = sum_line.strip_prefix("checksum ")?;
    if checksum(body) != stored {
        return None;
    }
    let machines = body
        .split_terminator("end\n")
        .map(|m| parse_fst(m.as_bytes()).ok())
        .collect::<Option<Vec<_>>>()?;
    Some(CacheEntry { key, machines, checksum: stored.to_string() })
}

/// Writes `entry` through a temporary file in `dir` and renames it into place.
pub fn cache_store(dir: &Path, entry: &CacheEntry) -> Result<(), CliError> {
    let key = entry.key;
    let text = format!(
        "{MAGIC} {}\nkey {} {}\nchecksum {}\n{}",
        key.version,
        key.k,
        key.l_max,
        entry.checksum,
        payload(&entry.machines)
    );
    write_atomic(&cache_path(dir, key), text.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644)).map_err(io_err)?;
    }
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Cached enumeration, regenerating and storing it on a miss.
pub fn load_or_enumerate(
    dir: &Path,
    k: usize,
    l_max: usize,
    limits: &EnumerationLimits,
) -> Result<Vec<TransducerSpec>, CliError> {
    limits.check(k, l_max)?;
    let key = CacheKey::new(k, l_max);
    if let Some(entry) = cache_lookup(dir, key)? {
        return Ok(entry.machines);
    }
    let machines: Vec<_> = enumerate_ilfsts(k, l_max, limits)?.collect();
    let entry = CacheEntry::new(key, machines);
    cache_store(dir, &entry)?;
    Ok(entry.machines)
}
