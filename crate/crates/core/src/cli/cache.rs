//! Persistent report cache.
//!
//! Entries are keyed by a SHA-256 of the report schema and the canonical computation key of
//! the spec, and stored as a magic header followed by bincode. A schema bump changes every key
//! and the header, so stale entries are never read back.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::report::{Report, SCHEMA};
use super::spec::RunSpec;
use crate::error::{JetError, Result};

const MAGIC: &[u8] = b"JFC1";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn key(spec: &RunSpec) -> String {
        let mut h = Sha256::new();
        h.update(SCHEMA.as_bytes());
        h.update([0]);
        h.update(spec.computation_key().as_bytes());
        hex::encode(h.finalize())
    }

    fn lock(&self) -> Result<File> {
        Ok(OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(".lock"))?)
    }

    pub fn path(&self, spec: &RunSpec) -> PathBuf {
        self.dir.join(format!("{}.bin", Self::key(spec)))
    }

    pub fn get(&self, spec: &RunSpec) -> Result<Option<Report>> {
        let lock = self.lock()?;
        lock.lock_shared()?;
        let path = self.path(spec);
        let mut bytes = Vec::new();
        match File::open(&path) {
            Ok(mut f) => {
                f.read_to_end(&mut bytes)?;
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        }
        drop(lock);
        if !bytes.starts_with(MAGIC) {
            return Ok(None);
        }
        let report: Report =
            bincode::deserialize(&bytes[MAGIC.len()..]).map_err(|e| JetError::Cache(format!("{}: {e}", path.display())))?;
        Ok((report.schema == SCHEMA).then_some(report))
    }

    pub fn put(&self, spec: &RunSpec, report: &Report) -> Result<()> {
        let body = bincode::serialize(report).map_err(|e| JetError::Cache(e.to_string()))?;
        let lock = self.lock()?;
        lock.lock()?;
        let path = self.path(spec);
        let tmp = path.with_extension("tmp");
        let mut f = File::create(&tmp)?;
        f.write_all(MAGIC)?;
        f.write_all(&body)?;
        f.sync_all()?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}
