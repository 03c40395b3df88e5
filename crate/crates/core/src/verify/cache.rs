//! On-disk report cache keyed by a digest of the resolved run. Access goes
//! through an advisory lock on `<dir>/.lock`.

use std::fs::{self, File, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use super::VerificationReport;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn lock_file(&self) -> Result<File> {
        Ok(OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(".lock"))?)
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<VerificationReport>> {
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        let text = match fs::read_to_string(self.path(key)) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match serde_json::from_str(&text) {
            Ok(r) => Ok(Some(r)),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {key}: {e}");
                Ok(None)
            }
        }
    }

    pub fn put(&self, key: &str, report: &VerificationReport) -> Result<()> {
        let lock = self.lock_file()?;
        lock.lock()?;
        let tmp = self.dir.join(format!(".{key}.tmp"));
        fs::write(&tmp, report.canonical_json())?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }
}
