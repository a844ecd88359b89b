//! Content-addressed record cache. One file per `(config hash, inputs
//! digest)`, written to a temporary file and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::record::{ResultRecord, SCHEMA_VERSION};
use crate::error::Result;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn path(&self, config_hash: &str, inputs_digest: &str) -> PathBuf {
        self.dir.join(format!("{config_hash}-{inputs_digest}.jsonl"))
    }

    /// Prior records for exactly this key. Approximate records never satisfy
    /// an exact request; unreadable entries are ignored with a warning.
    pub fn lookup(&self, config_hash: &str, inputs_digest: &str, exact: bool) -> Option<Vec<ResultRecord>> {
        let path = self.path(config_hash, inputs_digest);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                return None;
            }
        };
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            match serde_json::from_str::<ResultRecord>(line) {
                Ok(r) if r.config_hash == config_hash && r.inputs_digest == inputs_digest && r.schema_version == SCHEMA_VERSION => {
                    out.push(r)
                }
                Ok(_) => {
                    log::warn!("ignoring cache entry {}: key mismatch at line {}", path.display(), n + 1);
                    return None;
                }
                Err(e) => {
                    log::warn!("ignoring corrupt cache entry {} (line {}): {e}", path.display(), n + 1);
                    return None;
                }
            }
        }
        if exact && out.iter().any(|r| r.approximate) {
            return None;
        }
        Some(out)
    }

    pub fn store(&self, config_hash: &str, inputs_digest: &str, records: &[ResultRecord]) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        for r in records {
            writeln!(tmp, "{}", r.to_line())?;
        }
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(config_hash, inputs_digest)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::record::{SortKey, TIE_BREAK};

    fn rec(approximate: bool) -> ResultRecord {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            experiment_id: "e".into(),
            config_hash: "c".into(),
            inputs_digest: "i".into(),
            op: "x".into(),
            seed: 0,
            precision: 128,
            approximate,
            tie_break: TIE_BREAK.into(),
            key: SortKey::default(),
            payload: serde_json::json!({"v": 1}),
        }
    }

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        assert!(c.lookup("c", "i", false).is_none());
        c.store("c", "i", &[rec(false)]).unwrap();
        assert_eq!(c.lookup("c", "i", false).unwrap(), vec![rec(false)]);
        assert!(c.lookup("c", "j", false).is_none());
        std::fs::write(c.path("c", "i"), "{not json\n").unwrap();
        assert!(c.lookup("c", "i", false).is_none());
    }

    #[test]
    fn approximate_never_serves_exact() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        c.store("c", "i", &[rec(true)]).unwrap();
        assert!(c.lookup("c", "i", true).is_none());
        assert!(c.lookup("c", "i", false).is_some());
    }
}
