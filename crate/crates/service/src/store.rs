//! One JSON file per session, replaced atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU8, Ordering};

use uuid::Uuid;

use crate::session::Session;

/// A point at which [`Store::save`] stops as if the process had died there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Fault {
    None = 0,
    /// After writing part of the temporary file.
    MidWrite = 1,
    /// After writing and syncing the temporary file, before the rename.
    BeforeRename = 2,
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    fault: AtomicU8,
}

fn io_error(path: &Path, e: std::io::Error) -> String {
    format!("{}: {e}", path.display())
}

impl Store {
    /// Creates the directory if needed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, String> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        Ok(Store { dir, fault: AtomicU8::new(Fault::None as u8) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_of(&self, id: Uuid) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    /// Makes the next saves stop at `fault`; used by crash tests.
    pub fn inject_fault(&self, fault: Fault) {
        self.fault.store(fault as u8, Ordering::SeqCst);
    }

    /// Writes `<id>.json.tmp`, syncs it and renames it over `<id>.json`.
    pub fn save(&self, session: &Session) -> Result<(), String> {
        let path = self.path_of(session.id);
        let tmp = self.dir.join(format!("{}.json.tmp", session.id));
        let bytes = serde_json::to_vec_pretty(session).map_err(|e| e.to_string())?;
        let fault = self.fault.load(Ordering::SeqCst);
        let mut file = fs::File::create(&tmp).map_err(|e| io_error(&tmp, e))?;
        if fault == Fault::MidWrite as u8 {
            file.write_all(&bytes[..bytes.len() / 2]).map_err(|e| io_error(&tmp, e))?;
            return Err(format!("{}: injected fault during write", tmp.display()));
        }
        file.write_all(&bytes).map_err(|e| io_error(&tmp, e))?;
        file.sync_all().map_err(|e| io_error(&tmp, e))?;
        drop(file);
        if fault == Fault::BeforeRename as u8 {
            return Err(format!("{}: injected fault before rename", tmp.display()));
        }
        fs::rename(&tmp, &path).map_err(|e| io_error(&path, e))?;
        if let Ok(d) = fs::File::open(&self.dir) {
            let _ = d.sync_all();
        }
        Ok(())
    }

    /// Reads every `*.json` file; unreadable or invalid files are skipped with a warning.
    pub fn load_all(&self) -> Result<(Vec<Session>, Vec<String>), String> {
        let mut sessions = Vec::new();
        let mut warnings = Vec::new();
        let entries = fs::read_dir(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            match Self::read(&path) {
                Ok(s) => sessions.push(s),
                Err(w) => {
                    tracing::warn!("skipping {w}");
                    warnings.push(w);
                }
            }
        }
        Ok((sessions, warnings))
    }

    fn read(path: &Path) -> Result<Session, String> {
        let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
        let session: Session = serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
        session.validate().map_err(|e| format!("{}: {e}", path.display()))?;
        if path.file_stem().and_then(|s| s.to_str()) != Some(&session.id.to_string()) {
            return Err(format!("{}: file name does not match session id {}", path.display(), session.id));
        }
        Ok(session)
    }
}
