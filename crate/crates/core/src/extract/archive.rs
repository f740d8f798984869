//! Class entries of a ZIP/JAR container.

use std::fs::File;
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArchiveError {
    #[error("archive not found: {0}")]
    NotFound(PathBuf),
    #[error("corrupt archive {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("entry {entry}: {reason}")]
    EntryDecode { entry: String, reason: String },
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveEntry {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDecodeError {
    pub entry: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ArchiveContents {
    /// `.class` entries in central-directory order.
    pub entries: Vec<ArchiveEntry>,
    /// Entries skipped in tolerant mode.
    pub skipped: Vec<EntryDecodeError>,
}

/// True for entries that hold a class of the archive's own class path.
/// Multi-release overlays under `META-INF/versions/` would duplicate classes.
fn is_class_entry(name: &str) -> bool {
    name.ends_with(".class") && !name.starts_with("META-INF/")
}

/// Yields every `.class` entry of a ZIP container, in archive order.
/// Directories, resources and nested archives are skipped.
pub fn open_archive(path: &Path, tolerant: bool) -> Result<ArchiveContents, ArchiveError> {
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => ArchiveError::NotFound(path.to_owned()),
        _ => ArchiveError::Io {
            path: path.to_owned(),
            source: e,
        },
    })?;
    let mut zip =
        zip::ZipArchive::new(BufReader::new(file)).map_err(|e| ArchiveError::Corrupt {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;

    let mut contents = ArchiveContents::default();
    for i in 0..zip.len() {
        let result = read_entry(&mut zip, i);
        match result {
            Ok(Some(entry)) => contents.entries.push(entry),
            Ok(None) => {}
            Err(e) if tolerant => contents.skipped.push(e),
            Err(e) => {
                return Err(ArchiveError::EntryDecode {
                    entry: e.entry,
                    reason: e.reason,
                })
            }
        }
    }
    Ok(contents)
}

fn read_entry<R: io::Read + io::Seek>(
    zip: &mut zip::ZipArchive<R>,
    index: usize,
) -> Result<Option<ArchiveEntry>, EntryDecodeError> {
    let mut file = zip.by_index(index).map_err(|e| EntryDecodeError {
        entry: format!("#{index}"),
        reason: e.to_string(),
    })?;
    let name = file
        .name()
        .map_err(|e| EntryDecodeError {
            entry: format!("#{index}"),
            reason: e.to_string(),
        })?
        .into_owned();
    if file.is_dir() || !is_class_entry(&name) {
        return Ok(None);
    }
    let mut bytes = Vec::with_capacity(file.size() as usize);
    file.read_to_end(&mut bytes).map_err(|e| EntryDecodeError {
        entry: name.clone(),
        reason: e.to_string(),
    })?;
    Ok(Some(ArchiveEntry { name, bytes }))
}
