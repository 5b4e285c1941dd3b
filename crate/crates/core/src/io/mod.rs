//! File formats: bit-exact little-endian binaries for bulk arrays, CSV for
//! interchange, JSON for configuration.

mod binary;
mod config;
mod csvio;

pub use binary::{
    read_table, read_trajectory, write_table, write_trajectory, TABLE_MAGIC, TRAJECTORY_MAGIC,
};
pub use config::{RunConfigFile, DEFAULT_ETA, DEFAULT_R, DEFAULT_V, DEFAULT_W};
pub use csvio::{
    read_beacons_csv, write_beacons_csv, write_coverage_csv, write_posterior_csv,
    write_summary_csv, write_trajectory_csv,
};

use std::io::Write;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes: not a {expected} file")]
    BadMagic { expected: &'static str },
    #[error("unsupported format version {0}")]
    BadVersion(u16),
    #[error("truncated file at byte {offset} while reading {context}")]
    Truncated { offset: u64, context: &'static str },
    #[error("trailing data after byte {offset}")]
    TrailingData { offset: u64 },
    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Writes a file via a temp-and-rename so interrupted runs never leave a
/// partially valid file at the target path.
pub fn write_atomic(
    path: &Path,
    write: impl FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<(), FileError>,
) -> Result<(), FileError> {
    let tmp = path.with_extension(match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{ext}.tmp"),
        None => "tmp".to_string(),
    });
    let file = std::fs::File::create(&tmp)?;
    let mut writer = std::io::BufWriter::new(file);
    match write(&mut writer).and_then(|()| writer.flush().map_err(FileError::from)) {
        Ok(()) => {
            drop(writer);
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
        Err(e) => {
            drop(writer);
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}
