//! Durable store of deduplicated tweets plus immutable read snapshots.
//!
//! On disk a corpus is a directory holding `tweets.ndjson` (one canonical
//! [`Tweet`] per line, append-only) and `manifest.json`
//! (`{"record_count", "ids_digest", "format_version": 1}`).
//!
//! `ids_digest` is the lowercase hex SHA-256 of every id in ascending byte
//! order, each followed by a single `\n`.

mod snapshot;
mod store;

pub use snapshot::{CorpusStats, Snapshot};
pub use store::{ids_digest, Corpus, Manifest, DATA_FILE, FORMAT_VERSION, MANIFEST_FILE};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus store corrupt at {path}: {reason}")]
    StoreCorrupt { path: PathBuf, reason: String },
    #[error("corpus at {0} is locked by another writer")]
    Locked(PathBuf),
    #[error("corpus opened read-only")]
    ReadOnly,
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CorpusError {
        let path = path.into();
        move |source| CorpusError::Io { path, source }
    }
}
