//! Reading the three dataset kinds into the corpus.
//!
//! Each file goes through `parse_file → make_tweet → is_relevant → Corpus::append`
//! and produces an [`IngestReport`]. Bad records are counted and skipped; only
//! an unreadable or unclassifiable file fails.

mod column_map;
mod detect;
mod parse;
mod relevance;

pub use column_map::{CanonicalField, ColumnMap, ColumnMapError};
pub use detect::{detect_format, looks_canonical, SNIFF_LEN};
pub use parse::{parse_file, ParsedRecord, RecordStream};
pub use relevance::{is_relevant, KeywordError, KeywordSet};

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, CorpusError};
use crate::model::{make_tweet, DatasetFormat};

pub const DEFAULT_WRAPPER_KEY: &str = "data";
const APPEND_BATCH: usize = 1024;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}: unrecognized dataset format")]
    UnknownFormat(PathBuf),
    #[error("{path}: required column `{column}` not in header")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: unreadable CSV header: {reason}")]
    BadHeader { path: PathBuf, reason: String },
    #[error("{path}: column_map: {source}")]
    ColumnMap {
        path: PathBuf,
        #[source]
        source: ColumnMapError,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

impl IngestError {
    pub(crate) fn io(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError {
        let path = path.to_path_buf();
        move |source| IngestError::Io { path, source }
    }
}

/// Settings shared by every file of an ingest run.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub keywords: KeywordSet,
    pub capture_wrapper_key: String,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            keywords: KeywordSet::default(),
            capture_wrapper_key: DEFAULT_WRAPPER_KEY.to_string(),
        }
    }
}

/// One input file and its optional overrides.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<DatasetFormat>,
    /// Canonical field name → source column or dotted JSON path, applied over
    /// the format's default layout.
    #[serde(default)]
    pub column_map: Option<BTreeMap<String, String>>,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        DatasetSpec {
            path: path.into(),
            ..Default::default()
        }
    }
}

/// Per-file accounting.
///
/// `records_read == matched + unmatched + malformed` and
/// `duplicates_skipped <= matched` always hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub file: String,
    pub format: Option<DatasetFormat>,
    pub records_read: u64,
    pub matched: u64,
    pub unmatched: u64,
    pub malformed: u64,
    pub duplicates_skipped: u64,
}

impl IngestReport {
    /// Matched tweets actually added to the corpus.
    pub fn appended(&self) -> u64 {
        self.matched - self.duplicates_skipped
    }

    pub fn is_consistent(&self) -> bool {
        self.records_read == self.matched + self.unmatched + self.malformed
            && self.duplicates_skipped <= self.matched
    }
}

/// Reads the first [`SNIFF_LEN`] bytes of `path`.
pub fn read_head(path: &Path) -> Result<Vec<u8>, IngestError> {
    let mut head = Vec::with_capacity(4096);
    File::open(path)
        .and_then(|f| f.take(SNIFF_LEN as u64).read_to_end(&mut head))
        .map_err(IngestError::io(path))?;
    Ok(head)
}

/// Resolves the format and column layout for `spec`.
pub fn resolve_layout(
    spec: &DatasetSpec,
    config: &IngestConfig,
) -> Result<(DatasetFormat, ColumnMap), IngestError> {
    let path = &spec.path;
    let head = read_head(path)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let format = match spec.format {
        Some(f) => f,
        None => detect_format(&head, name, &config.capture_wrapper_key)
            .ok_or_else(|| IngestError::UnknownFormat(path.clone()))?,
    };
    let map = match &spec.column_map {
        Some(overrides) => ColumnMap::default_for(format)
            .with_overrides(overrides.iter().map(|(k, v)| (k.as_str(), v.as_str())))
            .map_err(|source| IngestError::ColumnMap {
                path: path.clone(),
                source,
            })?,
        None if format == DatasetFormat::StreamSample && looks_canonical(&head) => {
            ColumnMap::canonical()
        }
        None => ColumnMap::default_for(format),
    };
    Ok((format, map))
}

/// Ingests one file into `corpus`.
///
/// Re-running on the same file leaves the corpus unchanged; the second report
/// shows every match as a skipped duplicate.
pub fn ingest_file(
    spec: &DatasetSpec,
    config: &IngestConfig,
    corpus: &mut Corpus,
) -> Result<IngestReport, IngestError> {
    let (format, map) = resolve_layout(spec, config)?;
    let path = &spec.path;
    let source_file = path.display().to_string();
    let mut report = IngestReport {
        file: source_file.clone(),
        format: Some(format),
        ..Default::default()
    };

    let mut stream = parse_file(path, format, &map, &config.capture_wrapper_key)?;
    let mut batch = Vec::with_capacity(APPEND_BATCH);
    for item in stream.by_ref() {
        report.records_read += 1;
        let raw = match item? {
            Ok(raw) => raw,
            Err(_) => {
                report.malformed += 1;
                continue;
            }
        };
        let tweet = match make_tweet(raw, format, &source_file) {
            Ok(t) => t,
            Err(_) => {
                report.malformed += 1;
                continue;
            }
        };
        if !is_relevant(&tweet.text, &config.keywords) {
            report.unmatched += 1;
            continue;
        }
        report.matched += 1;
        batch.push(tweet);
        if batch.len() == APPEND_BATCH {
            flush(&mut batch, corpus, &mut report)?;
        }
    }
    flush(&mut batch, corpus, &mut report)?;
    debug_assert!(report.is_consistent());
    Ok(report)
}

fn flush(
    batch: &mut Vec<crate::model::Tweet>,
    corpus: &mut Corpus,
    report: &mut IngestReport,
) -> Result<(), IngestError> {
    let n = batch.len();
    let written = corpus.append(batch.drain(..))?;
    report.duplicates_skipped += (n - written) as u64;
    Ok(())
}
