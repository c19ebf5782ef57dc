use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use super::column_map::{CanonicalField, ColumnMap};
use super::IngestError;
use crate::model::{DatasetFormat, MalformedRecord, RawFields};

/// One record from a source file: its raw fields, or why it was unusable.
pub type ParsedRecord = Result<RawFields, MalformedRecord>;

/// Streaming reader over one dataset file.
///
/// Yields `Ok(record)` per row or line; an `Err` is an I/O failure and ends the
/// stream. Blank NDJSON lines are not records. Memory use is bounded by the
/// longest single record.
pub struct RecordStream {
    inner: Inner,
    path: PathBuf,
    malformed: u64,
    done: bool,
}

enum Inner {
    Csv {
        reader: csv::Reader<Box<dyn Read + Send>>,
        columns: Vec<(CanonicalField, usize)>,
        row: csv::StringRecord,
    },
    Ndjson {
        reader: Box<dyn BufRead + Send>,
        wrapper_key: Option<String>,
        map: ColumnMap,
        line: Vec<u8>,
    },
}

/// Opens `path` and returns a stream of its records.
///
/// For `capture_ndjson`, `wrapper_key` names the envelope member holding the
/// tweet; column paths are resolved inside it.
pub fn parse_file(
    path: &Path,
    format: DatasetFormat,
    map: &ColumnMap,
    wrapper_key: &str,
) -> Result<RecordStream, IngestError> {
    let file = File::open(path).map_err(IngestError::io(path))?;
    parse_reader(Box::new(file), path, format, map, wrapper_key)
}

pub(crate) fn parse_reader(
    source: Box<dyn Read + Send>,
    path: &Path,
    format: DatasetFormat,
    map: &ColumnMap,
    wrapper_key: &str,
) -> Result<RecordStream, IngestError> {
    let inner = match format {
        DatasetFormat::HydratedCsv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(true)
                .flexible(false)
                .from_reader(source);
            let headers = match reader.headers() {
                Ok(h) => h.clone(),
                Err(e) => return Err(csv_fatal(path, e)),
            };
            let mut columns = Vec::new();
            // An empty file has no header and no records.
            if !headers.is_empty() {
                for (field, column) in map.iter() {
                    match headers.iter().position(|h| h.trim() == column) {
                        Some(idx) => columns.push((field, idx)),
                        None if field.is_required() => {
                            return Err(IngestError::MissingColumn {
                                path: path.to_path_buf(),
                                column: column.to_string(),
                            });
                        }
                        None => {}
                    }
                }
            }
            Inner::Csv {
                reader,
                columns,
                row: csv::StringRecord::new(),
            }
        }
        DatasetFormat::StreamSample | DatasetFormat::CaptureNdjson => Inner::Ndjson {
            reader: Box::new(BufReader::new(source)),
            wrapper_key: (format == DatasetFormat::CaptureNdjson).then(|| wrapper_key.to_string()),
            map: map.clone(),
            line: Vec::new(),
        },
    };
    Ok(RecordStream {
        inner,
        path: path.to_path_buf(),
        malformed: 0,
        done: false,
    })
}

impl RecordStream {
    /// Records skipped as malformed so far.
    pub fn malformed(&self) -> u64 {
        self.malformed
    }

    fn next_record(&mut self) -> Option<Result<ParsedRecord, IngestError>> {
        match &mut self.inner {
            Inner::Csv {
                reader,
                columns,
                row,
            } => match reader.read_record(row) {
                Ok(false) => None,
                Ok(true) => Some(Ok(csv_fields(row, columns))),
                Err(e) => match e.kind() {
                    csv::ErrorKind::Io(_) => Some(Err(csv_fatal(&self.path, e))),
                    _ => Some(Ok(Err(MalformedRecord::Syntax(e.to_string())))),
                },
            },
            Inner::Ndjson {
                reader,
                wrapper_key,
                map,
                line,
            } => loop {
                line.clear();
                match reader.read_until(b'\n', line) {
                    Ok(0) => return None,
                    Ok(_) => {}
                    Err(e) => return Some(Err(IngestError::io(&self.path)(e))),
                }
                if line.iter().all(u8::is_ascii_whitespace) {
                    continue;
                }
                return Some(Ok(json_fields(line, wrapper_key.as_deref(), map)));
            },
        }
    }
}

impl Iterator for RecordStream {
    type Item = Result<ParsedRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_record();
        match &item {
            None | Some(Err(_)) => self.done = true,
            Some(Ok(Err(_))) => self.malformed += 1,
            Some(Ok(Ok(_))) => {}
        }
        item
    }
}

fn csv_fatal(path: &Path, e: csv::Error) -> IngestError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IngestError::io(path)(io),
        other => IngestError::BadHeader {
            path: path.to_path_buf(),
            reason: format!("{other:?}"),
        },
    }
}

fn csv_fields(row: &csv::StringRecord, columns: &[(CanonicalField, usize)]) -> ParsedRecord {
    let mut raw = RawFields::default();
    for &(field, idx) in columns {
        let value = row.get(idx).filter(|v| !v.is_empty()).map(str::to_string);
        set_field(&mut raw, field, value);
    }
    check_required(raw)
}

fn json_fields(line: &[u8], wrapper_key: Option<&str>, map: &ColumnMap) -> ParsedRecord {
    let value: Value = serde_json::from_slice(line)
        .map_err(|e| MalformedRecord::Syntax(format!("invalid JSON: {e}")))?;
    let Value::Object(obj) = value else {
        return Err(MalformedRecord::Syntax("line is not a JSON object".into()));
    };
    let obj = match wrapper_key {
        None => obj,
        Some(key) => match obj.into_iter().find(|(k, _)| k == key) {
            Some((_, Value::Object(inner))) => inner,
            _ => {
                return Err(MalformedRecord::Syntax(format!(
                    "missing `{key}` envelope object"
                )))
            }
        },
    };
    let mut raw = RawFields::default();
    for (field, path) in map.iter() {
        let value = match lookup(&obj, path) {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            Some(Value::Bool(b)) => Some(b.to_string()),
            Some(_) => {
                return Err(MalformedRecord::Syntax(format!(
                    "{field}: `{path}` is not a scalar"
                )))
            }
        };
        set_field(&mut raw, field, value);
    }
    check_required(raw)
}

fn lookup<'a>(obj: &'a Map<String, Value>, path: &str) -> Option<&'a Value> {
    let mut segments = path.split('.');
    let mut cur = obj.get(segments.next()?)?;
    for seg in segments {
        cur = match cur {
            Value::Object(m) => m.get(seg)?,
            Value::Array(a) => a.get(seg.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    Some(cur)
}

fn set_field(raw: &mut RawFields, field: CanonicalField, value: Option<String>) {
    let slot = match field {
        CanonicalField::Id => &mut raw.id,
        CanonicalField::CreatedAt => &mut raw.created_at,
        CanonicalField::Text => &mut raw.text,
        CanonicalField::LikeCount => &mut raw.like_count,
        CanonicalField::ReplyCount => &mut raw.reply_count,
        CanonicalField::RetweetCount => &mut raw.retweet_count,
        CanonicalField::Location => &mut raw.location,
        CanonicalField::AuthorHandle => &mut raw.author_handle,
        CanonicalField::Lang => &mut raw.lang,
    };
    *slot = value;
}

fn check_required(raw: RawFields) -> ParsedRecord {
    if raw.id.as_deref().is_none_or(|s| s.trim().is_empty()) {
        return Err(MalformedRecord::EmptyId);
    }
    if raw.created_at.is_none() {
        return Err(MalformedRecord::MissingTimestamp);
    }
    if raw.text.is_none() {
        return Err(MalformedRecord::MissingText);
    }
    Ok(raw)
}
