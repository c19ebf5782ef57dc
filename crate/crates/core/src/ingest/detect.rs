use std::path::Path;

use serde_json::Value;

use crate::model::DatasetFormat;

/// How many leading bytes of a file [`detect_format`] looks at.
pub const SNIFF_LEN: usize = 64 * 1024;

/// Classifies a file from its leading bytes and name.
///
/// A JSON object line carrying `wrapper_key` with an object value means a
/// capture export; other JSON object lines mean a stream sample; a first line
/// containing a comma means a CSV header. Empty files fall back to the file
/// extension. `None` if nothing matches.
pub fn detect_format(head: &[u8], name: &str, wrapper_key: &str) -> Option<DatasetFormat> {
    let head = head.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(head);
    let start = head.iter().position(|b| !b.is_ascii_whitespace());
    let Some(start) = start else {
        return by_extension(name);
    };
    let body = &head[start..];

    if body[0] == b'{' {
        // Corrupt lines are tolerated; the first parseable object decides.
        return complete_lines(body, head.len() < SNIFF_LEN)
            .filter_map(|line| serde_json::from_slice::<Value>(line).ok())
            .find_map(|v| match v {
                Value::Object(obj) => Some(if matches!(obj.get(wrapper_key), Some(Value::Object(_))) {
                    DatasetFormat::CaptureNdjson
                } else {
                    DatasetFormat::StreamSample
                }),
                _ => None,
            });
    }

    let first_line = body.split(|&b| b == b'\n').next().unwrap_or_default();
    if first_line.contains(&b',') && body[0] != b'[' {
        return Some(DatasetFormat::HydratedCsv);
    }
    None
}

/// True when the first parseable JSON object has exactly the canonical store
/// record's keys, i.e. the file is a corpus export.
pub fn looks_canonical(head: &[u8]) -> bool {
    const KEYS: [&str; 12] = [
        "id",
        "created_at",
        "text",
        "author_handle",
        "location",
        "like_count",
        "reply_count",
        "retweet_count",
        "lang",
        "source",
        "source_file",
        "counts_imputed",
    ];
    complete_lines(head, head.len() < SNIFF_LEN)
        .filter_map(|line| serde_json::from_slice::<Value>(line).ok())
        .find_map(|v| match v {
            Value::Object(obj) => {
                Some(obj.len() == KEYS.len() && KEYS.iter().all(|k| obj.contains_key(*k)))
            }
            _ => None,
        })
        .unwrap_or(false)
}

// Lines of `buf` that are known to be complete; the trailing fragment only
// counts when `buf` is the whole file.
fn complete_lines(buf: &[u8], whole_file: bool) -> impl Iterator<Item = &[u8]> {
    let cut = if whole_file {
        buf.len()
    } else {
        buf.iter().rposition(|&b| b == b'\n').unwrap_or(0)
    };
    buf[..cut]
        .split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
        .filter(|l| l.iter().any(|b| !b.is_ascii_whitespace()))
}

fn by_extension(name: &str) -> Option<DatasetFormat> {
    let ext = Path::new(name).extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "csv" => Some(DatasetFormat::HydratedCsv),
        "ndjson" | "jsonl" | "json" => Some(DatasetFormat::StreamSample),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn detect(s: &str) -> Option<DatasetFormat> {
        detect_format(s.as_bytes(), "x", "data")
    }

    #[test]
    fn header_and_wrapper_rules() {
        assert_eq!(detect("id,created_at,text\n1,2,3\n"), Some(DatasetFormat::HydratedCsv));
        assert_eq!(
            detect("{\"data\":{\"id\":\"9\"}}\n"),
            Some(DatasetFormat::CaptureNdjson)
        );
        assert_eq!(
            detect("{\"id\":\"9\",\"text\":\"mpox\"}\n"),
            Some(DatasetFormat::StreamSample)
        );
    }

    #[test]
    fn wrapper_key_is_configurable() {
        let line = b"{\"payload\":{\"id\":\"9\"}}\n";
        assert_eq!(detect_format(line, "x", "data"), Some(DatasetFormat::StreamSample));
        assert_eq!(
            detect_format(line, "x", "payload"),
            Some(DatasetFormat::CaptureNdjson)
        );
    }

    #[test]
    fn skips_leading_corrupt_line() {
        assert_eq!(
            detect("{\"data\":{broken\n{\"data\":{\"id\":\"1\"}}\n"),
            Some(DatasetFormat::CaptureNdjson)
        );
    }

    #[test]
    fn empty_falls_back_to_extension() {
        assert_eq!(detect_format(b"", "a.csv", "data"), Some(DatasetFormat::HydratedCsv));
        assert_eq!(detect_format(b"\n", "a.jsonl", "data"), Some(DatasetFormat::StreamSample));
        assert_eq!(detect_format(b"", "a.bin", "data"), None);
    }

    #[test]
    fn unknown_content() {
        assert_eq!(detect("hello world\n"), None);
        assert_eq!(detect("[1,2,3]\n"), None);
        assert_eq!(detect("{not json at all\n"), None);
    }

    #[test]
    fn canonical_export_detection() {
        let line = r#"{"id":"7","created_at":"2024-08-15T01:02:03Z","text":"hi","author_handle":"","location":"","like_count":0,"reply_count":0,"retweet_count":0,"lang":"","source":"capture_ndjson","source_file":"c","counts_imputed":true}"#;
        assert!(looks_canonical(line.as_bytes()));
        assert!(!looks_canonical(br#"{"id":"7","text":"hi"}"#));
    }
}
