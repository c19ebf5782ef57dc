//! Shared domain types: the canonical tweet record and the labels attached to it.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

/// The three dataset kinds a tweet can come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    /// Newline-delimited bare tweet objects from a ~1% random stream sample.
    StreamSample,
    /// A hydrated tweet export in CSV form.
    HydratedCsv,
    /// Newline-delimited JSON from a browser capture tool, one envelope per line.
    CaptureNdjson,
}

impl DatasetFormat {
    pub const ALL: [DatasetFormat; 3] = [
        DatasetFormat::StreamSample,
        DatasetFormat::HydratedCsv,
        DatasetFormat::CaptureNdjson,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetFormat::StreamSample => "stream_sample",
            DatasetFormat::HydratedCsv => "hydrated_csv",
            DatasetFormat::CaptureNdjson => "capture_ndjson",
        }
    }
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DatasetFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown dataset format `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Engagement {
    pub like_count: u64,
    pub reply_count: u64,
    pub retweet_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub source: DatasetFormat,
    pub source_file: String,
    /// Set when at least one engagement count was absent in the source and imputed as 0.
    pub counts_imputed: bool,
}

/// A normalized tweet.
///
/// Serializes to the flat canonical store record, with fields in the fixed order
/// `id, created_at, text, author_handle, location, like_count, reply_count,
/// retweet_count, lang, source, source_file, counts_imputed`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    #[serde(with = "utc_seconds")]
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub author_handle: String,
    pub location: String,
    #[serde(flatten)]
    pub engagement: Engagement,
    pub lang: String,
    #[serde(flatten)]
    pub provenance: Provenance,
}

impl Tweet {
    /// UTC calendar day the tweet falls on.
    pub fn day(&self) -> NaiveDate {
        self.created_at.date_naive()
    }
}

/// Thematic cluster a tweet is assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterLabel {
    Cynicism,
    CovidComparison,
    GovernmentAction,
    Misinformation,
    /// Reserved for tweets matching no topic lexicon.
    Uncategorized,
}

impl ClusterLabel {
    pub const ALL: [ClusterLabel; 5] = [
        ClusterLabel::Cynicism,
        ClusterLabel::CovidComparison,
        ClusterLabel::GovernmentAction,
        ClusterLabel::Misinformation,
        ClusterLabel::Uncategorized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClusterLabel::Cynicism => "cynicism",
            ClusterLabel::CovidComparison => "covid_comparison",
            ClusterLabel::GovernmentAction => "government_action",
            ClusterLabel::Misinformation => "misinformation",
            ClusterLabel::Uncategorized => "uncategorized",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ClusterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClusterLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClusterLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown cluster label `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub raw: f64,
    pub polarity: Polarity,
}

impl SentimentScore {
    /// Classifies `raw` against the symmetric threshold `tau`.
    pub fn from_raw(raw: f64, tau: f64) -> Self {
        let polarity = if raw < -tau {
            Polarity::Negative
        } else if raw > tau {
            Polarity::Positive
        } else {
            Polarity::Neutral
        };
        SentimentScore { raw, polarity }
    }
}

/// Inclusive range of UTC calendar days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DayRange {
    from: NaiveDate,
    to: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid range: {from} is after {to}")]
pub struct InvalidRange {
    pub from: NaiveDate,
    pub to: NaiveDate,
}

impl DayRange {
    pub fn new(from: NaiveDate, to: NaiveDate) -> Result<Self, InvalidRange> {
        if from > to {
            return Err(InvalidRange { from, to });
        }
        Ok(DayRange { from, to })
    }

    /// Every representable day.
    pub fn all() -> Self {
        DayRange {
            from: NaiveDate::MIN,
            to: NaiveDate::MAX,
        }
    }

    pub fn single(day: NaiveDate) -> Self {
        DayRange { from: day, to: day }
    }

    /// The calendar year `year`, 1 January to 31 December.
    pub fn year(year: i32) -> Option<Self> {
        Some(DayRange {
            from: NaiveDate::from_ymd_opt(year, 1, 1)?,
            to: NaiveDate::from_ymd_opt(year, 12, 31)?,
        })
    }

    pub fn from(&self) -> NaiveDate {
        self.from
    }

    pub fn to(&self) -> NaiveDate {
        self.to
    }

    pub fn contains(&self, day: NaiveDate) -> bool {
        self.from <= day && day <= self.to
    }

    /// Number of days covered, counting both ends.
    pub fn len_days(&self) -> i64 {
        (self.to - self.from).num_days() + 1
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> {
        let to = self.to;
        self.from.iter_days().take_while(move |d| *d <= to)
    }

    /// Overlap with another range, if any.
    pub fn intersect(&self, other: &DayRange) -> Option<DayRange> {
        DayRange::new(self.from.max(other.from), self.to.min(other.to)).ok()
    }
}

/// Parses a `YYYY-MM-DD` day.
pub fn parse_day(s: &str) -> Result<NaiveDate, chrono::ParseError> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
}

/// Raw field values for one record, as extracted from a source file.
///
/// Every value is the source's textual rendering; `None` means absent or null.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawFields {
    pub id: Option<String>,
    pub created_at: Option<String>,
    pub text: Option<String>,
    pub author_handle: Option<String>,
    pub location: Option<String>,
    pub like_count: Option<String>,
    pub reply_count: Option<String>,
    pub retweet_count: Option<String>,
    pub lang: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedRecord {
    #[error("empty or missing id")]
    EmptyId,
    #[error("missing created_at")]
    MissingTimestamp,
    #[error("unparseable timestamp `{0}`")]
    BadTimestamp(String),
    #[error("missing text")]
    MissingText,
    #[error("{field}: invalid count `{value}`")]
    BadCount { field: &'static str, value: String },
    #[error("{0}")]
    Syntax(String),
}

/// Builds a canonical [`Tweet`] from raw source fields.
pub fn make_tweet(
    raw: RawFields,
    source: DatasetFormat,
    source_file: &str,
) -> Result<Tweet, MalformedRecord> {
    let id = raw.id.as_deref().map(str::trim).unwrap_or_default();
    if id.is_empty() {
        return Err(MalformedRecord::EmptyId);
    }
    let ts = raw
        .created_at
        .as_deref()
        .filter(|s| !s.trim().is_empty())
        .ok_or(MalformedRecord::MissingTimestamp)?;
    let created_at =
        parse_timestamp(ts).ok_or_else(|| MalformedRecord::BadTimestamp(ts.to_string()))?;
    let text = raw.text.as_deref().ok_or(MalformedRecord::MissingText)?;

    let mut imputed = false;
    let mut count = |field: &'static str, value: &Option<String>| -> Result<u64, MalformedRecord> {
        match value.as_deref().map(str::trim) {
            None | Some("") => {
                imputed = true;
                Ok(0)
            }
            Some(v) => parse_count(v).ok_or_else(|| MalformedRecord::BadCount {
                field,
                value: v.to_string(),
            }),
        }
    };
    let engagement = Engagement {
        like_count: count("like_count", &raw.like_count)?,
        reply_count: count("reply_count", &raw.reply_count)?,
        retweet_count: count("retweet_count", &raw.retweet_count)?,
    };

    Ok(Tweet {
        id: id.to_string(),
        created_at,
        text: clean_text(text),
        author_handle: raw
            .author_handle
            .map(|h| clean_text(h.trim().trim_start_matches('@')))
            .unwrap_or_default(),
        location: raw.location.map(|l| clean_text(&l)).unwrap_or_default(),
        engagement,
        lang: raw.lang.map(|l| l.trim().to_string()).unwrap_or_default(),
        provenance: Provenance {
            source,
            source_file: source_file.to_string(),
            counts_imputed: imputed,
        },
    })
}

/// NFC-normalizes and strips NUL characters.
pub fn clean_text(s: &str) -> String {
    let s = nfc(s);
    if s.contains('\0') {
        s.replace('\0', "")
    } else {
        s
    }
}

pub(crate) fn nfc(s: &str) -> String {
    match is_nfc_quick(s.chars()) {
        IsNormalized::Yes => s.to_string(),
        _ => s.nfc().collect(),
    }
}

// Counts arrive as "12", "12.0" (spreadsheet exports) or JSON numbers.
fn parse_count(v: &str) -> Option<u64> {
    if let Ok(n) = v.parse::<u64>() {
        return Some(n);
    }
    let f = v.parse::<f64>().ok()?;
    (f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64).then_some(f as u64)
}

/// Parses the timestamp renderings seen across the three sources and truncates
/// to whole seconds in UTC.
///
/// Accepted: RFC 3339 (`2024-08-15T00:00:00Z`, offsets allowed), space-separated
/// ISO with or without offset (`2022-05-20 14:03:11+00:00`, naive means UTC), the
/// classic platform format (`Wed Aug 14 18:02:11 +0000 2024`), and integer epoch
/// seconds or milliseconds.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    let parsed = DateTime::parse_from_rfc3339(s)
        .ok()
        .or_else(|| DateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f%:z").ok())
        .or_else(|| DateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f%z").ok())
        .or_else(|| DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y").ok())
        .map(|dt| dt.with_timezone(&Utc))
        .or_else(|| {
            ["%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S%.f"]
                .iter()
                .find_map(|fmt| NaiveDateTime::parse_from_str(s, fmt).ok())
                .map(|naive| Utc.from_utc_datetime(&naive))
        })
        .or_else(|| {
            let n: i64 = s.parse().ok()?;
            // Anything past year 5138 in seconds is taken to be milliseconds.
            if n.abs() >= 100_000_000_000 {
                DateTime::from_timestamp_millis(n)
            } else {
                DateTime::from_timestamp(n, 0)
            }
        })?;
    let secs = parsed.timestamp();
    let dt = DateTime::from_timestamp(secs, 0)?;
    // Keep to years that render as plain four-digit ISO-8601.
    (0..=9999).contains(&dt.year()).then_some(dt)
}

/// Serde adapter for `YYYY-MM-DDTHH:MM:SSZ`.
pub mod utc_seconds {
    use chrono::{DateTime, NaiveDateTime, Utc};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub const FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

    pub fn serialize<S: Serializer>(dt: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&dt.format(FORMAT))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let s = String::deserialize(d)?;
        NaiveDateTime::parse_from_str(&s, FORMAT)
            .map(|n| n.and_utc())
            .map_err(de::Error::custom)
    }
}
