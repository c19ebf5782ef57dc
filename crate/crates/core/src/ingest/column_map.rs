use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::DatasetFormat;

/// Canonical tweet fields a source column can feed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalField {
    Id,
    CreatedAt,
    Text,
    LikeCount,
    ReplyCount,
    RetweetCount,
    Location,
    AuthorHandle,
    Lang,
}

impl CanonicalField {
    pub const ALL: [CanonicalField; 9] = [
        CanonicalField::Id,
        CanonicalField::CreatedAt,
        CanonicalField::Text,
        CanonicalField::LikeCount,
        CanonicalField::ReplyCount,
        CanonicalField::RetweetCount,
        CanonicalField::Location,
        CanonicalField::AuthorHandle,
        CanonicalField::Lang,
    ];

    pub const REQUIRED: [CanonicalField; 3] =
        [CanonicalField::Id, CanonicalField::CreatedAt, CanonicalField::Text];

    pub fn as_str(self) -> &'static str {
        match self {
            CanonicalField::Id => "id",
            CanonicalField::CreatedAt => "created_at",
            CanonicalField::Text => "text",
            CanonicalField::LikeCount => "like_count",
            CanonicalField::ReplyCount => "reply_count",
            CanonicalField::RetweetCount => "retweet_count",
            CanonicalField::Location => "location",
            CanonicalField::AuthorHandle => "author_handle",
            CanonicalField::Lang => "lang",
        }
    }

    pub fn is_required(self) -> bool {
        Self::REQUIRED.contains(&self)
    }
}

impl fmt::Display for CanonicalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CanonicalField {
    type Err = ColumnMapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CanonicalField::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ColumnMapError::UnknownField(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColumnMapError {
    #[error("unknown canonical field `{0}`")]
    UnknownField(String),
    #[error("required field `{0}` has no source column")]
    MissingRequired(CanonicalField),
    #[error("fields `{0}` and `{1}` both map to source path `{2}`")]
    DuplicatePath(CanonicalField, CanonicalField, String),
}

/// Where each canonical field is read from in a source record.
///
/// For CSV the path is a header name. For JSON it is a dotted path into the
/// (unwrapped) object; numeric segments index arrays, e.g. `entities.hashtags.0.text`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    paths: BTreeMap<CanonicalField, String>,
}

impl ColumnMap {
    pub fn new<I>(pairs: I) -> Result<Self, ColumnMapError>
    where
        I: IntoIterator<Item = (CanonicalField, String)>,
    {
        let paths: BTreeMap<_, _> = pairs.into_iter().filter(|(_, p)| !p.is_empty()).collect();
        for req in CanonicalField::REQUIRED {
            if !paths.contains_key(&req) {
                return Err(ColumnMapError::MissingRequired(req));
            }
        }
        let mut seen: BTreeMap<&str, CanonicalField> = BTreeMap::new();
        for (field, path) in &paths {
            if let Some(prev) = seen.insert(path.as_str(), *field) {
                return Err(ColumnMapError::DuplicatePath(prev, *field, path.clone()));
            }
        }
        Ok(ColumnMap { paths })
    }

    /// Built-in layout for each dataset kind.
    ///
    /// * `hydrated_csv`: headers named exactly like the canonical fields.
    /// * `stream_sample`: the classic streaming API tweet object.
    /// * `capture_ndjson`: the GraphQL tweet result found inside the capture envelope.
    pub fn default_for(format: DatasetFormat) -> Self {
        use CanonicalField::*;
        let pairs: &[(CanonicalField, &str)] = match format {
            DatasetFormat::HydratedCsv => return Self::canonical(),
            DatasetFormat::StreamSample => &[
                (Id, "id"),
                (CreatedAt, "created_at"),
                (Text, "text"),
                (LikeCount, "favorite_count"),
                (ReplyCount, "reply_count"),
                (RetweetCount, "retweet_count"),
                (Location, "user.location"),
                (AuthorHandle, "user.screen_name"),
                (Lang, "lang"),
            ],
            DatasetFormat::CaptureNdjson => &[
                (Id, "rest_id"),
                (CreatedAt, "legacy.created_at"),
                (Text, "legacy.full_text"),
                (LikeCount, "legacy.favorite_count"),
                (ReplyCount, "legacy.reply_count"),
                (RetweetCount, "legacy.retweet_count"),
                (Location, "core.user_results.result.legacy.location"),
                (AuthorHandle, "core.user_results.result.legacy.screen_name"),
                (Lang, "legacy.lang"),
            ],
        };
        Self::new(pairs.iter().map(|(f, p)| (*f, p.to_string()))).expect("built-in map is valid")
    }

    /// Identity layout matching the canonical store record.
    pub fn canonical() -> Self {
        Self::new(CanonicalField::ALL.map(|f| (f, f.as_str().to_string())))
            .expect("identity map is valid")
    }

    /// Applies `overrides` (canonical name → source path) on top of `self`.
    /// An empty path unmaps an optional field.
    pub fn with_overrides<'a, I>(&self, overrides: I) -> Result<Self, ColumnMapError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut paths = self.paths.clone();
        for (name, path) in overrides {
            let field: CanonicalField = name.parse()?;
            paths.insert(field, path.to_string());
        }
        Self::new(paths)
    }

    pub fn get(&self, field: CanonicalField) -> Option<&str> {
        self.paths.get(&field).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CanonicalField, &str)> {
        self.paths.iter().map(|(f, p)| (*f, p.as_str()))
    }
}
