//! Core of the mpox tweet monitoring dashboard: ingesting tweet exports into a
//! deduplicated corpus, keyword search, and lexicon-based sentiment, topic and
//! volume analytics.

pub mod analytics;
pub mod config;
pub mod corpus;
pub mod ingest;
pub mod model;
pub mod search;
#[cfg(feature = "synth")]
pub mod synth;
pub mod validation;

pub use analytics::{
    daily_cluster_proportions, keyword_trend, label_topic, location_breakdown, score_sentiment,
    volume_comparison, DailyClusterPoint, Lexicon, SentimentModel, TopicRuleSet, TweetLabeler,
    VolumeComparison,
};
pub use config::{Config, ConfigError};
pub use corpus::{Corpus, CorpusError, CorpusStats, Snapshot};
pub use ingest::{
    detect_format, ingest_file, is_relevant, parse_file, ColumnMap, DatasetSpec, IngestConfig,
    IngestError, IngestReport, KeywordSet,
};
pub use model::{
    make_tweet, ClusterLabel, DatasetFormat, DayRange, Engagement, MalformedRecord, Polarity,
    Provenance, RawFields, SentimentScore, Tweet,
};
pub use search::{execute, tokenize, validate_query, Index, Query, ResultPage, SearchRequest};
pub use validation::{FieldError, ValidationErrors};
