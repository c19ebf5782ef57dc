//! Configuration file loading.
//!
//! The config is a TOML document:
//!
//! ```toml
//! bind = "127.0.0.1:8080"          # host:port, overridable with MPOXDASH_BIND
//! corpus_path = "data/corpus"      # corpus store directory
//! keywords = ["mpox", "monkeypox"] # relevance filter, single tokens
//! capture_wrapper_key = "data"     # envelope member of capture exports
//! per_page_max = 200               # search page size cap, 1..=200
//! cors_origins = ["http://localhost:5173"]
//! static_dir = "ui/dist"           # optional dashboard bundle
//!
//! [[datasets]]
//! path = "raw/monkeypox_may2022.csv"
//! format = "hydrated_csv"          # optional; detected when absent
//! column_map = { id = "tweet_id" } # optional overrides of the default layout
//!
//! [sentiment]
//! lexicon_path = "lexicons/sentiment.tsv"
//! tau = 0.05
//!
//! [[topics]]                       # order is the tie-break priority
//! label = "cynicism"
//! lexicon_path = "lexicons/cynicism.txt"
//! ```
//!
//! Relative paths resolve against the config file's directory. Without
//! `[sentiment]` or `[[topics]]` the starter lexicons are used.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::analytics::{Lexicon, SentimentModel, TopicRuleSet, DEFAULT_TAU};
use crate::ingest::{DatasetSpec, IngestConfig, KeywordSet, DEFAULT_WRAPPER_KEY};
use crate::model::ClusterLabel;
use crate::search::MAX_PER_PAGE;

pub const BIND_ENV: &str = "MPOXDASH_BIND";
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("config key `{key}`: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            message: message.to_string(),
        }
    }

    /// The offending key, when the error is about one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    bind: Option<String>,
    corpus_path: Option<PathBuf>,
    keywords: Option<Vec<String>>,
    capture_wrapper_key: Option<String>,
    per_page_max: Option<i64>,
    #[serde(default)]
    cors_origins: Vec<String>,
    static_dir: Option<PathBuf>,
    #[serde(default)]
    datasets: Vec<RawDataset>,
    sentiment: Option<RawSentiment>,
    topics: Option<Vec<RawTopic>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    path: PathBuf,
    format: Option<String>,
    column_map: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSentiment {
    lexicon_path: Option<PathBuf>,
    tau: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopic {
    label: String,
    lexicon_path: PathBuf,
}

/// Fully validated configuration with lexicons loaded.
#[derive(Debug, Clone)]
pub struct Config {
    pub source: Option<PathBuf>,
    pub bind: String,
    pub corpus_path: PathBuf,
    pub ingest: IngestConfig,
    pub datasets: Vec<DatasetSpec>,
    pub sentiment: SentimentModel,
    pub topics: TopicRuleSet,
    pub per_page_max: u32,
    pub cors_origins: Vec<String>,
    pub static_dir: Option<PathBuf>,
}

impl Config {
    /// Defaults around a corpus directory; starter lexicons, keyword `mpox`.
    pub fn with_corpus(corpus_path: impl Into<PathBuf>) -> Self {
        Config {
            source: None,
            bind: DEFAULT_BIND.to_string(),
            corpus_path: corpus_path.into(),
            ingest: IngestConfig::default(),
            datasets: Vec::new(),
            sentiment: SentimentModel::starter(),
            topics: TopicRuleSet::starter(),
            per_page_max: MAX_PER_PAGE,
            cors_origins: Vec::new(),
            static_dir: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut config = Self::parse(&text, base)?;
        config.source = Some(path.to_path_buf());
        Ok(config)
    }

    /// Parses TOML text, resolving relative paths against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let resolve = |p: &Path| -> PathBuf {
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        let bind = raw.bind.unwrap_or_else(|| DEFAULT_BIND.to_string());
        check_bind(&bind).map_err(|m| ConfigError::invalid("bind", m))?;

        let corpus_path = raw
            .corpus_path
            .map(|p| resolve(&p))
            .ok_or_else(|| ConfigError::invalid("corpus_path", "required"))?;

        let keywords = match raw.keywords {
            Some(kws) => KeywordSet::new(kws).map_err(|e| ConfigError::invalid("keywords", e))?,
            None => KeywordSet::default(),
        };
        let capture_wrapper_key = raw
            .capture_wrapper_key
            .unwrap_or_else(|| DEFAULT_WRAPPER_KEY.to_string());
        if capture_wrapper_key.is_empty() {
            return Err(ConfigError::invalid("capture_wrapper_key", "must not be empty"));
        }

        let per_page_max = match raw.per_page_max {
            None => MAX_PER_PAGE,
            Some(n) if (1..=MAX_PER_PAGE as i64).contains(&n) => n as u32,
            Some(n) => {
                return Err(ConfigError::invalid(
                    "per_page_max",
                    format!("{n} is outside 1..={MAX_PER_PAGE}"),
                ))
            }
        };

        let mut datasets = Vec::with_capacity(raw.datasets.len());
        for (i, d) in raw.datasets.into_iter().enumerate() {
            let format = d
                .format
                .map(|f| f.parse())
                .transpose()
                .map_err(|e| ConfigError::invalid(format!("datasets[{i}].format"), e))?;
            datasets.push(DatasetSpec {
                path: resolve(&d.path),
                format,
                column_map: d.column_map,
            });
        }

        let sentiment = match raw.sentiment {
            None => SentimentModel::starter(),
            Some(s) => {
                let lexicon = match s.lexicon_path {
                    Some(p) => Lexicon::load_weighted(&resolve(&p))
                        .map_err(|e| ConfigError::invalid("sentiment.lexicon_path", e))?,
                    None => SentimentModel::starter().lexicon().clone(),
                };
                SentimentModel::new(lexicon, s.tau.unwrap_or(DEFAULT_TAU))
                    .map_err(|e| ConfigError::invalid("sentiment.tau", e))?
            }
        };

        let topics = match raw.topics {
            None => TopicRuleSet::starter(),
            Some(list) => {
                let mut rules = Vec::with_capacity(list.len());
                for (i, t) in list.into_iter().enumerate() {
                    let label: ClusterLabel = t
                        .label
                        .parse()
                        .map_err(|e| ConfigError::invalid(format!("topics[{i}].label"), e))?;
                    let lex = Lexicon::load_topic(&resolve(&t.lexicon_path)).map_err(|e| {
                        ConfigError::invalid(format!("topics[{i}].lexicon_path"), e)
                    })?;
                    rules.push((label, lex));
                }
                TopicRuleSet::new(rules).map_err(|e| ConfigError::invalid("topics", e))?
            }
        };

        let static_dir = raw.static_dir.map(|p| resolve(&p));
        if let Some(dir) = &static_dir {
            if !dir.is_dir() {
                return Err(ConfigError::invalid(
                    "static_dir",
                    format!("{} is not a directory", dir.display()),
                ));
            }
        }

        Ok(Config {
            source: None,
            bind,
            corpus_path,
            ingest: IngestConfig {
                keywords,
                capture_wrapper_key,
            },
            datasets,
            sentiment,
            topics,
            per_page_max,
            cors_origins: raw.cors_origins,
            static_dir,
        })
    }

    /// Replaces `bind` with an environment override, validating it.
    pub fn override_bind(&mut self, value: &str) -> Result<(), ConfigError> {
        check_bind(value).map_err(|m| ConfigError::invalid(BIND_ENV, m))?;
        self.bind = value.to_string();
        Ok(())
    }
}

fn check_bind(bind: &str) -> Result<(), String> {
    let (host, port) = bind
        .rsplit_once(':')
        .ok_or_else(|| format!("`{bind}` is not host:port"))?;
    if host.is_empty() {
        return Err(format!("`{bind}` has no host"));
    }
    match port.parse::<u32>() {
        Ok(p) if (1..=65535).contains(&p) => Ok(()),
        _ => Err(format!("port `{port}` is outside 1..=65535")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config, ConfigError> {
        Config::parse(text, Path::new("/base"))
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c = parse("corpus_path = \"corpus\"").unwrap();
        assert_eq!(c.bind, DEFAULT_BIND);
        assert_eq!(c.corpus_path, Path::new("/base/corpus"));
        assert_eq!(c.per_page_max, 200);
        assert_eq!(c.topics.rules()[0].0, ClusterLabel::Cynicism);
        assert_eq!(c.sentiment.tau(), DEFAULT_TAU);
        assert!(c.ingest.keywords.contains("mpox"));
    }

    #[test]
    fn bad_port_names_key() {
        for bind in ["0.0.0.0:0", "0.0.0.0:70000", "localhost", ":80"] {
            let err = parse(&format!("corpus_path = \"c\"\nbind = \"{bind}\"")).unwrap_err();
            assert_eq!(err.key(), Some("bind"), "{bind}");
        }
    }

    #[test]
    fn env_override_is_validated() {
        let mut c = parse("corpus_path = \"c\"").unwrap();
        c.override_bind("0.0.0.0:9000").unwrap();
        assert_eq!(c.bind, "0.0.0.0:9000");
        assert_eq!(c.override_bind("nope").unwrap_err().key(), Some(BIND_ENV));
    }

    #[test]
    fn phrase_keyword_rejected_at_load() {
        let err = parse("corpus_path = \"c\"\nkeywords = [\"mpox outbreak\"]").unwrap_err();
        assert_eq!(err.key(), Some("keywords"));
    }

    #[test]
    fn dataset_format_and_paths() {
        let c = parse(
            "corpus_path = \"c\"\n[[datasets]]\npath = \"a.csv\"\nformat = \"hydrated_csv\"\ncolumn_map = { id = \"tweet_id\" }\n",
        )
        .unwrap();
        assert_eq!(c.datasets[0].path, Path::new("/base/a.csv"));
        assert_eq!(c.datasets[0].format, Some(crate::model::DatasetFormat::HydratedCsv));
        let err = parse("corpus_path = \"c\"\n[[datasets]]\npath = \"a\"\nformat = \"xml\"\n")
            .unwrap_err();
        assert_eq!(err.key(), Some("datasets[0].format"));
    }

    #[test]
    fn missing_lexicon_names_key() {
        let err = parse(
            "corpus_path = \"c\"\n[[topics]]\nlabel = \"cynicism\"\nlexicon_path = \"nope.txt\"\n",
        )
        .unwrap_err();
        assert_eq!(err.key(), Some("topics[0].lexicon_path"));
        let err = parse("corpus_path = \"c\"\n[sentiment]\ntau = 0\n").unwrap_err();
        assert_eq!(err.key(), Some("sentiment.tau"));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            parse("corpus_path = \"c\"\nbogus = 1"),
            Err(ConfigError::Syntax(_))
        ));
    }

    #[test]
    fn topic_order_from_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("m.txt"), "hoax\n").unwrap();
        std::fs::write(dir.path().join("c.txt"), "scam\n").unwrap();
        let c = Config::parse(
            "corpus_path = \"c\"\n[[topics]]\nlabel = \"misinformation\"\nlexicon_path = \"m.txt\"\n[[topics]]\nlabel = \"cynicism\"\nlexicon_path = \"c.txt\"\n",
            dir.path(),
        )
        .unwrap();
        let order: Vec<_> = c.topics.rules().iter().map(|(l, _)| *l).collect();
        assert_eq!(order, [ClusterLabel::Misinformation, ClusterLabel::Cynicism]);
        assert_eq!(c.topics.label_text("scam hoax"), ClusterLabel::Misinformation);
    }
}
