use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::search::single_token;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon `{name}` line {line}: {message}")]
    Line {
        name: String,
        line: usize,
        message: String,
    },
    #[error("lexicon `{name}`: token `{token}` is not a single lowercase token")]
    NotToken { name: String, token: String },
    #[error("lexicon `{name}`: duplicate token `{token}`")]
    Duplicate { name: String, token: String },
}

/// Named token → weight table.
///
/// Lexicon files are UTF-8, one entry per line; `#` starts a comment line and
/// blank lines are ignored. Weighted lexicons use `token<TAB>weight`; topic
/// lexicons list bare tokens and every weight is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    name: String,
    entries: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn new<I, S>(name: impl Into<String>, entries: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let name = name.into();
        let mut map = BTreeMap::new();
        for (token, weight) in entries {
            let token = token.into();
            if single_token(&token).as_deref() != Some(token.as_str()) {
                return Err(LexiconError::NotToken { name, token });
            }
            if map.insert(token.clone(), weight).is_some() {
                return Err(LexiconError::Duplicate { name, token });
            }
        }
        Ok(Lexicon { name, entries: map })
    }

    /// A topic lexicon: every token weighs 1.
    pub fn topic<I, S>(name: impl Into<String>, tokens: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(name, tokens.into_iter().map(|t| (t, 1.0)))
    }

    pub fn parse_weighted(name: &str, text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (line, body) in content_lines(text) {
            let err = |message: String| LexiconError::Line {
                name: name.to_string(),
                line,
                message,
            };
            let mut cols = body.split('\t');
            let token = cols.next().unwrap_or_default().trim();
            let weight = cols
                .next()
                .ok_or_else(|| err("expected `token<TAB>weight`".into()))?
                .trim();
            if cols.next().is_some() {
                return Err(err("too many columns".into()));
            }
            let weight: f64 = weight
                .parse()
                .ok()
                .filter(|w: &f64| w.is_finite())
                .ok_or_else(|| err(format!("bad weight `{weight}`")))?;
            entries.push((token.to_string(), weight));
        }
        Self::new(name, entries)
    }

    pub fn parse_topic(name: &str, text: &str) -> Result<Self, LexiconError> {
        let mut tokens = Vec::new();
        for (line, body) in content_lines(text) {
            if body.contains('\t') {
                return Err(LexiconError::Line {
                    name: name.to_string(),
                    line,
                    message: "topic lexicons take no weight column".into(),
                });
            }
            tokens.push(body.trim().to_string());
        }
        Self::topic(name, tokens)
    }

    pub fn load_weighted(path: &Path) -> Result<Self, LexiconError> {
        let text = read(path)?;
        Self::parse_weighted(&file_stem(path), &text)
    }

    pub fn load_topic(path: &Path) -> Result<Self, LexiconError> {
        let text = read(path)?;
        Self::parse_topic(&file_stem(path), &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn weight(&self, token: &str) -> Option<f64> {
        self.entries.get(token).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(t, w)| (t.as_str(), *w))
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Lexicon {
        Lexicon {
            name: self.name.clone(),
            entries: self.entries.iter().map(|(t, w)| (t.clone(), w * factor)).collect(),
        }
    }

    /// Copy with `token` added at `weight` (replacing any existing entry).
    pub fn with_entry(&self, token: &str, weight: f64) -> Result<Lexicon, LexiconError> {
        let mut entries = self.entries.clone();
        entries.remove(token);
        Lexicon::new(
            self.name.clone(),
            entries.into_iter().chain(std::iter::once((token.to_string(), weight))),
        )
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("lexicon")
        .to_string()
}
