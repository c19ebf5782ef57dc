use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::search::{single_token, tokenize};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeywordError {
    #[error("keyword set is empty")]
    Empty,
    #[error("keyword `{0}` is not a single token")]
    NotSingleToken(String),
}

/// Lowercase single-token keywords a tweet must mention to be kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeywordSet(BTreeSet<String>);

impl KeywordSet {
    pub fn new<I, S>(keywords: I) -> Result<Self, KeywordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for kw in keywords {
            let kw = kw.as_ref();
            let token =
                single_token(kw).ok_or_else(|| KeywordError::NotSingleToken(kw.to_string()))?;
            set.insert(token);
        }
        if set.is_empty() {
            return Err(KeywordError::Empty);
        }
        Ok(KeywordSet(set))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl Default for KeywordSet {
    fn default() -> Self {
        KeywordSet::new(["mpox"]).expect("default keyword is a token")
    }
}

/// True when at least one token of `text` is in `keywords`.
pub fn is_relevant(text: &str, keywords: &KeywordSet) -> bool {
    tokenize(text).iter().any(|t| keywords.contains(t))
}
