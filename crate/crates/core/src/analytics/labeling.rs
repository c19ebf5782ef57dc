use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::lexicon::Lexicon;
use crate::model::{ClusterLabel, SentimentScore, Tweet};
use crate::search::tokenize;

/// Anything that assigns exactly one cluster label per tweet.
///
/// Implementations must be deterministic.
pub trait TweetLabeler: Sync {
    fn label(&self, tweet: &Tweet) -> ClusterLabel;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleSetError {
    #[error("topic rule set is empty")]
    Empty,
    #[error("`uncategorized` cannot have a lexicon")]
    Uncategorized,
    #[error("label `{0}` listed twice")]
    DuplicateLabel(ClusterLabel),
}

/// Ordered topic lexicons. Earlier rules win ties.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicRuleSet {
    rules: Vec<(ClusterLabel, Lexicon)>,
}

/// Tokens of one tweet that hit one topic lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicMatch {
    pub label: ClusterLabel,
    pub matched: Vec<String>,
}

/// Why a tweet received its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicExplanation {
    pub label: ClusterLabel,
    /// One entry per rule, in rule order.
    pub topics: Vec<TopicMatch>,
}

impl TopicRuleSet {
    pub fn new(rules: Vec<(ClusterLabel, Lexicon)>) -> Result<Self, RuleSetError> {
        if rules.is_empty() {
            return Err(RuleSetError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (label, _) in &rules {
            if *label == ClusterLabel::Uncategorized {
                return Err(RuleSetError::Uncategorized);
            }
            if !seen.insert(*label) {
                return Err(RuleSetError::DuplicateLabel(*label));
            }
        }
        Ok(TopicRuleSet { rules })
    }

    pub fn rules(&self) -> &[(ClusterLabel, Lexicon)] {
        &self.rules
    }

    /// Labels already-tokenized text.
    ///
    /// Each rule scores the number of distinct lexicon tokens present; the
    /// highest score wins, ties go to the earlier rule, and all-zero scores give
    /// `uncategorized`. Weights are ignored.
    pub fn label_tokens(&self, tokens: &BTreeSet<&str>) -> ClusterLabel {
        let mut best = (0usize, ClusterLabel::Uncategorized);
        for (label, lexicon) in &self.rules {
            let score = tokens.iter().filter(|t| lexicon.contains(t)).count();
            if score > best.0 {
                best = (score, *label);
            }
        }
        best.1
    }

    pub fn label_text(&self, text: &str) -> ClusterLabel {
        let tokens = tokenize(text);
        self.label_tokens(&tokens.iter().map(String::as_str).collect())
    }

    pub fn explain(&self, text: &str) -> TopicExplanation {
        let tokens = tokenize(text);
        let set: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
        TopicExplanation {
            label: self.label_tokens(&set),
            topics: self
                .rules
                .iter()
                .map(|(label, lexicon)| TopicMatch {
                    label: *label,
                    matched: set
                        .iter()
                        .filter(|t| lexicon.contains(t))
                        .map(|t| t.to_string())
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TweetLabeler for TopicRuleSet {
    fn label(&self, tweet: &Tweet) -> ClusterLabel {
        self.label_text(&tweet.text)
    }
}

/// Assigns `tweet` its topic cluster under `rules`.
pub fn label_topic(tweet: &Tweet, rules: &TopicRuleSet) -> ClusterLabel {
    rules.label(tweet)
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("sentiment threshold must be a positive number, got {0}")]
pub struct BadThreshold(pub f64);

/// A weighted lexicon plus the neutral band half-width τ.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentModel {
    lexicon: Lexicon,
    tau: f64,
}

/// Sentiment score plus the lexicon tokens behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentExplanation {
    #[serde(flatten)]
    pub score: SentimentScore,
    /// Distinct matched tokens, ascending.
    pub matched: Vec<String>,
}

pub const DEFAULT_TAU: f64 = 0.05;

impl SentimentModel {
    pub fn new(lexicon: Lexicon, tau: f64) -> Result<Self, BadThreshold> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(BadThreshold(tau));
        }
        Ok(SentimentModel { lexicon, tau })
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Sum of matched weights (every occurrence counts) over `max(1, token count)`.
    pub fn score_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> SentimentScore {
        let sum: f64 = tokens
            .iter()
            .filter_map(|t| self.lexicon.weight(t.as_ref()))
            .sum();
        SentimentScore::from_raw(sum / tokens.len().max(1) as f64, self.tau)
    }

    pub fn score_text(&self, text: &str) -> SentimentScore {
        self.score_tokens(&tokenize(text))
    }

    pub fn explain(&self, text: &str) -> SentimentExplanation {
        let tokens = tokenize(text);
        let matched: BTreeSet<&str> = tokens
            .iter()
            .map(String::as_str)
            .filter(|t| self.lexicon.contains(t))
            .collect();
        SentimentExplanation {
            score: self.score_tokens(&tokens),
            matched: matched.into_iter().map(str::to_string).collect(),
        }
    }
}

/// Scores `tweet` against `lexicon` with threshold `tau`.
pub fn score_sentiment(
    tweet: &Tweet,
    lexicon: &Lexicon,
    tau: f64,
) -> Result<SentimentScore, BadThreshold> {
    Ok(SentimentModel::new(lexicon.clone(), tau)?.score_text(&tweet.text))
}
