//! Lexicon sentiment, topic-cluster labeling and the per-day aggregations
//! behind the dashboard charts.

mod labeling;
mod lexicon;
mod series;

pub use labeling::{
    label_topic, score_sentiment, BadThreshold, RuleSetError, SentimentExplanation,
    SentimentModel, TopicExplanation, TopicMatch, TopicRuleSet, TweetLabeler, DEFAULT_TAU,
};
pub use lexicon::{Lexicon, LexiconError};
pub use series::{
    daily_cluster_proportions, keyword_trend, location_breakdown, volume_comparison,
    DailyClusterPoint, LocationBreakdown, LocationCount, TrendPoint, VolumeComparison,
    MAX_SERIES_DAYS,
};

use crate::model::ClusterLabel;

/// Starter lexicons compiled into the binary; the same files ship under `lexicons/`.
pub mod defaults {
    pub const SENTIMENT: &str = include_str!("../../lexicons/sentiment.tsv");
    pub const CYNICISM: &str = include_str!("../../lexicons/cynicism.txt");
    pub const COVID_COMPARISON: &str = include_str!("../../lexicons/covid_comparison.txt");
    pub const GOVERNMENT_ACTION: &str = include_str!("../../lexicons/government_action.txt");
    pub const MISINFORMATION: &str = include_str!("../../lexicons/misinformation.txt");
}

impl TopicRuleSet {
    /// The four starter topic lexicons, cynicism first.
    pub fn starter() -> Self {
        let rules = [
            (ClusterLabel::Cynicism, defaults::CYNICISM),
            (ClusterLabel::CovidComparison, defaults::COVID_COMPARISON),
            (ClusterLabel::GovernmentAction, defaults::GOVERNMENT_ACTION),
            (ClusterLabel::Misinformation, defaults::MISINFORMATION),
        ]
        .into_iter()
        .map(|(label, text)| {
            let lex = Lexicon::parse_topic(label.as_str(), text).expect("starter lexicon parses");
            (label, lex)
        })
        .collect();
        TopicRuleSet::new(rules).expect("starter rules are valid")
    }
}

impl SentimentModel {
    /// The starter sentiment lexicon with τ = [`DEFAULT_TAU`].
    pub fn starter() -> Self {
        let lex = Lexicon::parse_weighted("sentiment", defaults::SENTIMENT)
            .expect("starter lexicon parses");
        SentimentModel::new(lex, DEFAULT_TAU).expect("default tau is positive")
    }
}
