use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use super::labeling::TweetLabeler;
use crate::corpus::Snapshot;
use crate::model::{ClusterLabel, DayRange};
use crate::search::{single_token, tokenize};
use crate::validation::ValidationErrors;

/// Longest range a dense per-day series will be produced for.
pub const MAX_SERIES_DAYS: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailyClusterPoint {
    pub day: NaiveDate,
    pub label: ClusterLabel,
    pub proportion: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrendPoint {
    pub day: NaiveDate,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocationCount {
    pub location: String,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LocationBreakdown {
    pub entries: Vec<LocationCount>,
    /// Tweets with an empty location, reported apart from `entries`.
    pub none_count: u64,
}

/// Tweet volume of two periods side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeComparison {
    pub period_a: DayRange,
    pub period_b: DayRange,
    pub count_a: u64,
    pub count_b: u64,
    /// `count_b / count_a`; `None` when `count_a` is zero.
    pub ratio: Option<f64>,
}

/// Share of each day's tweets per cluster label.
///
/// Days without tweets emit nothing. A day with tweets emits one point for
/// every label that occurs that day, ordered by label; the day's proportions
/// sum to 1 because the denominator includes `uncategorized`. Labeling runs on
/// the current rayon pool and the output does not depend on its size.
pub fn daily_cluster_proportions<L: TweetLabeler + ?Sized>(
    snapshot: &Snapshot,
    labeler: &L,
    range: &DayRange,
) -> Vec<DailyClusterPoint> {
    let tweets = snapshot.scan(range);
    let labels: Vec<ClusterLabel> = tweets.par_iter().map(|t| labeler.label(t)).collect();

    let mut out = Vec::new();
    let mut i = 0;
    while i < tweets.len() {
        let day = tweets[i].day();
        let mut counts = [0u64; ClusterLabel::ALL.len()];
        let mut total = 0u64;
        while i < tweets.len() && tweets[i].day() == day {
            counts[labels[i].index()] += 1;
            total += 1;
            i += 1;
        }
        for label in ClusterLabel::ALL {
            let count = counts[label.index()];
            if count > 0 {
                out.push(DailyClusterPoint {
                    day,
                    label,
                    proportion: count as f64 / total as f64,
                    count,
                });
            }
        }
    }
    out
}

fn check_series_range(range: &DayRange, errors: &mut ValidationErrors) {
    if range.len_days() > MAX_SERIES_DAYS {
        errors.push("to", format!("range may span at most {MAX_SERIES_DAYS} days"));
    }
}

/// Per-day count of tweets containing `keyword`, one point for every day in
/// `range` including zero days.
pub fn keyword_trend(
    snapshot: &Snapshot,
    keyword: &str,
    range: &DayRange,
) -> Result<Vec<TrendPoint>, ValidationErrors> {
    let mut errors = ValidationErrors::default();
    let token = single_token(keyword);
    if token.is_none() {
        errors.push("keywords", "single token required");
    }
    check_series_range(range, &mut errors);
    let token = errors.into_result(|| token.expect("checked"))?;

    let mut hits: BTreeMap<NaiveDate, u64> = BTreeMap::new();
    for t in snapshot.scan(range) {
        if tokenize(&t.text).contains(&token) {
            *hits.entry(t.day()).or_default() += 1;
        }
    }
    Ok(range
        .days()
        .map(|day| TrendPoint {
            day,
            count: hits.get(&day).copied().unwrap_or(0),
        })
        .collect())
}

/// Most frequent locations, case-folded and trimmed.
///
/// Ordered by descending count, then ascending location. Empty locations go to
/// `none_count` only.
pub fn location_breakdown(
    snapshot: &Snapshot,
    range: &DayRange,
    top_n: NonZeroUsize,
) -> LocationBreakdown {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut none_count = 0;
    for t in snapshot.scan(range) {
        let loc = t.location.trim().to_lowercase();
        if loc.is_empty() {
            none_count += 1;
        } else {
            *counts.entry(loc).or_default() += 1;
        }
    }
    let mut entries: Vec<LocationCount> = counts
        .into_iter()
        .map(|(location, count)| LocationCount { location, count })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.location.cmp(&b.location)));
    entries.truncate(top_n.get());
    LocationBreakdown {
        entries,
        none_count,
    }
}

/// Compares tweet counts of two (possibly overlapping) periods.
pub fn volume_comparison(
    snapshot: &Snapshot,
    period_a: DayRange,
    period_b: DayRange,
) -> VolumeComparison {
    let stats = snapshot.stats();
    let count_a = stats.count_in(&period_a);
    let count_b = stats.count_in(&period_b);
    VolumeComparison {
        period_a,
        period_b,
        count_a,
        count_b,
        ratio: (count_a > 0).then(|| count_b as f64 / count_a as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{Lexicon, TopicRuleSet};
    use crate::model::{make_tweet, parse_day, DatasetFormat, RawFields, Tweet};

    fn tweet(id: &str, ts: &str, text: &str, location: &str) -> Tweet {
        make_tweet(
            RawFields {
                id: Some(id.into()),
                created_at: Some(ts.into()),
                text: Some(text.into()),
                location: Some(location.into()),
                ..Default::default()
            },
            DatasetFormat::StreamSample,
            "t",
        )
        .unwrap()
    }

    fn day(s: &str) -> NaiveDate {
        parse_day(s).unwrap()
    }

    fn range(a: &str, b: &str) -> DayRange {
        DayRange::new(day(a), day(b)).unwrap()
    }

    fn toy_rules() -> TopicRuleSet {
        TopicRuleSet::new(vec![
            (ClusterLabel::Cynicism, Lexicon::topic("c", ["scam"]).unwrap()),
            (ClusterLabel::Misinformation, Lexicon::topic("m", ["hoax"]).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn four_tweet_day_hand_count() {
        let s = Snapshot::from_tweets(vec![
            tweet("1", "2024-04-01T01:00:00Z", "mpox scam", ""),
            tweet("2", "2024-04-01T02:00:00Z", "what a scam", ""),
            tweet("3", "2024-04-01T03:00:00Z", "mpox hoax", ""),
            tweet("4", "2024-04-01T04:00:00Z", "mpox news", ""),
        ]);
        let pts = daily_cluster_proportions(&s, &toy_rules(), &DayRange::all());
        let got: Vec<_> = pts.iter().map(|p| (p.label, p.proportion, p.count)).collect();
        assert_eq!(
            got,
            [
                (ClusterLabel::Cynicism, 0.5, 2),
                (ClusterLabel::Misinformation, 0.25, 1),
                (ClusterLabel::Uncategorized, 0.25, 1),
            ]
        );
    }

    #[test]
    fn empty_range_and_empty_days() {
        let s = Snapshot::from_tweets(vec![
            tweet("1", "2024-04-01T01:00:00Z", "scam", ""),
            tweet("2", "2024-04-03T01:00:00Z", "hoax", ""),
        ]);
        assert!(daily_cluster_proportions(&s, &toy_rules(), &range("2024-05-01", "2024-05-09")).is_empty());
        let pts = daily_cluster_proportions(&s, &toy_rules(), &range("2024-04-01", "2024-04-03"));
        let days: Vec<_> = pts.iter().map(|p| p.day).collect();
        assert_eq!(days, [day("2024-04-01"), day("2024-04-03")]);
    }

    #[test]
    fn trend_is_dense() {
        let s = Snapshot::from_tweets(vec![
            tweet("1", "2024-04-01T01:00:00Z", "mpox", ""),
            tweet("2", "2024-04-01T02:00:00Z", "#MPOX mpox", ""),
            tweet("3", "2024-04-03T01:00:00Z", "mpox", ""),
        ]);
        let pts = keyword_trend(&s, "mpox", &range("2024-04-01", "2024-04-03")).unwrap();
        let counts: Vec<_> = pts.iter().map(|p| p.count).collect();
        assert_eq!(counts, [2, 0, 1]);
        let zero = keyword_trend(&s, "vaccine", &range("2024-04-01", "2024-04-03")).unwrap();
        assert_eq!(zero.len(), 3);
        assert!(zero.iter().all(|p| p.count == 0));
    }

    #[test]
    fn trend_rejects_phrase_and_huge_range() {
        let s = Snapshot::from_tweets(Vec::new());
        let err = keyword_trend(&s, "mpox vaccine", &range("2024-04-01", "2024-04-03")).unwrap_err();
        assert!(err.has_field("keywords"));
        let err = keyword_trend(&s, "mpox", &range("1900-01-01", "2024-04-03")).unwrap_err();
        assert!(err.has_field("to"));
    }

    #[test]
    fn locations_case_folded() {
        let s = Snapshot::from_tweets(vec![
            tweet("1", "2024-04-01T01:00:00Z", "a", "Austin, TX"),
            tweet("2", "2024-04-01T01:00:00Z", "a", " austin, tx "),
            tweet("3", "2024-04-01T01:00:00Z", "a", ""),
        ]);
        let b = location_breakdown(&s, &DayRange::all(), NonZeroUsize::new(10).unwrap());
        assert_eq!(
            b.entries,
            [LocationCount {
                location: "austin, tx".into(),
                count: 2
            }]
        );
        assert_eq!(b.none_count, 1);
        let empty = location_breakdown(
            &Snapshot::from_tweets(Vec::new()),
            &DayRange::all(),
            NonZeroUsize::MIN,
        );
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn locations_top_n_hand_count() {
        // counts: lagos 3, austin 2, paris 2, berlin 1, tokyo 1
        let locs = ["Lagos", "lagos", "LAGOS", "Austin", "austin", "Paris", "paris", "Berlin", "Tokyo"];
        let s = Snapshot::from_tweets(
            locs.iter()
                .enumerate()
                .map(|(i, l)| tweet(&i.to_string(), "2024-04-01T00:00:00Z", "x", l)),
        );
        let b = location_breakdown(&s, &DayRange::all(), NonZeroUsize::new(3).unwrap());
        let got: Vec<_> = b.entries.iter().map(|e| (e.location.as_str(), e.count)).collect();
        assert_eq!(got, [("lagos", 3), ("austin", 2), ("paris", 2)]);
    }

    #[test]
    fn volume_ratio_and_guard() {
        let mut tweets = Vec::new();
        for i in 0..10 {
            tweets.push(tweet(&format!("a{i}"), "2023-06-01T00:00:00Z", "x", ""));
        }
        for i in 0..40 {
            tweets.push(tweet(&format!("b{i}"), "2024-08-20T00:00:00Z", "x", ""));
        }
        let s = Snapshot::from_tweets(tweets);
        let y23 = DayRange::year(2023).unwrap();
        let y24 = DayRange::year(2024).unwrap();
        let v = volume_comparison(&s, y23, y24);
        assert_eq!((v.count_a, v.count_b, v.ratio), (10, 40, Some(4.0)));
        assert_eq!(volume_comparison(&s, y24, y24).ratio, Some(1.0));
        let v = volume_comparison(&s, DayRange::year(2022).unwrap(), y24);
        assert_eq!((v.count_a, v.count_b, v.ratio), (0, 40, None));
    }
}
