use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::model::{DayRange, Tweet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: u64,
    pub per_day: BTreeMap<NaiveDate, u64>,
    pub date_min: Option<NaiveDate>,
    pub date_max: Option<NaiveDate>,
}

impl CorpusStats {
    fn from_sorted(tweets: &[Tweet]) -> Self {
        let mut per_day = BTreeMap::new();
        for t in tweets {
            *per_day.entry(t.day()).or_insert(0u64) += 1;
        }
        CorpusStats {
            total: tweets.len() as u64,
            date_min: per_day.keys().next().copied(),
            date_max: per_day.keys().next_back().copied(),
            per_day,
        }
    }

    /// Tweets on days inside `range`.
    pub fn count_in(&self, range: &DayRange) -> u64 {
        self.per_day
            .range(range.from()..=range.to())
            .map(|(_, n)| n)
            .sum()
    }

    /// `date_min..=date_max`, or `None` for an empty corpus.
    pub fn span(&self) -> Option<DayRange> {
        DayRange::new(self.date_min?, self.date_max?).ok()
    }
}

/// Immutable view of a corpus, ordered by `(created_at, id)`.
///
/// Cloning is cheap; the tweets are shared.
#[derive(Debug, Clone)]
pub struct Snapshot {
    tweets: Arc<[Tweet]>,
    by_id: Arc<HashMap<String, u32>>,
    stats: Arc<CorpusStats>,
    ids_digest: Arc<str>,
}

impl Snapshot {
    pub(crate) fn new(mut tweets: Vec<Tweet>, ids_digest: String) -> Self {
        tweets.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        let by_id = tweets
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.clone(), i as u32))
            .collect();
        let stats = CorpusStats::from_sorted(&tweets);
        Snapshot {
            tweets: tweets.into(),
            by_id: Arc::new(by_id),
            stats: Arc::new(stats),
            ids_digest: ids_digest.into(),
        }
    }

    /// Builds a snapshot directly from tweets, without a backing store.
    /// Later duplicates of an id are dropped.
    pub fn from_tweets(tweets: impl IntoIterator<Item = Tweet>) -> Self {
        let mut seen = std::collections::BTreeSet::new();
        let tweets: Vec<Tweet> = tweets
            .into_iter()
            .filter(|t| seen.insert(t.id.clone()))
            .collect();
        let digest = super::ids_digest(seen.iter().map(String::as_str));
        Snapshot::new(tweets, digest)
    }

    /// All tweets, in `(created_at, id)` order.
    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub(crate) fn shared_tweets(&self) -> Arc<[Tweet]> {
        Arc::clone(&self.tweets)
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Tweet> {
        self.by_id.get(id).map(|&i| &self.tweets[i as usize])
    }

    /// Position of `id` in [`Snapshot::tweets`].
    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).map(|&i| i as usize)
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn ids_digest(&self) -> &str {
        &self.ids_digest
    }

    /// Tweets whose UTC day lies in `range`, in `(created_at, id)` order.
    pub fn scan(&self, range: &DayRange) -> &[Tweet] {
        &self.tweets[self.scan_bounds(range)]
    }

    /// Index bounds of [`Snapshot::scan`] within [`Snapshot::tweets`].
    pub fn scan_bounds(&self, range: &DayRange) -> std::ops::Range<usize> {
        let start = self.tweets.partition_point(|t| t.day() < range.from());
        let end = self.tweets.partition_point(|t| t.day() <= range.to());
        start..end.max(start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_tweet, parse_day, DatasetFormat, RawFields};

    fn tweet(id: &str, ts: &str) -> Tweet {
        make_tweet(
            RawFields {
                id: Some(id.into()),
                created_at: Some(ts.into()),
                text: Some("mpox".into()),
                ..Default::default()
            },
            DatasetFormat::StreamSample,
            "t",
        )
        .unwrap()
    }

    #[test]
    fn empty_stats() {
        let s = Snapshot::from_tweets(Vec::new());
        assert_eq!(s.stats().total, 0);
        assert!(s.stats().date_min.is_none() && s.stats().date_max.is_none());
        assert!(s.stats().span().is_none());
    }

    #[test]
    fn utc_day_boundary_splits_buckets() {
        let s = Snapshot::from_tweets(vec![
            tweet("a", "2024-08-15T23:59:59Z"),
            tweet("b", "2024-08-16T00:00:01Z"),
        ]);
        let per_day: Vec<_> = s.stats().per_day.values().copied().collect();
        assert_eq!(per_day, [1, 1]);
    }

    #[test]
    fn ten_tweets_three_days() {
        // 3 + 4 + 3 by construction.
        let ts = [
            "2024-04-01T01:00:00Z",
            "2024-04-01T02:00:00Z",
            "2024-04-01T23:00:00Z",
            "2024-04-02T00:00:00Z",
            "2024-04-02T05:00:00Z",
            "2024-04-02T06:00:00Z",
            "2024-04-02T07:00:00Z",
            "2024-04-03T00:00:00Z",
            "2024-04-03T10:00:00Z",
            "2024-04-03T12:00:00+05:00",
        ];
        let s = Snapshot::from_tweets(
            ts.iter().enumerate().map(|(i, t)| tweet(&i.to_string(), t)),
        );
        let stats = s.stats();
        assert_eq!(stats.total, 10);
        assert_eq!(stats.per_day.values().sum::<u64>(), 10);
        assert_eq!(
            stats.per_day.values().copied().collect::<Vec<_>>(),
            [3, 4, 3]
        );
        assert_eq!(stats.date_min, Some(parse_day("2024-04-01").unwrap()));
        assert_eq!(stats.date_max, Some(parse_day("2024-04-03").unwrap()));
    }

    #[test]
    fn scan_sorted_and_bounded() {
        let s = Snapshot::from_tweets(vec![
            tweet("b", "2024-04-02T00:00:00Z"),
            tweet("a", "2024-04-02T00:00:00Z"),
            tweet("c", "2024-04-01T00:00:00Z"),
            tweet("d", "2024-04-05T00:00:00Z"),
        ]);
        let ids: Vec<_> = s.scan(&DayRange::all()).iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b", "d"]);
        let day = parse_day("2024-04-02").unwrap();
        assert_eq!(s.scan(&DayRange::single(day)).len() as u64, s.stats().per_day[&day]);
        let gap = DayRange::new(parse_day("2024-04-03").unwrap(), parse_day("2024-04-04").unwrap())
            .unwrap();
        assert!(s.scan(&gap).is_empty());
        assert_eq!(s.get("d").unwrap().id, "d");
        assert!(s.get("zz").is_none());
    }
}
