use std::collections::HashMap;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::Serialize;

use super::query::{Combine, Query};
use super::tokenize::tokenize;
use crate::corpus::Snapshot;
use crate::model::{Engagement, Tweet};

/// Inverted index over one snapshot.
///
/// Documents are numbered in snapshot order, so every postings list is sorted
/// and a date range maps to a contiguous run of document numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Index {
    tweets: Arc<[Tweet]>,
    postings: HashMap<String, Vec<u32>>,
    days: Vec<NaiveDate>,
    engagement: Vec<Engagement>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultPage {
    pub total_matches: u64,
    pub page: u32,
    pub per_page: u32,
    pub items: Vec<Tweet>,
}

impl Index {
    pub fn build(snapshot: &Snapshot) -> Self {
        let tweets = snapshot.shared_tweets();
        let mut postings: HashMap<String, Vec<u32>> = HashMap::new();
        for (doc, tweet) in tweets.iter().enumerate() {
            let mut tokens = tokenize(&tweet.text);
            tokens.sort_unstable();
            tokens.dedup();
            for token in tokens {
                postings.entry(token).or_default().push(doc as u32);
            }
        }
        Index {
            days: tweets.iter().map(Tweet::day).collect(),
            engagement: tweets.iter().map(|t| t.engagement).collect(),
            tweets,
            postings,
        }
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.postings.len()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn tweet(&self, doc: u32) -> &Tweet {
        &self.tweets[doc as usize]
    }

    /// Document numbers containing `token`, ascending.
    pub fn postings(&self, token: &str) -> &[u32] {
        self.postings.get(token).map(Vec::as_slice).unwrap_or_default()
    }

    /// Tweet ids containing `token`, in document order.
    pub fn posting_ids(&self, token: &str) -> Vec<&str> {
        self.postings(token)
            .iter()
            .map(|&d| self.tweet(d).id.as_str())
            .collect()
    }

    /// Every document satisfying `query`'s predicate, in result order.
    pub fn matching_docs(&self, query: &Query) -> Vec<u32> {
        let lists: Vec<&[u32]> = query.keywords().iter().map(|k| self.postings(k)).collect();
        let candidates = match query.combine() {
            Combine::All => intersect(lists),
            Combine::Any => union(lists),
        };

        let (lo, hi) = match query.date_range() {
            Some(r) => (
                self.days.partition_point(|d| *d < r.from()) as u32,
                self.days.partition_point(|d| *d <= r.to()) as u32,
            ),
            None => (0, self.days.len() as u32),
        };
        let mut docs: Vec<u32> = candidates
            .into_iter()
            .filter(|&d| d >= lo && d < hi)
            .filter(|&d| {
                let e = &self.engagement[d as usize];
                e.like_count >= query.min_likes()
                    && e.reply_count >= query.min_replies()
                    && e.retweet_count >= query.min_retweets()
            })
            .collect();
        let sort = query.sort();
        docs.sort_by(|&a, &b| sort.compare(self.tweet(a), self.tweet(b)));
        docs
    }

    /// Runs `query` and returns the requested page.
    pub fn execute(&self, query: &Query) -> ResultPage {
        let docs = self.matching_docs(query);
        let per_page = query.per_page() as usize;
        let start = (query.page() as usize - 1).saturating_mul(per_page);
        let items = docs
            .iter()
            .skip(start)
            .take(per_page)
            .map(|&d| self.tweet(d).clone())
            .collect();
        ResultPage {
            total_matches: docs.len() as u64,
            page: query.page(),
            per_page: query.per_page(),
            items,
        }
    }
}

/// Runs `query` against `index`.
pub fn execute(index: &Index, query: &Query) -> ResultPage {
    index.execute(query)
}

fn intersect(mut lists: Vec<&[u32]>) -> Vec<u32> {
    lists.sort_by_key(|l| l.len());
    let Some((first, rest)) = lists.split_first() else {
        return Vec::new();
    };
    first
        .iter()
        .copied()
        .filter(|d| rest.iter().all(|l| l.binary_search(d).is_ok()))
        .collect()
}

fn union(lists: Vec<&[u32]>) -> Vec<u32> {
    let mut out: Vec<u32> = lists.into_iter().flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}
