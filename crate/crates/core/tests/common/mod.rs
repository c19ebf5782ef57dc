//! Reference implementations used as independent oracles.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mpoxdash_core::search::{Combine, Query};
use mpoxdash_core::{Tweet, TweetLabeler};
use unicode_normalization::UnicodeNormalization;

/// Character-class tokenizer: walks the NFC text one char at a time.
pub fn oracle_tokens(text: &str) -> Vec<String> {
    let nfc: String = text.nfc().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in nfc.chars() {
        if c.is_alphabetic() || c.is_numeric() {
            cur.push(c);
        } else if !cur.is_empty() {
            out.push(cur.to_lowercase());
            cur.clear();
        }
    }
    if !cur.is_empty() {
        out.push(cur.to_lowercase());
    }
    out
}

pub fn oracle_token_set(text: &str) -> BTreeSet<String> {
    oracle_tokens(text).into_iter().collect()
}

/// Linear scan applying the search predicate to every tweet.
pub fn oracle_search(tweets: &[Tweet], q: &Query) -> BTreeSet<String> {
    tweets
        .iter()
        .filter(|t| {
            let toks = oracle_token_set(&t.text);
            let kw_ok = match q.combine() {
                Combine::All => q.keywords().iter().all(|k| toks.contains(k)),
                Combine::Any => q.keywords().iter().any(|k| toks.contains(k)),
            };
            kw_ok
                && t.engagement.like_count >= q.min_likes()
                && t.engagement.reply_count >= q.min_replies()
                && t.engagement.retweet_count >= q.min_retweets()
                && q.date_range().is_none_or(|r| r.contains(t.day()))
        })
        .map(|t| t.id.clone())
        .collect()
}

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, newline records.
pub fn oracle_csv(text: &str) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut row = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if quoted {
            if c == '"' {
                if chars.peek() == Some(&'"') {
                    field.push('"');
                    chars.next();
                } else {
                    quoted = false;
                }
            } else {
                field.push(c);
            }
            continue;
        }
        match c {
            '"' => quoted = true,
            ',' => row.push(std::mem::take(&mut field)),
            '\n' => {
                row.push(std::mem::take(&mut field));
                rows.push(std::mem::take(&mut row));
            }
            '\r' => {}
            _ => field.push(c),
        }
    }
    if !field.is_empty() || !row.is_empty() {
        row.push(field);
        rows.push(row);
    }
    rows
}

/// Counts distinct lexicon hits per rule by brute force and picks the winner.
pub struct OracleLabeler(pub Vec<(mpoxdash_core::ClusterLabel, Vec<&'static str>)>);

impl TweetLabeler for OracleLabeler {
    fn label(&self, tweet: &Tweet) -> mpoxdash_core::ClusterLabel {
        let toks = oracle_token_set(&tweet.text);
        let mut best = (0, mpoxdash_core::ClusterLabel::Uncategorized);
        for (label, words) in &self.0 {
            let n = words.iter().filter(|w| toks.contains(**w)).count();
            if n > best.0 {
                best = (n, *label);
            }
        }
        best.1
    }
}
