//! Shared inputs for the benchmarks.

use chrono::NaiveDate;
use mpoxdash_core::synth::synthetic_tweets;
use mpoxdash_core::Snapshot;

/// A seeded `n`-tweet corpus spread over 90 days from 2024-04-01.
pub fn corpus(n: usize) -> Snapshot {
    let start = NaiveDate::from_ymd_opt(2024, 4, 1).expect("valid date");
    Snapshot::from_tweets(synthetic_tweets(n, start, 90, 42))
}
