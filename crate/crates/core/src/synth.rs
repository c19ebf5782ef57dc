//! Seeded synthetic corpora for tests and benchmarks.

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{DatasetFormat, Engagement, Provenance, Tweet};

/// Words synthetic tweets are made of. Includes every starter topic category.
pub const VOCAB: &[&str] = &[
    "mpox", "vaccine", "cases", "outbreak", "health", "news", "cdc", "who", "hoax", "scam",
    "covid", "pandemic", "lockdown", "government", "funding", "emergency", "fake", "truth",
    "agenda", "trust", "rash", "symptoms", "clinic", "testing", "spread", "risk", "travel",
    "africa", "clade", "update", "officials", "policy", "media", "again", "worried", "safe",
    "great", "bad", "panic", "help", "today", "city", "report", "data", "first", "new",
];

const LOCATIONS: &[&str] = &[
    "", "", "", "Austin, TX", "austin, tx", "New York", "London", "Lagos", "Kinshasa",
    "Berlin", "Geneva", " new york ", "Toronto",
];

/// `n` tweets spread uniformly over `days` days from `start`, reproducible from `seed`.
///
/// Ids are `s{seed}-{i}`. Token frequencies are skewed towards the front of
/// [`VOCAB`] and engagement counts towards small values.
pub fn synthetic_tweets(n: usize, start: NaiveDate, days: u32, seed: u64) -> Vec<Tweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = start.and_hms_opt(0, 0, 0).expect("midnight").and_utc();
    let span_secs = i64::from(days.max(1)) * 86_400;
    (0..n)
        .map(|i| {
            let len = rng.random_range(1..=12);
            let words: Vec<&str> = (0..len)
                .map(|_| {
                    let u: f64 = rng.random();
                    VOCAB[((u * u) * VOCAB.len() as f64) as usize]
                })
                .collect();
            let mut count = |scale: f64| -> u64 {
                let u: f64 = rng.random();
                (-(1.0 - u).ln() * scale) as u64
            };
            let engagement = Engagement {
                like_count: count(20.0),
                reply_count: count(3.0),
                retweet_count: count(6.0),
            };
            let created_at = origin + Duration::seconds(rng.random_range(0..span_secs));
            Tweet {
                id: format!("s{seed}-{i}"),
                created_at,
                text: words.join(" "),
                author_handle: format!("user{}", rng.random_range(0..500)),
                location: LOCATIONS[rng.random_range(0..LOCATIONS.len())].to_string(),
                engagement,
                lang: "en".into(),
                provenance: Provenance {
                    source: DatasetFormat::StreamSample,
                    source_file: "synthetic".into(),
                    counts_imputed: false,
                },
            }
        })
        .collect()
}
