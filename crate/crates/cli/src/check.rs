use std::path::Path;

use mpoxdash_core::{tokenize, Corpus, Index};
use serde::Serialize;

use crate::{load_config, CmdResult, Ctx, Failure, EXIT_DATA, EXIT_OK};

#[derive(Serialize)]
struct Output {
    corpus_path: String,
    total: u64,
    distinct_tokens: usize,
    date_min: Option<String>,
    date_max: Option<String>,
    ids_digest: String,
    problems: Vec<String>,
    ok: bool,
}

/// Opening the store already verifies the manifest count and digest; this
/// adds the index: every token of every tweet must be in that tweet's
/// posting list, postings must be strictly increasing, and per-day counts
/// must add up.
pub(crate) fn run(ctx: &mut Ctx, config_path: &Path) -> CmdResult {
    let config = load_config(config_path)?;
    let corpus = Corpus::open(&config.corpus_path).map_err(|e| Failure::data(format!("error: {e}")))?;
    let snapshot = corpus.snapshot();
    let index = Index::build(&snapshot);
    let stats = snapshot.stats();

    let mut problems = Vec::new();
    if stats.per_day.values().sum::<u64>() != stats.total {
        problems.push("per-day counts do not sum to the total".to_string());
    }
    for token in index.tokens() {
        let p = index.postings(token);
        if p.windows(2).any(|w| w[0] >= w[1]) {
            problems.push(format!("postings of `{token}` not strictly increasing"));
        }
    }
    for (doc, t) in snapshot.tweets().iter().enumerate() {
        for token in tokenize(&t.text) {
            if index.postings(&token).binary_search(&(doc as u32)).is_err() {
                problems.push(format!("tweet {} missing from postings of `{token}`", t.id));
            }
        }
    }

    let out = Output {
        corpus_path: config.corpus_path.display().to_string(),
        total: stats.total,
        distinct_tokens: index.token_count(),
        date_min: stats.date_min.map(|d| d.to_string()),
        date_max: stats.date_max.map(|d| d.to_string()),
        ids_digest: snapshot.ids_digest().to_string(),
        ok: problems.is_empty(),
        problems,
    };
    if ctx.json {
        ctx.emit_json(&out)?;
    } else {
        let w = &mut *ctx.out;
        writeln!(w, "corpus:    {}", out.corpus_path)?;
        writeln!(w, "tweets:    {}", out.total)?;
        writeln!(w, "tokens:    {}", out.distinct_tokens)?;
        writeln!(
            w,
            "dates:     {} .. {}",
            out.date_min.as_deref().unwrap_or("-"),
            out.date_max.as_deref().unwrap_or("-")
        )?;
        writeln!(w, "ids sha256 {}", out.ids_digest)?;
        for p in &out.problems {
            writeln!(w, "problem:   {p}")?;
        }
        writeln!(w, "{}", if out.ok { "ok" } else { "FAILED" })?;
    }
    Ok(if out.ok { EXIT_OK } else { EXIT_DATA })
}
