use std::path::Path;

use mpoxdash_core::analytics::{SentimentExplanation, TopicExplanation};
use mpoxdash_core::Corpus;
use serde::Serialize;

use crate::{load_config, CmdResult, Ctx, Failure, EXIT_OK};

#[derive(Serialize)]
struct Output {
    id: Option<String>,
    text: String,
    cluster_label: mpoxdash_core::ClusterLabel,
    topics: TopicExplanation,
    sentiment: SentimentExplanation,
}

pub(crate) fn run(ctx: &mut Ctx, config_path: &Path, id: Option<&str>, text: Option<&str>) -> CmdResult {
    let config = load_config(config_path)?;
    let text = match (id, text) {
        (Some(id), _) => {
            let corpus = Corpus::open(&config.corpus_path)
                .map_err(|e| Failure::data(format!("error: {e}")))?;
            let snapshot = corpus.snapshot();
            match snapshot.get(id) {
                Some(t) => t.text.clone(),
                None => return Err(Failure::usage(format!("error: no tweet with id `{id}` in the corpus"))),
            }
        }
        (None, Some(text)) => text.to_string(),
        (None, None) => return Err(Failure::usage("error: one of --id or --text is required")),
    };

    let topics = config.topics.explain(&text);
    let out = Output {
        id: id.map(str::to_string),
        cluster_label: topics.label,
        sentiment: config.sentiment.explain(&text),
        topics,
        text,
    };
    if ctx.json {
        ctx.emit_json(&out)?;
        return Ok(EXIT_OK);
    }

    let w = &mut *ctx.out;
    writeln!(w, "label:     {}", out.cluster_label.as_str())?;
    for t in &out.topics.topics {
        writeln!(w, "  {:<18} {} [{}]", t.label.as_str(), t.matched.len(), t.matched.join(", "))?;
    }
    let s = &out.sentiment;
    writeln!(
        w,
        "sentiment: {} (raw {:.4}, tau {}) [{}]",
        polarity_str(s),
        s.score.raw,
        config.sentiment.tau(),
        s.matched.join(", ")
    )?;
    Ok(EXIT_OK)
}

fn polarity_str(s: &SentimentExplanation) -> &'static str {
    match s.score.polarity {
        mpoxdash_core::Polarity::Negative => "negative",
        mpoxdash_core::Polarity::Neutral => "neutral",
        mpoxdash_core::Polarity::Positive => "positive",
    }
}
