use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use mpoxdash_core::search::parse_range;
use mpoxdash_core::{Corpus, DayRange, ValidationErrors};
use serde_json::json;

use crate::{is_inside, load_config, CmdResult, Ctx, Failure, EXIT_OK};

pub(crate) fn run(
    ctx: &mut Ctx,
    config_path: &Path,
    from: Option<&str>,
    to: Option<&str>,
    out_path: &Path,
) -> CmdResult {
    let config = load_config(config_path)?;
    let mut errors = ValidationErrors::default();
    let range = parse_range(from, to, &mut errors).unwrap_or_else(DayRange::all);
    if !errors.is_empty() {
        return Err(Failure::usage(format!("error: invalid range: {errors}")));
    }
    if is_inside(out_path, &config.corpus_path) {
        return Err(Failure::usage(format!(
            "error: refusing to write {} inside the corpus store {}",
            out_path.display(),
            config.corpus_path.display()
        )));
    }

    let corpus = Corpus::open(&config.corpus_path).map_err(|e| Failure::data(format!("error: {e}")))?;
    let snapshot = corpus.snapshot();
    let tweets = snapshot.scan(&range);

    let cant_write = |e: std::io::Error| Failure::usage(format!("error: {}: {e}", out_path.display()));
    let file = File::create(out_path).map_err(cant_write)?;
    let mut w = BufWriter::new(file);
    for t in tweets {
        serde_json::to_writer(&mut w, t).map_err(|e| cant_write(e.into()))?;
        w.write_all(b"\n").map_err(cant_write)?;
    }
    w.into_inner()
        .map_err(|e| cant_write(e.into_error()))?
        .sync_all()
        .map_err(cant_write)?;

    if ctx.json {
        ctx.emit_json(&json!({
            "out": out_path.display().to_string(),
            "exported": tweets.len(),
            "from": from,
            "to": to,
        }))?;
    } else {
        writeln!(ctx.out, "exported {} tweets to {}", tweets.len(), out_path.display())?;
    }
    Ok(EXIT_OK)
}
